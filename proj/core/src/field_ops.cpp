#include "geoflow/field_ops.hpp"

#include <stdexcept>
#include <vector>

namespace geoflow {

namespace {

void require_same_shape(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid()) || a.components() != b.components()) {
        throw std::invalid_argument("fields differ in grid or component count");
    }
}

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

template <typename Op>
SpaceTimeField slicewise(const SpaceTimeField& a, const SpaceTimeField& b, Op op) {
    if (!(a.ladder() == b.ladder())) throw std::invalid_argument("space-time fields differ in ladder");
    std::vector<Field> out;
    out.reserve(a.steps() + 1);
    for (int j = 0; j <= a.steps(); ++j) out.push_back(op(a.slice(j), b.slice(j)));
    return {a.ladder(), std::move(out)};
}

}  // namespace

Field operator+(const Field& a, const Field& b) {
    require_same_shape(a, b);
    Field out = a;
    auto dst = out.values();
    auto src = b.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    return out;
}

Field operator-(const Field& a, const Field& b) {
    require_same_shape(a, b);
    Field out = a;
    auto dst = out.values();
    auto src = b.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= src[i];
    return out;
}

Field operator*(double s, const Field& a) {
    Field out = a;
    for (double& v : out.values()) v *= s;
    return out;
}

Field axpy(const Field& a, double s, const Field& b) {
    require_same_shape(a, b);
    Field out = a;
    auto dst = out.values();
    auto src = b.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
    return out;
}

Field multiply(const Field& scalar, const Field& f) {
    require_same_grid(scalar, f);
    if (scalar.components() != 1) throw std::invalid_argument("multiply expects a scalar field");
    Field out = f;
    for (std::size_t s = 0; s < f.sites(); ++s) {
        for (double& v : out.at(s)) v *= scalar(s, 0);
    }
    return out;
}

Field tensor(const Field& a, const Field& b) {
    require_same_grid(a, b);
    const int la = a.components();
    const int lb = b.components();
    Field out(a.grid(), la * lb);
    for (std::size_t s = 0; s < a.sites(); ++s) {
        for (int i = 0; i < la; ++i) {
            for (int j = 0; j < lb; ++j) out(s, i * lb + j) = a(s, i) * b(s, j);
        }
    }
    return out;
}

Field gradient_gram(const Field& grad, int components) {
    const int n = grad.grid().dim();
    const int l = components;
    if (grad.components() != l * n) throw std::invalid_argument("gradient stack has wrong width");
    Field out(grad.grid(), n * n);
    for (std::size_t s = 0; s < grad.sites(); ++s) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                double dot = 0.0;
                for (int a = 0; a < l; ++a) dot += grad(s, i * l + a) * grad(s, j * l + a);
                out(s, i * n + j) = dot;
                out(s, j * n + i) = dot;
            }
        }
    }
    return out;
}

Field advect(const Field& u, const Field& grad_d) {
    require_same_grid(u, grad_d);
    const int n = u.grid().dim();
    if (u.components() != n) throw std::invalid_argument("advecting velocity needs grid-dim components");
    if (grad_d.components() % n != 0) throw std::invalid_argument("gradient stack has wrong width");
    const int l = grad_d.components() / n;
    Field out(u.grid(), l);
    for (std::size_t s = 0; s < u.sites(); ++s) {
        for (int a = 0; a < l; ++a) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += u(s, i) * grad_d(s, i * l + a);
            out(s, a) = acc;
        }
    }
    return out;
}

Field norm_squared(const Field& f) {
    Field out(f.grid(), 1);
    for (std::size_t s = 0; s < f.sites(); ++s) {
        double acc = 0.0;
        for (double v : f.at(s)) acc += v * v;
        out(s, 0) = acc;
    }
    return out;
}

SpaceTimeField operator+(const SpaceTimeField& a, const SpaceTimeField& b) {
    return slicewise(a, b, [](const Field& x, const Field& y) { return x + y; });
}

SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b) {
    return slicewise(a, b, [](const Field& x, const Field& y) { return x - y; });
}

SpaceTimeField operator*(double s, const SpaceTimeField& a) {
    std::vector<Field> out;
    out.reserve(a.steps() + 1);
    for (const auto& f : a.slices()) out.push_back(s * f);
    return {a.ladder(), std::move(out)};
}

}  // namespace geoflow
