#include "geoflow/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace geoflow::spectral {

namespace {

// The FFTW planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t real_size(int dim, int n) {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
    return s;
}

std::size_t half_complex_size(int dim, int n) {
    return real_size(dim - 1, n) * static_cast<std::size_t>(n / 2 + 1);
}

class FftEngine {
public:
    FftEngine(int dim, int n)
        : dim_(dim), n_(n), real_count_(real_size(dim, n)), complex_count_(half_complex_size(dim, n)) {
        real_ = fftw_alloc_real(real_count_);
        spec_ = fftw_alloc_complex(complex_count_);
        std::array<int, 3> dims{n, n, n};
        std::lock_guard lock(planner_mutex());
        r2c_ = fftw_plan_dft_r2c(dim, dims.data(), real_, spec_, FFTW_ESTIMATE);
        c2r_ = fftw_plan_dft_c2r(dim, dims.data(), spec_, real_, FFTW_ESTIMATE);
        if (r2c_ == nullptr || c2r_ == nullptr) throw std::runtime_error("FFTW planning failed");
    }
    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;
    ~FftEngine() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(r2c_);
        fftw_destroy_plan(c2r_);
        fftw_free(real_);
        fftw_free(spec_);
    }

    std::size_t real_count() const { return real_count_; }
    std::size_t complex_count() const { return complex_count_; }

    // Strided real component -> normalized coefficients.
    void forward(const double* src, int stride, Complex* dst) {
        for (std::size_t i = 0; i < real_count_; ++i) real_[i] = src[i * stride];
        fftw_execute(r2c_);
        const double scale = 1.0 / static_cast<double>(real_count_);
        for (std::size_t i = 0; i < complex_count_; ++i) {
            dst[i] = Complex(spec_[i][0] * scale, spec_[i][1] * scale);
        }
    }

    // Normalized coefficients -> strided real component.
    void inverse(const Complex* src, double* dst, int stride) {
        for (std::size_t i = 0; i < complex_count_; ++i) {
            spec_[i][0] = src[i].real();
            spec_[i][1] = src[i].imag();
        }
        fftw_execute(c2r_);
        for (std::size_t i = 0; i < real_count_; ++i) dst[i * stride] = real_[i];
    }

private:
    int dim_;
    int n_;
    std::size_t real_count_;
    std::size_t complex_count_;
    double* real_ = nullptr;
    fftw_complex* spec_ = nullptr;
    fftw_plan r2c_ = nullptr;
    fftw_plan c2r_ = nullptr;
};

FftEngine& engine(int dim, int n) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<FftEngine>> cache;
    auto& slot = cache[{dim, n}];
    if (!slot) slot = std::make_unique<FftEngine>(dim, n);
    return *slot;
}

// Coarse half-complex index -> padded half-complex index (or npos for dropped modes).
struct PadMap {
    int fine_points;
    std::vector<std::size_t> coarse_to_fine;
};

const PadMap& pad_map(const GridSpec& grid) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<PadMap>> cache;
    auto& slot = cache[{grid.dim(), grid.points()}];
    if (!slot) {
        const int m = grid.points();
        const int mf = 3 * m / 2;
        const auto& modes = mode_table(grid);
        auto map = std::make_unique<PadMap>();
        map->fine_points = mf;
        map->coarse_to_fine.resize(modes.size());
        for (std::size_t i = 0; i < modes.size(); ++i) {
            if (modes.is_nyquist(i)) {
                map->coarse_to_fine[i] = static_cast<std::size_t>(-1);
                continue;
            }
            std::size_t idx = 0;
            for (int d = 0; d < grid.dim(); ++d) {
                const int k = modes.integer_wavenumber(i, d);
                const int extent = (d == grid.dim() - 1) ? mf / 2 + 1 : mf;
                const int j = k >= 0 ? k : k + mf;
                idx = idx * static_cast<std::size_t>(extent) + static_cast<std::size_t>(j);
            }
            map->coarse_to_fine[i] = idx;
        }
        slot = std::move(map);
    }
    return *slot;
}

}  // namespace

Spectrum::Spectrum(const GridSpec& grid, int components)
    : grid_(grid),
      components_(components),
      modes_(half_complex_size(grid.dim(), grid.points())),
      coeffs_(modes_ * static_cast<std::size_t>(components)) {
    if (components < 1) throw std::invalid_argument("spectrum needs at least one component");
}

ModeTable::ModeTable(const GridSpec& grid) : dim_(grid.dim()) {
    const int m = grid.points();
    const std::size_t count = half_complex_size(grid.dim(), m);
    const double base = 2.0 * std::numbers::pi / grid.period();
    k_.assign(count * 3, 0);
    xi_.assign(count * 3, 0.0);
    dxi_.assign(count * 3, 0.0);
    lap_.assign(count, 0.0);
    dlap_.assign(count, 0.0);
    nyquist_.assign(count, 0);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t rest = i;
        for (int d = grid.dim() - 1; d >= 0; --d) {
            const int extent = (d == grid.dim() - 1) ? m / 2 + 1 : m;
            const int j = static_cast<int>(rest % extent);
            rest /= extent;
            const int k = (d == grid.dim() - 1 || j <= m / 2) ? j : j - m;
            k_[i * 3 + d] = k;
            xi_[i * 3 + d] = base * k;
            const bool nyq = std::abs(k) == m / 2;
            dxi_[i * 3 + d] = nyq ? 0.0 : base * k;
            if (nyq) nyquist_[i] = 1;
            lap_[i] += xi_[i * 3 + d] * xi_[i * 3 + d];
            dlap_[i] += dxi_[i * 3 + d] * dxi_[i * 3 + d];
        }
    }
}

const ModeTable& mode_table(const GridSpec& grid) {
    thread_local std::map<std::tuple<int, int, double>, std::unique_ptr<ModeTable>> cache;
    auto& slot = cache[{grid.dim(), grid.points(), grid.period()}];
    if (!slot) slot = std::make_unique<ModeTable>(grid);
    return *slot;
}

Spectrum forward(const Field& f) {
    Spectrum s(f.grid(), f.components());
    auto& eng = engine(f.grid().dim(), f.grid().points());
    for (int a = 0; a < f.components(); ++a) {
        eng.forward(f.values().data() + a, f.components(), s.component(a).data());
    }
    return s;
}

Field inverse(const Spectrum& s) {
    Field f(s.grid(), s.components());
    auto& eng = engine(s.grid().dim(), s.grid().points());
    for (int a = 0; a < s.components(); ++a) {
        eng.inverse(s.component(a).data(), f.values().data() + a, s.components());
    }
    return f;
}

Spectrum laplacian(const Spectrum& s) {
    const auto& modes = mode_table(s.grid());
    Spectrum out(s.grid(), s.components());
    for (int a = 0; a < s.components(); ++a) {
        auto src = s.component(a);
        auto dst = out.component(a);
        for (std::size_t i = 0; i < modes.size(); ++i) dst[i] = -modes.laplacian_symbol(i) * src[i];
    }
    return out;
}

Spectrum gradient(const Spectrum& s) {
    const auto& modes = mode_table(s.grid());
    const int l = s.components();
    const int n = s.grid().dim();
    Spectrum out(s.grid(), l * n);
    for (int i = 0; i < n; ++i) {
        for (int a = 0; a < l; ++a) {
            auto src = s.component(a);
            auto dst = out.component(i * l + a);
            for (std::size_t m = 0; m < modes.size(); ++m) {
                dst[m] = Complex(0.0, modes.derivative_symbol(m, i)) * src[m];
            }
        }
    }
    return out;
}

Spectrum divergence(const Spectrum& s) {
    const int n = s.grid().dim();
    if (s.components() != n) throw std::invalid_argument("divergence needs grid-dim components");
    const auto& modes = mode_table(s.grid());
    Spectrum out(s.grid(), 1);
    auto dst = out.component(0);
    for (int i = 0; i < n; ++i) {
        auto src = s.component(i);
        for (std::size_t m = 0; m < modes.size(); ++m) {
            dst[m] += Complex(0.0, modes.derivative_symbol(m, i)) * src[m];
        }
    }
    return out;
}

Spectrum tensor_divergence(const Spectrum& s) {
    const int n = s.grid().dim();
    if (s.components() != n * n) throw std::invalid_argument("tensor divergence needs n*n components");
    const auto& modes = mode_table(s.grid());
    Spectrum out(s.grid(), n);
    for (int i = 0; i < n; ++i) {
        auto dst = out.component(i);
        for (int j = 0; j < n; ++j) {
            auto src = s.component(i * n + j);
            for (std::size_t m = 0; m < modes.size(); ++m) {
                dst[m] += Complex(0.0, modes.derivative_symbol(m, j)) * src[m];
            }
        }
    }
    return out;
}

Field laplacian(const Field& f) { return inverse(laplacian(forward(f))); }
Field gradient(const Field& f) { return inverse(gradient(forward(f))); }
Field divergence(const Field& f) { return inverse(divergence(forward(f))); }

int padded_points(const GridSpec& grid) { return 3 * grid.points() / 2; }

Spectrum dealiased_apply(std::span<const Spectrum* const> inputs, int out_components,
                         const PointKernel& kernel) {
    if (inputs.empty()) throw std::invalid_argument("dealiased_apply needs at least one input");
    const GridSpec& grid = inputs.front()->grid();
    const PadMap& pads = pad_map(grid);
    auto& fine = engine(grid.dim(), pads.fine_points);
    const std::size_t fine_sites = fine.real_count();

    int in_components = 0;
    for (const Spectrum* s : inputs) {
        if (!(s->grid() == grid)) throw std::invalid_argument("dealiased_apply inputs must share a grid");
        in_components += s->components();
    }

    // Pad every input component onto the fine grid, site-major.
    std::vector<double> in_values(fine_sites * static_cast<std::size_t>(in_components));
    std::vector<Complex> padded(fine.complex_count());
    int offset = 0;
    for (const Spectrum* s : inputs) {
        for (int a = 0; a < s->components(); ++a) {
            std::fill(padded.begin(), padded.end(), Complex{});
            auto src = s->component(a);
            for (std::size_t i = 0; i < src.size(); ++i) {
                const std::size_t j = pads.coarse_to_fine[i];
                if (j != static_cast<std::size_t>(-1)) padded[j] = src[i];
            }
            fine.inverse(padded.data(), in_values.data() + offset, in_components);
            ++offset;
        }
    }

    std::vector<double> out_values(fine_sites * static_cast<std::size_t>(out_components));
    for (std::size_t s = 0; s < fine_sites; ++s) {
        kernel(std::span<const double>(in_values.data() + s * in_components, in_components),
               std::span<double>(out_values.data() + s * out_components, out_components));
    }

    Spectrum out(grid, out_components);
    for (int a = 0; a < out_components; ++a) {
        fine.forward(out_values.data() + a, out_components, padded.data());
        auto dst = out.component(a);
        for (std::size_t i = 0; i < dst.size(); ++i) {
            const std::size_t j = pads.coarse_to_fine[i];
            dst[i] = j == static_cast<std::size_t>(-1) ? Complex{} : padded[j];
        }
    }
    return out;
}

}  // namespace geoflow::spectral
