#include "geoflow/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "geoflow/heat.hpp"
#include "geoflow/spectral.hpp"

namespace geoflow::norms {

namespace {

using Stencil = std::vector<std::array<int, 3>>;

constexpr double kRadiusSlack = 1e-12;

double inverse_radius_power(double r, int n) { return std::pow(r, -n); }

double cell_volume(const GridSpec& g) { return std::pow(g.spacing(), g.dim()); }

// Visits the sites of a ball around `center` in stencil order.
template <typename Visit>
void for_each_in_ball(const GridSpec& g, std::size_t center, const Stencil& st, Visit&& visit) {
    const auto c = g.coords(center);
    const int mask = g.points() - 1;
    const int m = g.points();
    const int n = g.dim();
    for (const auto& o : st) {
        std::size_t s = 0;
        for (int d = 0; d < n; ++d) s = s * m + static_cast<std::size_t>((c[d] + o[d]) & mask);
        visit(s);
    }
}

double ball_sum(const GridSpec& g, std::span<const double> scalar, std::size_t center, const Stencil& st) {
    double acc = 0.0;
    for_each_in_ball(g, center, st, [&](std::size_t s) { acc += scalar[s]; });
    return acc;
}

// sum over the ball of |f - mean_ball f|.
double oscillation_sum(const Field& f, std::size_t center, const Stencil& st) {
    const int l = f.components();
    std::array<double, 16> mean{};
    std::vector<double> mean_big;
    double* avg = mean.data();
    if (l > static_cast<int>(mean.size())) {
        mean_big.assign(l, 0.0);
        avg = mean_big.data();
    }
    for_each_in_ball(f.grid(), center, st, [&](std::size_t s) {
        for (int a = 0; a < l; ++a) avg[a] += f(s, a);
    });
    const double count = static_cast<double>(st.size());
    for (int a = 0; a < l; ++a) avg[a] /= count;
    double acc = 0.0;
    for_each_in_ball(f.grid(), center, st, [&](std::size_t s) {
        double sq = 0.0;
        for (int a = 0; a < l; ++a) {
            const double d = f(s, a) - avg[a];
            sq += d * d;
        }
        acc += std::sqrt(sq);
    });
    return acc;
}

struct LexSup {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t center = 0;
    std::size_t radius_index = 0;
};

// values[r][center]; scan centers outer, radii (ascending) inner, keep the first max.
LexSup lexicographic_sup(const std::vector<std::vector<double>>& values) {
    LexSup best;
    if (values.empty()) return best;
    const std::size_t centers = values.front().size();
    for (std::size_t c = 0; c < centers; ++c) {
        for (std::size_t r = 0; r < values.size(); ++r) {
            if (values[r][c] > best.value) best = {values[r][c], c, r};
        }
    }
    return best;
}

std::vector<double> sum_of_squares(const Field& f) {
    std::vector<double> out(f.sites());
    for (std::size_t s = 0; s < f.sites(); ++s) {
        double acc = 0.0;
        for (double v : f.at(s)) acc += v * v;
        out[s] = acc;
    }
    return out;
}

std::vector<double> gradient_energy(const Field& f) { return sum_of_squares(spectral::gradient(f)); }

std::vector<double> magnitude(const Field& f, int power) {
    auto out = sum_of_squares(f);
    if (power == 1) {
        for (double& v : out) v = std::sqrt(v);
    } else if (power != 2) {
        throw std::invalid_argument("magnitude density power must be 1 or 2");
    }
    return out;
}

// Streams density slices j = 0..m and records the cumulative trapezoid integral
// at the last slice of every cylinder radius.
class CylinderSweep {
public:
    CylinderSweep(const GridSpec& grid, const TimeLadder& ladder, double r_max)
        : grid_(grid), ladder_(ladder), radii_(dyadic_radii(r_max, grid.spacing())) {
        for (double r : radii_) {
            last_slice_.push_back(std::max(1, ladder.slice_at_or_after(r * r)));
            stencils_.push_back(ball_stencil(grid, r));
        }
        snapshots_.resize(radii_.size());
        running_.assign(grid.sites(), 0.0);
    }

    void feed(int j, std::vector<double> density) {
        if (j != next_) throw std::logic_error("cylinder sweep fed out of order");
        if (j > 0) {
            const double dt = ladder_.dt();
            for (std::size_t s = 0; s < running_.size(); ++s) {
                running_[s] += dt * 0.5 * (previous_[s] + density[s]);
            }
        }
        for (std::size_t r = 0; r < radii_.size(); ++r) {
            if (last_slice_[r] == j) snapshots_[r] = running_;
        }
        previous_ = std::move(density);
        ++next_;
    }

    bool needs_more() const {
        return next_ <= *std::max_element(last_slice_.begin(), last_slice_.end());
    }

    NormTerm finish(std::string name, bool take_sqrt) const {
        const double hn = cell_volume(grid_);
        std::vector<std::vector<double>> values(radii_.size(), std::vector<double>(grid_.sites()));
        for (std::size_t r = 0; r < radii_.size(); ++r) {
            const double weight = inverse_radius_power(radii_[r], grid_.dim());
            for (std::size_t c = 0; c < grid_.sites(); ++c) {
                values[r][c] = ball_sum(grid_, snapshots_[r], c, stencils_[r]) * hn * weight;
            }
        }
        const LexSup best = lexicographic_sup(values);
        const double v = take_sqrt ? std::sqrt(std::max(best.value, 0.0)) : best.value;
        return {std::move(name), v,
                ParabolicCylinder{best.center, radii_[best.radius_index], last_slice_[best.radius_index]}};
    }

private:
    GridSpec grid_;
    TimeLadder ladder_;
    std::vector<double> radii_;
    std::vector<int> last_slice_;
    std::vector<Stencil> stencils_;
    std::vector<std::vector<double>> snapshots_;
    std::vector<double> running_;
    std::vector<double> previous_;
    int next_ = 0;
};

struct TimeSup {
    double value = 0.0;
    SliceIndex where;
    void offer(int j, double t, double v) {
        if (where.slice == 0 || v > value) {
            value = v;
            where = {j, t};
        }
    }
};

void check_ball_radius(const GridSpec& g, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("radius must be positive");
    if (R > g.period() / 4.0 * (1.0 + kRadiusSlack)) {
        throw std::invalid_argument("radius exceeds L/4, where torus balls start to wrap");
    }
}

void check_cylinder_radius(const GridSpec& g, const TimeLadder& ladder, double R) {
    check_ball_radius(g, R);
    if (R * R > ladder.t_final() * (1.0 + kRadiusSlack)) {
        throw std::invalid_argument("cylinder radius squared exceeds the ladder's final time");
    }
}

// Carleson functional of the caloric extension of u0 with a given density.
template <typename Density>
NormReport caloric_carleson(const Field& u0, double R, const TimeLadder& ladder, std::string name,
                            Density density) {
    check_cylinder_radius(u0.grid(), ladder, R);
    const auto s0 = spectral::forward(u0);
    CylinderSweep sweep(u0.grid(), ladder, R);
    for (int j = 0; sweep.needs_more(); ++j) {
        const Field slice = j == 0 ? u0 : spectral::inverse(heat::heat_semigroup(s0, ladder.time(j)));
        sweep.feed(j, density(slice));
    }
    NormReport report;
    report.terms.push_back(sweep.finish(std::move(name), true));
    report.value = report.terms.front().value;
    report.maximizer = report.terms.front().where;
    return report;
}

}  // namespace

const NormTerm& NormReport::term(std::string_view name) const {
    for (const auto& t : terms) {
        if (t.name == name) return t;
    }
    throw std::out_of_range("norm report has no term named " + std::string(name));
}

std::vector<double> dyadic_radii(double r_max, double spacing) {
    if (!(r_max > 0.0)) throw std::invalid_argument("maximal radius must be positive");
    std::vector<double> radii{r_max};
    for (double r = r_max / 2.0; r >= 2.0 * spacing * (1.0 - kRadiusSlack); r /= 2.0) radii.push_back(r);
    std::reverse(radii.begin(), radii.end());
    return radii;
}

std::vector<std::array<int, 3>> ball_stencil(const GridSpec& grid, double radius) {
    const double q = radius / grid.spacing();
    const double limit = q * q * (1.0 + kRadiusSlack);
    const int reach = static_cast<int>(std::floor(q * (1.0 + kRadiusSlack)));
    if (2 * reach >= grid.points()) throw std::invalid_argument("ball wraps around the torus");
    const int n = grid.dim();
    Stencil st;
    std::array<int, 3> o{0, 0, 0};
    std::array<int, 3> lo{0, 0, 0};
    std::array<int, 3> hi{0, 0, 0};
    for (int d = 0; d < n; ++d) {
        lo[d] = -reach;
        hi[d] = reach;
    }
    for (o[0] = lo[0]; o[0] <= hi[0]; ++o[0]) {
        for (o[1] = lo[1]; o[1] <= hi[1]; ++o[1]) {
            for (o[2] = lo[2]; o[2] <= hi[2]; ++o[2]) {
                const double r2 = static_cast<double>(o[0] * o[0] + o[1] * o[1] + o[2] * o[2]);
                if (r2 <= limit) st.push_back(o);
            }
        }
    }
    return st;
}

double ball_oscillation(const Field& f, const BallSpec& ball) {
    const auto st = ball_stencil(f.grid(), ball.radius);
    return oscillation_sum(f, ball.center, st) * cell_volume(f.grid()) *
           inverse_radius_power(ball.radius, f.grid().dim());
}

double ball_mean_oscillation(const Field& f, const BallSpec& ball) {
    const auto st = ball_stencil(f.grid(), ball.radius);
    return oscillation_sum(f, ball.center, st) / static_cast<double>(st.size());
}

double cylinder_average(const SpaceTimeField& density, const ParabolicCylinder& cyl) {
    if (density.components() != 1) throw std::invalid_argument("cylinder density must be scalar");
    if (cyl.last_slice < 1 || cyl.last_slice > density.steps()) {
        throw std::invalid_argument("cylinder window outside the ladder");
    }
    const GridSpec& g = density.grid();
    const double dt = density.ladder().dt();
    const auto st = ball_stencil(g, cyl.radius);
    std::vector<double> integral(g.sites(), 0.0);
    for (int j = 1; j <= cyl.last_slice; ++j) {
        auto prev = density.slice(j - 1).values();
        auto cur = density.slice(j).values();
        for (std::size_t s = 0; s < integral.size(); ++s) integral[s] += dt * 0.5 * (prev[s] + cur[s]);
    }
    return ball_sum(g, integral, cyl.center, st) * cell_volume(g) * inverse_radius_power(cyl.radius, g.dim());
}

SpaceTimeField gradient_density(const SpaceTimeField& f) {
    std::vector<Field> out;
    out.reserve(f.steps() + 1);
    for (const auto& s : f.slices()) out.emplace_back(f.grid(), 1, gradient_energy(s));
    return {f.ladder(), std::move(out)};
}

SpaceTimeField magnitude_density(const SpaceTimeField& f, int power) {
    std::vector<Field> out;
    out.reserve(f.steps() + 1);
    for (const auto& s : f.slices()) out.emplace_back(f.grid(), 1, magnitude(s, power));
    return {f.ladder(), std::move(out)};
}

NormReport bmo_seminorm(const Field& f, double R) {
    const GridSpec& g = f.grid();
    check_ball_radius(g, R);
    const auto radii = dyadic_radii(R, g.spacing());
    const double hn = cell_volume(g);
    std::vector<std::vector<double>> literal(radii.size(), std::vector<double>(g.sites()));
    std::vector<std::vector<double>> normalized(radii.size(), std::vector<double>(g.sites()));
    for (std::size_t r = 0; r < radii.size(); ++r) {
        const auto st = ball_stencil(g, radii[r]);
        const double weight = inverse_radius_power(radii[r], g.dim());
        const double count = static_cast<double>(st.size());
        for (std::size_t c = 0; c < g.sites(); ++c) {
            const double osc = oscillation_sum(f, c, st);
            literal[r][c] = osc * hn * weight;
            normalized[r][c] = osc / count;
        }
    }
    const LexSup a = lexicographic_sup(literal);
    const LexSup b = lexicographic_sup(normalized);
    NormReport report;
    report.value = a.value;
    report.maximizer = BallSpec{a.center, radii[a.radius_index]};
    report.terms.push_back({"oscillation", a.value, report.maximizer});
    report.terms.push_back({"mean_oscillation", b.value, BallSpec{b.center, radii[b.radius_index]}});
    return report;
}

std::vector<std::pair<double, double>> vmo_profile(const Field& f) {
    const GridSpec& g = f.grid();
    const auto radii = dyadic_radii(g.period() / 4.0, g.spacing());
    const double hn = cell_volume(g);
    std::vector<std::pair<double, double>> profile;
    double running = 0.0;
    for (double r : radii) {
        const auto st = ball_stencil(g, r);
        const double weight = inverse_radius_power(r, g.dim());
        for (std::size_t c = 0; c < g.sites(); ++c) {
            running = std::max(running, oscillation_sum(f, c, st) * hn * weight);
        }
        profile.emplace_back(r, running);
    }
    return profile;
}

NormReport carleson_bmo(const Field& u0, double R, const TimeLadder& ladder) {
    return caloric_carleson(u0, R, ladder, "carleson_grad", [](const Field& s) { return gradient_energy(s); });
}

NormReport bmo_inv_norm(const Field& u0, double R, const TimeLadder& ladder) {
    return caloric_carleson(u0, R, ladder, "carleson_l2", [](const Field& s) { return magnitude(s, 2); });
}

double max_cylinder_radius(const GridSpec& grid, const TimeLadder& ladder) {
    return std::min(std::sqrt(ladder.t_final()), grid.period() / 4.0);
}

NormReport x_norm(const SpaceTimeField& f) {
    const TimeLadder& ladder = f.ladder();
    CylinderSweep sweep(f.grid(), ladder, max_cylinder_radius(f.grid(), ladder));
    TimeSup linf;
    TimeSup grad;
    for (int j = 0; j <= f.steps(); ++j) {
        auto energy = gradient_energy(f.slice(j));
        if (j > 0) {
            const double t = ladder.time(j);
            linf.offer(j, t, f.slice(j).sup_norm());
            grad.offer(j, t, std::sqrt(t) * std::sqrt(*std::max_element(energy.begin(), energy.end())));
        }
        if (sweep.needs_more()) sweep.feed(j, std::move(energy));
    }
    NormReport report;
    report.terms.push_back({"sup_linf", linf.value, linf.where});
    report.terms.push_back({"sup_sqrt_t_grad", grad.value, grad.where});
    report.terms.push_back(sweep.finish("carleson_grad", true));
    report.value = linf.value + (grad.value + report.terms[2].value);
    report.maximizer = report.terms[2].where;
    return report;
}

double x_seminorm(const NormReport& x_report) {
    return x_report.term("sup_sqrt_t_grad").value + x_report.term("carleson_grad").value;
}

NormReport y_norm(const SpaceTimeField& f) {
    const TimeLadder& ladder = f.ladder();
    CylinderSweep sweep(f.grid(), ladder, max_cylinder_radius(f.grid(), ladder));
    TimeSup weighted;
    for (int j = 0; j <= f.steps(); ++j) {
        if (j > 0) weighted.offer(j, ladder.time(j), ladder.time(j) * f.slice(j).sup_norm());
        if (sweep.needs_more()) sweep.feed(j, magnitude(f.slice(j), 1));
    }
    NormReport report;
    report.terms.push_back({"sup_t_linf", weighted.value, weighted.where});
    report.terms.push_back(sweep.finish("carleson_l1", false));
    report.value = weighted.value + report.terms[1].value;
    report.maximizer = report.terms[1].where;
    return report;
}

NormReport z_norm(const SpaceTimeField& f) {
    const TimeLadder& ladder = f.ladder();
    CylinderSweep sweep(f.grid(), ladder, max_cylinder_radius(f.grid(), ladder));
    TimeSup weighted;
    for (int j = 0; j <= f.steps(); ++j) {
        if (j > 0) weighted.offer(j, ladder.time(j), std::sqrt(ladder.time(j)) * f.slice(j).sup_norm());
        if (sweep.needs_more()) sweep.feed(j, magnitude(f.slice(j), 2));
    }
    NormReport report;
    report.terms.push_back({"sup_sqrt_t_linf", weighted.value, weighted.where});
    report.terms.push_back(sweep.finish("carleson_l2", true));
    report.value = weighted.value + report.terms[1].value;
    report.maximizer = report.terms[1].where;
    return report;
}

}  // namespace geoflow::norms
