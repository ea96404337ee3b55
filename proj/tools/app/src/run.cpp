#include "geoflow/app/run.hpp"

#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "geoflow/app/report.hpp"
#include "geoflow/app/verify.hpp"
#include "geoflow/data.hpp"
#include "geoflow/heat.hpp"
#include "geoflow/hmflow.hpp"
#include "geoflow/lcflow.hpp"
#include "geoflow/norms.hpp"
#include "geoflow/snapshot.hpp"

namespace geoflow::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class RunLog {
public:
    explicit RunLog(const fs::path& path) : out_(path, std::ios::app) {}

    void line(const std::string& msg) {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        std::tm tm{};
        gmtime_r(&t, &tm);
        out_ << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ' << msg << '\n';
        out_.flush();
    }

private:
    std::ofstream out_;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json params_json(const data::FamilyParams& p) {
    return {{"alpha", p.alpha}, {"modes", p.modes}, {"wavenumber", p.wavenumber}, {"target_dim", p.target_dim}};
}

void write_snapshots(const ExperimentConfig& cfg, const std::string& stem, const SpaceTimeField& u) {
    if (cfg.snapshots.empty()) return;
    const fs::path dir = cfg.output / "snapshots";
    fs::create_directories(dir);
    for (int j : cfg.snapshots) write_snapshot(dir / (stem + "_" + std::to_string(j) + ".gfs"), u.slice(j));
}

Field sphere_initial(const ExperimentConfig& cfg) {
    return data::sphere_data(cfg.data.family, cfg.data.params, cfg.grid, cfg.seed);
}

Field velocity_initial(const ExperimentConfig& cfg) {
    return data::velocity_data(cfg.data.velocity_family, cfg.data.params, cfg.grid, cfg.seed);
}

json base_doc(const ExperimentConfig& cfg) { return {{"kind", to_string(cfg.kind)}, {"config", config_json(cfg)}}; }

void add_family_cells(CsvTable& t, const ExperimentConfig& cfg, const std::string& velocity, double alpha) {
    const auto& p = cfg.data.params;
    t.cell(cfg.data.family).cell(velocity).cell(alpha).cell(static_cast<long long>(p.modes));
    t.cell(static_cast<long long>(p.wavenumber)).cell(static_cast<long long>(p.target_dim));
    t.cell(std::to_string(cfg.seed));
}

int run_extend(const ExperimentConfig& cfg, RunLog&) {
    const Field u0 = sphere_initial(cfg);
    const SpaceTimeField ext = heat::caloric_extension(u0, cfg.ladder);
    const double R = cfg.radius.value_or(norms::max_cylinder_radius(cfg.grid, cfg.ladder));
    json doc = base_doc(cfg);
    doc["radius"] = R;
    doc["bmo"] = norm_report_json(cfg.grid, norms::bmo_seminorm(u0, R));
    doc["carleson_bmo"] = norm_report_json(cfg.grid, norms::carleson_bmo(u0, R, cfg.ladder));
    doc["x_norm"] = norm_report_json(cfg.grid, norms::x_norm(ext));
    write_json(cfg.output / "diagnostics.json", doc);
    write_snapshots(cfg, "extension", ext);
    return kOk;
}

int run_norms(const ExperimentConfig& cfg, RunLog&) {
    const Field u0 = sphere_initial(cfg);
    const double R = cfg.radius.value_or(norms::max_cylinder_radius(cfg.grid, cfg.ladder));
    const auto bmo = norms::bmo_seminorm(u0, R);
    const auto carleson = norms::carleson_bmo(u0, R, cfg.ladder);
    const double ratio = bmo.value > 0.0 ? carleson.value / bmo.value : 0.0;
    json doc = base_doc(cfg);
    doc["radius"] = R;
    doc["bmo"] = norm_report_json(cfg.grid, bmo);
    doc["carleson_bmo"] = norm_report_json(cfg.grid, carleson);
    doc["carleson_ratio"] = ratio;
    json profile = json::array();
    for (const auto& [r, v] : norms::vmo_profile(u0)) profile.push_back({r, v});
    doc["vmo_profile"] = profile;

    CsvTable table(norms_columns());
    add_family_cells(table, cfg, cfg.grid.dim() >= 2 ? cfg.data.velocity_family : "", cfg.data.params.alpha);
    table.cell(R).cell(bmo.value).cell(bmo.term("mean_oscillation").value).cell(carleson.value);
    if (cfg.grid.dim() >= 2) {
        const auto inv = norms::bmo_inv_norm(velocity_initial(cfg), R, cfg.ladder);
        doc["velocity_bmo_inv"] = norm_report_json(cfg.grid, inv);
        table.cell(inv.value);
    } else {
        table.empty();
    }
    table.cell(ratio);
    table.end_row();
    write_json(cfg.output / "norms.json", doc);
    write_text(cfg.output / "norms.csv", table.str());
    return kOk;
}

int run_solve_hmf(const ExperimentConfig& cfg, RunLog& log) {
    const Field u0 = sphere_initial(cfg);
    const auto solver = cfg.solver();
    const auto res = hmflow::solve_hmf(u0, solver);
    json doc = base_doc(cfg);
    doc["status"] = hmflow::to_string(res.status);
    doc["converged"] = res.converged;
    doc["message"] = res.message;
    doc["iterations"] = res.increments.size();
    doc["increments"] = res.increments;
    doc["contraction_estimates"] = res.contraction_estimates;
    doc["theta"] = hmflow::measured_contraction(res.increments, 1e3 * solver.picard_tol);
    doc["residual_norm"] = res.residual_norm;
    doc["constraint_defect"] = res.constraint_defect;
    doc["data_bmo"] = norm_report_json(cfg.grid, norms::bmo_seminorm(u0, norms::max_cylinder_radius(cfg.grid, cfg.ladder)));
    doc["solution_x"] = res.converged ? norm_report_json(cfg.grid, norms::x_norm(res.solution)) : json(nullptr);
    write_json(cfg.output / "diagnostics.json", doc);
    if (res.status != hmflow::SolveStatus::tube_escape) write_snapshots(cfg, "u", res.solution);
    log.line(std::string("solve-hmf status ") + hmflow::to_string(res.status));
    return res.converged ? kOk : kNoConvergence;
}

int run_solve_lc(const ExperimentConfig& cfg, RunLog& log) {
    const Field u0 = velocity_initial(cfg);
    const Field d0 = sphere_initial(cfg);
    const auto solver = cfg.solver();
    const auto res = lcflow::solve_lc(u0, d0, solver);
    json doc = base_doc(cfg);
    doc["status"] = hmflow::to_string(res.status);
    doc["converged"] = res.converged;
    doc["message"] = res.message;
    doc["iterations"] = res.increments.size();
    doc["increments"] = res.increments;
    doc["contraction_estimates"] = res.contraction_estimates;
    doc["theta"] = hmflow::measured_contraction(res.increments, 1e3 * solver.picard_tol);
    doc["residual_u"] = res.residual_u;
    doc["residual_d"] = res.residual_d;
    doc["constraint_defect"] = res.constraint_defect;
    doc["divergence_defect"] = res.divergence_defect;
    if (res.converged) {
        doc["velocity_z"] = norm_report_json(cfg.grid, norms::z_norm(res.state.u));
        doc["director_x"] = norm_report_json(cfg.grid, norms::x_norm(res.state.d));
    } else {
        doc["velocity_z"] = nullptr;
        doc["director_x"] = nullptr;
    }
    write_json(cfg.output / "diagnostics.json", doc);
    if (res.status != hmflow::SolveStatus::tube_escape) {
        write_snapshots(cfg, "u", res.state.u);
        write_snapshots(cfg, "d", res.state.d);
    }
    log.line(std::string("solve-lc status ") + hmflow::to_string(res.status));
    return res.converged ? kOk : kNoConvergence;
}

int run_sweep(const ExperimentConfig& cfg, RunLog& log) {
    const auto solver = cfg.solver();
    CsvTable table(sweep_columns());
    json doc = base_doc(cfg);
    json rows = json::array();
    auto params_at = [&](double alpha) {
        data::FamilyParams p = cfg.data.params;
        p.alpha = alpha;
        return p;
    };
    if (cfg.sweep.flow == "hmf") {
        const auto rep = hmflow::wellposedness_sweep(
            [&](double a) { return data::sphere_data(cfg.data.family, params_at(a), cfg.grid, cfg.seed); },
            cfg.sweep.alphas, solver);
        for (const auto& r : rep.rows) {
            table.cell("hmf");
            add_family_cells(table, cfg, "", r.alpha);
            table.cell(r.data_bmo);
            if (r.converged) table.cell(r.solution_x); else table.empty();
            if (r.status == hmflow::SolveStatus::tube_escape) table.empty(); else table.cell(r.constraint_defect);
            table.cell(static_cast<long long>(r.iterations)).cell(r.converged);
            table.cell(hmflow::to_string(r.status)).cell(r.theta);
            if (r.converged) table.cell(r.c_ratio).cell(r.lipschitz); else table.empty().empty();
            table.end_row();
            rows.push_back({{"alpha", r.alpha}, {"data_bmo", r.data_bmo}, {"converged", r.converged},
                            {"status", hmflow::to_string(r.status)}, {"iterations", r.iterations},
                            {"theta", r.theta}, {"solution_x", r.solution_x}, {"c_ratio", r.c_ratio},
                            {"lipschitz", r.lipschitz}, {"constraint_defect", r.constraint_defect}});
        }
        doc["threshold"] = rep.threshold;
        doc["theta_monotone"] = rep.theta_monotone;
    } else {
        const auto rep = lcflow::lc_sweep(
            [&](double a) {
                const auto p = params_at(a);
                return std::pair{data::velocity_data(cfg.data.velocity_family, p, cfg.grid, cfg.seed),
                                 data::sphere_data(cfg.data.family, p, cfg.grid, cfg.seed)};
            },
            cfg.sweep.alphas, solver);
        for (const auto& r : rep.rows) {
            table.cell("lc");
            add_family_cells(table, cfg, cfg.data.velocity_family, r.alpha);
            table.cell(r.data_size);
            if (r.converged) table.cell(r.solution_size); else table.empty();
            if (r.status == hmflow::SolveStatus::tube_escape) table.empty(); else table.cell(r.constraint_defect);
            table.cell(static_cast<long long>(r.iterations)).cell(r.converged);
            table.cell(hmflow::to_string(r.status)).cell(r.theta);
            if (r.converged) table.cell(r.c_ratio); else table.empty();
            table.empty();
            table.end_row();
            rows.push_back({{"alpha", r.alpha}, {"data_size", r.data_size}, {"converged", r.converged},
                            {"status", hmflow::to_string(r.status)}, {"iterations", r.iterations},
                            {"theta", r.theta}, {"solution_size", r.solution_size}, {"c_ratio", r.c_ratio},
                            {"constraint_defect", r.constraint_defect}});
        }
        doc["threshold"] = rep.threshold;
        doc["theta_monotone"] = rep.theta_monotone;
    }
    doc["rows"] = rows;
    write_json(cfg.output / "sweep.json", doc);
    write_text(cfg.output / "sweep.csv", table.str());
    log.line("sweep threshold " + format_double(doc["threshold"].get<double>()));
    return kOk;
}

int run_verify(const ExperimentConfig& cfg, RunLog& log) {
    CsvTable table(verify_columns());
    json criteria = json::array();
    bool all = true;
    for (int id = 1; id <= kCriterionCount; ++id) {
        const Stopwatch clock;
        const CriterionResult r = verify_criterion(id, cfg.seed);
        log.line("criterion " + std::to_string(id) + (r.passed() ? " pass" : " FAIL") + " in " +
                 format_double(clock.seconds()) + " s");
        all = all && r.passed();
        json checks = json::array();
        for (const auto& c : r.checks) {
            checks.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"bound", c.bound},
                              {"passed", c.passed}});
            table.cell(static_cast<long long>(id)).cell(c.name).cell(c.value).cell(c.relation).cell(c.bound);
            table.cell(c.passed).end_row();
        }
        json report = json::object();
        for (const auto& [k, v] : r.report) report[k] = v;
        criteria.push_back({{"id", id}, {"title", r.title}, {"passed", r.passed()}, {"checks", checks}, {"report", report}});
    }
    json doc = base_doc(cfg);
    doc["passed"] = all;
    doc["criteria"] = criteria;
    write_json(cfg.output / "verify.json", doc);
    write_text(cfg.output / "verify.csv", table.str());
    return all ? kOk : kError;
}

}  // namespace

json config_json(const ExperimentConfig& cfg) {
    json doc{{"kind", to_string(cfg.kind)},
             {"grid", {{"dim", cfg.grid.dim()}, {"points", cfg.grid.points()}, {"period", cfg.grid.period()}}},
             {"ladder", {{"t_final", cfg.ladder.t_final()}, {"steps", cfg.ladder.steps()}}},
             {"data", params_json(cfg.data.params)},
             {"solver", {{"picard_tol", cfg.picard_tol}, {"max_iters", cfg.max_iters}, {"constraint_tol", cfg.constraint_tol}}},
             {"sweep", {{"flow", cfg.sweep.flow}, {"alphas", cfg.sweep.alphas}}},
             {"snapshots", cfg.snapshots},
             {"seed", cfg.seed}};
    doc["data"]["family"] = cfg.data.family;
    doc["data"]["velocity_family"] = cfg.data.velocity_family;
    if (cfg.radius) doc["radius"] = *cfg.radius;
    return doc;
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols{
        "flow",      "family",          "velocity_family", "alpha",      "modes",     "wavenumber",
        "target_dim", "seed",           "data_size",       "solution_size", "constraint_defect", "iterations",
        "converged", "status",          "theta",           "c_ratio",    "lipschitz"};
    return cols;
}

const std::vector<std::string>& norms_columns() {
    static const std::vector<std::string> cols{
        "family", "velocity_family", "alpha",        "modes",           "wavenumber",       "target_dim", "seed",
        "radius", "bmo",             "mean_oscillation", "carleson_bmo", "velocity_bmo_inv", "carleson_ratio"};
    return cols;
}

const std::vector<std::string>& verify_columns() {
    static const std::vector<std::string> cols{"criterion", "check", "value", "relation", "bound", "passed"};
    return cols;
}

int run(const ExperimentConfig& cfg) {
    try {
        fs::create_directories(cfg.output);
    } catch (const std::exception& e) {
        std::cerr << "geoflow: " << e.what() << '\n';
        return kError;
    }
    RunLog log(cfg.output / "run.log");
    log.line(std::string("start ") + to_string(cfg.kind) + " seed " + std::to_string(cfg.seed));
    const Stopwatch clock;
    int code = kError;
    try {
        switch (cfg.kind) {
            case Kind::extend: code = run_extend(cfg, log); break;
            case Kind::norms: code = run_norms(cfg, log); break;
            case Kind::solve_hmf: code = run_solve_hmf(cfg, log); break;
            case Kind::solve_lc: code = run_solve_lc(cfg, log); break;
            case Kind::sweep: code = run_sweep(cfg, log); break;
            case Kind::verify: code = run_verify(cfg, log); break;
        }
    } catch (const std::exception& e) {
        log.line(std::string("error: ") + e.what());
        std::cerr << "geoflow: " << e.what() << '\n';
        code = kError;
    }
    log.line("exit " + std::to_string(code) + " after " + format_double(clock.seconds()) + " s");
    return code;
}

}  // namespace geoflow::app
