#include "geoflow/app/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace geoflow::app {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw std::invalid_argument(std::string(where) + " must be a JSON object");
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw std::invalid_argument("unknown key '" + key + "' in " + std::string(where));
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

Kind parse_kind(const std::string& s) {
    if (s == "extend") return Kind::extend;
    if (s == "norms") return Kind::norms;
    if (s == "solve-hmf") return Kind::solve_hmf;
    if (s == "solve-lc") return Kind::solve_lc;
    if (s == "sweep") return Kind::sweep;
    if (s == "verify") return Kind::verify;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

const char* to_string(Kind kind) {
    switch (kind) {
        case Kind::extend: return "extend";
        case Kind::norms: return "norms";
        case Kind::solve_hmf: return "solve-hmf";
        case Kind::solve_lc: return "solve-lc";
        case Kind::sweep: return "sweep";
        case Kind::verify: return "verify";
    }
    return "unknown";
}

hmflow::SolverConfig ExperimentConfig::solver() const {
    hmflow::SolverConfig cfg{grid, ladder, picard_tol, max_iters, constraint_tol};
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::string& json_text, std::optional<Kind> kind) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(root, "config", {"kind", "grid", "ladder", "data", "solver", "sweep", "radius", "snapshots", "seed", "output"});
    ExperimentConfig cfg;
    if (root.contains("kind")) {
        cfg.kind = parse_kind(get_or<std::string>(root, "kind", ""));
        if (kind && *kind != cfg.kind) {
            throw std::invalid_argument(std::string("config kind '") + to_string(cfg.kind) + "' conflicts with '" +
                                        to_string(*kind) + "'");
        }
    } else if (kind) {
        cfg.kind = *kind;
    } else {
        throw std::invalid_argument("config needs a 'kind'");
    }

    if (root.contains("grid")) {
        const json& g = root.at("grid");
        reject_unknown(g, "grid", {"dim", "points", "period"});
        cfg.grid = GridSpec(get_or(g, "dim", cfg.grid.dim()), get_or(g, "points", cfg.grid.points()),
                            get_or(g, "period", cfg.grid.period()));
    }
    if (root.contains("ladder")) {
        const json& l = root.at("ladder");
        reject_unknown(l, "ladder", {"t_final", "steps"});
        cfg.ladder = TimeLadder(get_or(l, "t_final", cfg.ladder.t_final()), get_or(l, "steps", cfg.ladder.steps()));
    }
    if (root.contains("data")) {
        const json& d = root.at("data");
        reject_unknown(d, "data", {"family", "alpha", "modes", "wavenumber", "target_dim", "velocity_family"});
        cfg.data.family = get_or(d, "family", cfg.data.family);
        cfg.data.params.alpha = get_or(d, "alpha", cfg.data.params.alpha);
        cfg.data.params.modes = get_or(d, "modes", cfg.data.params.modes);
        cfg.data.params.wavenumber = get_or(d, "wavenumber", cfg.data.params.wavenumber);
        cfg.data.params.target_dim = get_or(d, "target_dim", cfg.data.params.target_dim);
        cfg.data.velocity_family = get_or(d, "velocity_family", cfg.data.velocity_family);
    }
    if (root.contains("solver")) {
        const json& s = root.at("solver");
        reject_unknown(s, "solver", {"picard_tol", "max_iters", "constraint_tol"});
        cfg.picard_tol = get_or(s, "picard_tol", cfg.picard_tol);
        cfg.max_iters = get_or(s, "max_iters", cfg.max_iters);
        cfg.constraint_tol = get_or(s, "constraint_tol", cfg.constraint_tol);
    }
    if (root.contains("sweep")) {
        const json& s = root.at("sweep");
        reject_unknown(s, "sweep", {"flow", "alphas"});
        cfg.sweep.flow = get_or(s, "flow", cfg.sweep.flow);
        cfg.sweep.alphas = get_or(s, "alphas", cfg.sweep.alphas);
        if (cfg.sweep.flow != "hmf" && cfg.sweep.flow != "lc") {
            throw std::invalid_argument("sweep.flow must be 'hmf' or 'lc'");
        }
        if (cfg.sweep.alphas.empty()) throw std::invalid_argument("sweep.alphas must not be empty");
    }
    if (root.contains("radius")) {
        const double r = get_or(root, "radius", 0.0);
        if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
        cfg.radius = r;
    }
    cfg.snapshots = get_or(root, "snapshots", cfg.snapshots);
    for (int j : cfg.snapshots) {
        if (j < 0 || j > cfg.ladder.steps()) throw std::invalid_argument("snapshot slice outside the ladder");
    }
    cfg.seed = get_or(root, "seed", cfg.seed);
    cfg.output = get_or<std::string>(root, "output", cfg.output.string());
    cfg.solver();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<Kind> kind) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), kind);
}

}  // namespace geoflow::app
