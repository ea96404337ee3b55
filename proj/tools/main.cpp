#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "geoflow/app/config.hpp"
#include "geoflow/app/run.hpp"

int main(int argc, char** argv) {
    using namespace geoflow::app;
    CLI::App cli{"Pseudospectral harmonic map and liquid crystal flow experiments"};
    cli.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    for (const char* name : {"extend", "norms", "solve-hmf", "solve-lc", "sweep", "verify"}) {
        auto* sub = cli.add_subcommand(name, std::string("run the ") + name + " experiment");
        sub->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed, "64-bit seed (overrides config)");
    }
    CLI11_PARSE(cli, argc, argv);

    try {
        const Kind kind = parse_kind(cli.get_subcommands().front()->get_name());
        ExperimentConfig cfg = config_path.empty() ? parse_config("{}", kind) : load_config(config_path, kind);
        if (!out_dir.empty()) cfg.output = out_dir;
        if (seed) cfg.seed = *seed;
        return run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "geoflow: " << e.what() << '\n';
        return kError;
    }
}
