#include <CLI11.hpp>

#include "tlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"threshold-lab: zero-energy threshold phenomena in few-body systems"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false, quiet = false;

    auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        auto* copt = sub->add_option("--config", config_path, "config file (JSON)");
        if (needs_config) copt->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed, "RNG seed (overrides config)")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_flag("--quiet", quiet, "suppress console output");
    };

    const char* experiments[] = {"twobody-threshold", "defs-probe", "kernel-bounds",
                                 "threebody-absorption", "tail-probe"};
    for (const char* name : experiments) add_common(app.add_subcommand(name));
    add_common(app.add_subcommand("validate", "schema-check a config without running"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const auto* sub = app.get_subcommands().front();
    if (sub->get_name() == "validate") return tlab::run_validate(config_path, quiet);

    tlab::RunOptions opts;
    opts.subcommand = sub->get_name();
    opts.config_path = config_path;
    opts.out_dir = out_dir;
    if (seed_set) opts.seed = seed;
    opts.quiet = quiet;
    return tlab::run_experiment(opts);
}
