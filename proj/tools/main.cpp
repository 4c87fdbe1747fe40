#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "alphax/cli.hpp"
#include "alphax/errors.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string strategies;
    std::string from, to, out_dir;
    std::int64_t seed = -1;
};

alphax::RunConfig build_config(const CommonOpts& opts) {
    alphax::RunConfig cfg;
    if (!opts.config_path.empty()) cfg = alphax::RunConfig::from_file(opts.config_path);
    // command-line overrides win over the config file
    if (!opts.strategies.empty()) cfg.set("run.strategies", opts.strategies);
    if (!opts.from.empty()) cfg.set("run.from", opts.from);
    if (!opts.to.empty()) cfg.set("run.to", opts.to);
    if (!opts.out_dir.empty()) cfg.set("run.out_dir", opts.out_dir);
    if (opts.seed >= 0) cfg.set("run.seed", std::to_string(opts.seed));
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AlphaX backtesting engine"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* validate = app.add_subcommand("validate", "Load and validate all input files");
    validate->add_option("--config", opts.config_path, "Config file")->required();

    auto* backtest = app.add_subcommand("backtest", "Run strategies and write reports");
    backtest->add_option("--config", opts.config_path, "Config file")->required();
    backtest->add_option("--strategies", opts.strategies,
                         "Comma list: alphax,rsi,stochastic,mfi,selic,nibov");
    backtest->add_option("--from", opts.from, "Start date (YYYY-MM-DD)");
    backtest->add_option("--to", opts.to, "End date (YYYY-MM-DD)");
    backtest->add_option("--seed", opts.seed, "Master seed");
    backtest->add_option("--out", opts.out_dir, "Output directory");

    alphax::cli::SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth->add_option("--seed", synth_args.seed, "Generator seed")->required();
    synth->add_option("--assets", synth_args.n_assets, "Number of assets")->required();
    synth->add_option("--quarters", synth_args.n_quarters, "Number of fiscal quarters")
        ->required();
    synth->add_option("--out", synth_args.out_dir, "Output directory")->required();
    synth->add_flag("--force", synth_args.force, "Write into a non-empty directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return alphax::cli::cmd_validate(build_config(opts), std::cout);
        if (backtest->parsed()) return alphax::cli::cmd_backtest(build_config(opts), std::cout);
        if (synth->parsed()) return alphax::cli::cmd_synth(synth_args, std::cout);
    } catch (const alphax::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return alphax::cli::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return alphax::cli::kExitValidation;
    }
    return alphax::cli::kExitConfig;
}
