#include "alphax/cli.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "alphax/csv.hpp"
#include "alphax/engine.hpp"
#include "alphax/errors.hpp"
#include "alphax/metrics.hpp"
#include "alphax/report.hpp"
#include "alphax/synthetic.hpp"

namespace alphax::cli {
namespace {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const DataGapError*>(&e)) return kExitDataGap;
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
    return kExitValidation;
}

bool wants(const RunConfig& cfg, const std::string& name) {
    return std::find(cfg.strategies.begin(), cfg.strategies.end(), name) !=
           cfg.strategies.end();
}

}  // namespace

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    int violations = 0;
    auto violation = [&](const std::string& msg) {
        out << "VIOLATION: " << msg << "\n";
        ++violations;
    };

    if (cfg.bars.empty() && cfg.statements.empty() && cfg.risk_free.empty()) {
        out << "error: no data paths configured\n";
        return kExitConfig;
    }

    std::vector<DailyBar> bars;
    if (!cfg.bars.empty()) {
        try {
            bars = load_bars(cfg.bars);
            out << "bars: " << bars.size() << " rows\n";
            std::map<AssetId, std::pair<Date, Date>> range;
            std::map<AssetId, int> counts;
            for (const auto& b : bars) {
                auto [it, fresh] = range.emplace(b.asset, std::make_pair(b.date, b.date));
                if (!fresh) {
                    it->second.first = std::min(it->second.first, b.date);
                    it->second.second = std::max(it->second.second, b.date);
                }
                counts[b.asset]++;
            }
            for (const auto& [asset, dates] : range)
                out << "  " << asset << ": " << counts[asset] << " bars, "
                    << dates.first.to_string() << " .. " << dates.second.to_string() << "\n";
        } catch (const std::exception& e) {
            violation(e.what());
        }
    }

    if (!cfg.statements.empty()) {
        try {
            auto recs = load_statements(cfg.statements);
            out << "statements: " << recs.size() << " rows\n";
            std::map<AssetId, std::set<int>> quarters;
            for (const auto& r : recs) quarters[r.company].insert(r.fiscal_quarter.index());
            for (const auto& [company, idx] : quarters) {
                out << "  " << company << ": " << idx.size() << " quarters, "
                    << FiscalQuarter::from_index(*idx.begin()).label() << " .. "
                    << FiscalQuarter::from_index(*idx.rbegin()).label() << "\n";
                for (int i = *idx.begin(); i <= *idx.rbegin(); ++i) {
                    if (!idx.count(i))
                        out << "  warning: " << company << " missing "
                            << FiscalQuarter::from_index(i).label() << "\n";
                }
            }
        } catch (const std::exception& e) {
            violation(e.what());
        }
    }

    if (!cfg.risk_free.empty()) {
        try {
            RiskFreeSeries rf = load_risk_free(cfg.risk_free);
            MarketData check;
            check.set_risk_free(rf);  // runs the monotone/positive validation
            out << "risk_free: " << rf.entries.size() << " rows\n";
        } catch (const std::exception& e) {
            violation(e.what());
        }
    }

    if (!cfg.index_weights.empty()) {
        try {
            auto weights = load_index_weights(cfg.index_weights);
            MarketData check;
            check.set_index_weights(weights);
            out << "index_weights: " << weights.snapshots.size() << " snapshots\n";
        } catch (const std::exception& e) {
            violation(e.what());
        }
    }

    if (!cfg.universe.empty()) {
        try {
            auto universe = load_universe(cfg.universe);
            out << "universe: " << universe.size() << " tickers\n";
            std::set<AssetId> with_bars;
            for (const auto& b : bars) with_bars.insert(b.asset);
            if (!bars.empty()) {
                for (const auto& t : universe)
                    if (!with_bars.count(t))
                        out << "  warning: universe ticker " << t << " has no bars\n";
            }
        } catch (const std::exception& e) {
            violation(e.what());
        }
    }

    out << violations << " violations\n";
    return violations == 0 ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------------------
// backtest
// ---------------------------------------------------------------------------

namespace {

MarketData load_all(const RunConfig& cfg) {
    MarketData md;
    md.add_bars(load_bars(cfg.bars));
    if (!cfg.statements.empty()) md.add_statements(load_statements(cfg.statements));
    md.set_risk_free(load_risk_free(cfg.risk_free));
    if (!cfg.index_weights.empty()) md.set_index_weights(load_index_weights(cfg.index_weights));
    if (!cfg.universe.empty()) md.set_universe(load_universe(cfg.universe));
    return md;
}

void check_backtest_config(const RunConfig& cfg) {
    if (cfg.strategies.empty()) throw ConfigError("run.strategies is empty");
    if (!cfg.from || !cfg.to) throw ConfigError("run.from and run.to are required");
    if (*cfg.to < *cfg.from) throw ConfigError("run.to before run.from");
    if (cfg.bars.empty()) throw ConfigError("data.bars is required");
    if (cfg.risk_free.empty()) throw ConfigError("data.risk_free is required");

    static const std::set<std::string> known = {"alphax", "rsi", "stochastic",
                                                "mfi",    "selic", "nibov"};
    for (const auto& s : cfg.strategies)
        if (!known.count(s)) throw ConfigError("unknown strategy '" + s + "'");

    if (wants(cfg, "alphax")) {
        if (cfg.statements.empty()) throw ConfigError("alphax requires data.statements");
        if (cfg.universe.empty()) throw ConfigError("alphax requires data.universe");
        if (!cfg.seed) throw ConfigError("alphax requires run.seed");
    }
    if (wants(cfg, "nibov")) {
        if (cfg.index_weights.empty()) throw ConfigError("nibov requires data.index_weights");
        if (cfg.universe.empty()) throw ConfigError("nibov requires data.universe");
    }
}

}  // namespace

int cmd_backtest(const RunConfig& cfg, std::ostream& out) {
    try {
        check_backtest_config(cfg);
    } catch (const std::exception& e) {
        out << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    MarketData md;
    try {
        md = load_all(cfg);
    } catch (const std::exception& e) {
        out << "load error: " << e.what() << "\n";
        return exit_code_for(e);
    }

    StrategyParams params = cfg.params;
    params.master_seed = cfg.seed.value_or(1);

    struct Result {
        std::string name;
        BacktestRun run;
        MetricReport metrics;
    };

    // Runs share only the immutable MarketData, so they may go in parallel;
    // results are assembled in request order either way.
    std::vector<std::future<Result>> futures;
    for (const auto& name : cfg.strategies) {
        futures.push_back(std::async(std::launch::async, [&, name]() {
            auto strategy = make_strategy(name, params);
            Result res;
            res.name = name;
            res.run = run_backtest(md, *strategy, *cfg.from, *cfg.to, cfg.engine);
            res.metrics = compute_metric_report(name, res.run.equity_curve(), md.risk_free());
            return res;
        }));
    }

    std::vector<Result> results;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        try {
            results.push_back(futures[i].get());
        } catch (const std::exception& e) {
            out << "strategy " << cfg.strategies[i] << " failed: " << e.what() << "\n";
            return exit_code_for(e);
        }
    }

    try {
        std::filesystem::create_directories(cfg.out_dir);
        std::vector<MetricReport> reports;
        for (const auto& res : results) {
            csv::write_file_atomic(cfg.out_dir / (res.name + "_ledger.csv"),
                                   serialize_ledger(res.run));
            csv::write_file_atomic(cfg.out_dir / (res.name + "_equity.csv"),
                                   serialize_equity_curve(res.run));
            if (!res.run.allocations.empty())
                csv::write_file_atomic(cfg.out_dir / (res.name + "_allocations.csv"),
                                       serialize_allocations(res.run));
            reports.push_back(res.metrics);
            out << res.name << ": " << res.run.ledger.size() << " trades, final equity "
                << csv::format_double(res.run.curve.empty() ? 0.0 : res.run.curve.back().equity, 2)
                << "\n";
        }
        csv::write_file_atomic(cfg.out_dir / "comparison.csv", serialize_comparison_csv(reports));
        csv::write_file_atomic(cfg.out_dir / "comparison.json",
                               serialize_comparison_json(reports));
        csv::write_file_atomic(cfg.out_dir / "psr_report.csv", serialize_psr_report(reports));
        csv::write_file_atomic(cfg.out_dir / "config_snapshot.cfg", cfg.snapshot());
    } catch (const std::exception& e) {
        out << "write error: " << e.what() << "\n";
        return kExitValidation;
    }
    out << "wrote " << cfg.out_dir.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int cmd_synth(const SynthArgs& args, std::ostream& out) {
    namespace fs = std::filesystem;
    if (args.out_dir.empty()) {
        out << "config error: --out is required\n";
        return kExitConfig;
    }
    if (fs::exists(args.out_dir) && !fs::is_empty(args.out_dir) && !args.force) {
        out << "refusing to write into non-empty " << args.out_dir.string()
            << " (use --force)\n";
        return kExitConfig;
    }

    SyntheticDataset data;
    try {
        SynthConfig synth;
        synth.seed = args.seed;
        synth.n_assets = args.n_assets;
        synth.n_quarters = args.n_quarters;
        data = generate_synthetic_universe(synth);
    } catch (const std::exception& e) {
        out << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        fs::create_directories(args.out_dir);
        csv::write_file_atomic(args.out_dir / "bars.csv", serialize_bars(data.bars));
        csv::write_file_atomic(args.out_dir / "statements.csv",
                               serialize_statements(data.statements));
        csv::write_file_atomic(args.out_dir / "risk_free.csv",
                               serialize_risk_free(data.risk_free));
        csv::write_file_atomic(args.out_dir / "index_weights.csv",
                               serialize_index_weights(data.index_weights));
        csv::write_file_atomic(args.out_dir / "universe.txt",
                               serialize_universe(data.tickers));

        // Ready-to-run config pointing at the files above.
        std::string config;
        config += "data.bars = bars.csv\n";
        config += "data.statements = statements.csv\n";
        config += "data.risk_free = risk_free.csv\n";
        config += "data.index_weights = index_weights.csv\n";
        config += "data.universe = universe.txt\n";
        config += "run.strategies = alphax,rsi,stochastic,mfi,selic,nibov\n";
        config += "run.from = " +
                  ReleaseCalendar::release_date(data.first_quarter).to_string() + "\n";
        Date last_bar;
        for (const auto& b : data.bars) last_bar = std::max(last_bar, b.date);
        config += "run.to = " + last_bar.to_string() + "\n";
        config += "run.seed = " + std::to_string(args.seed) + "\n";
        config += "run.out_dir = reports\n";
        csv::write_file_atomic(args.out_dir / "config.cfg", config);
    } catch (const std::exception& e) {
        out << "write error: " << e.what() << "\n";
        return kExitValidation;
    }

    out << "wrote " << data.bars.size() << " bars, " << data.statements.size()
        << " statements for " << args.n_assets << " assets / " << args.n_quarters
        << " quarters into " << args.out_dir.string() << "\n";
    return kExitOk;
}

}  // namespace alphax::cli
