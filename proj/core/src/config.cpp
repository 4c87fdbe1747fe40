#include "alphax/config.hpp"

#include <charconv>
#include <fstream>

#include "alphax/csv.hpp"
#include "alphax/errors.hpp"

namespace alphax {
namespace {

std::string trim(std::string s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    return s;
}

double to_double(const std::string& key, const std::string& value) {
    double v;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError(key + ": bad number '" + value + "'");
    return v;
}

std::int64_t to_int(const std::string& key, const std::string& value) {
    std::int64_t v;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError(key + ": bad integer '" + value + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(key + ": bad boolean '" + value + "'");
}

Date to_date(const std::string& key, const std::string& value) {
    auto d = Date::parse(value);
    if (!d) throw ConfigError(key + ": bad date '" + value + "' (want YYYY-MM-DD)");
    return *d;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    if (p.is_relative() && !base.empty()) return base / p;
    return p;
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(n) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path.string() + ":" + std::to_string(n) + ": empty key");
        if (!out.emplace(key, value).second)
            throw ConfigError(path.string() + ":" + std::to_string(n) + ": duplicate key '" +
                              key + "'");
    }
    return out;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    RunConfig cfg;
    auto kv = parse_config_file(path);
    std::filesystem::path base = path.parent_path();
    for (const auto& [key, value] : kv) cfg.set(key, value, base);
    return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value,
                    const std::filesystem::path& base_dir) {
    if (key == "data.bars") {
        bars = resolve(base_dir, value);
    } else if (key == "data.statements") {
        statements = resolve(base_dir, value);
    } else if (key == "data.risk_free") {
        risk_free = resolve(base_dir, value);
    } else if (key == "data.index_weights") {
        index_weights = resolve(base_dir, value);
    } else if (key == "data.universe") {
        universe = resolve(base_dir, value);
    } else if (key == "run.strategies") {
        strategies.clear();
        for (auto& s : csv::split(value)) {
            if (!s.empty()) strategies.push_back(s);
        }
    } else if (key == "run.from") {
        from = to_date(key, value);
    } else if (key == "run.to") {
        to = to_date(key, value);
    } else if (key == "run.out_dir") {
        out_dir = resolve(base_dir, value);
    } else if (key == "run.seed") {
        seed = static_cast<std::uint64_t>(to_int(key, value));
    } else if (key == "engine.initial_capital") {
        engine.initial_capital = to_double(key, value);
        if (engine.initial_capital <= 0) throw ConfigError("engine.initial_capital must be > 0");
    } else if (key == "costs.per_trade_bps") {
        engine.cost_per_trade_bps = to_double(key, value);
        if (engine.cost_per_trade_bps < 0) throw ConfigError("costs.per_trade_bps must be >= 0");
    } else if (key == "alphax.max_assets") {
        params.alphax.max_assets = static_cast<int>(to_int(key, value));
        if (params.alphax.max_assets < 1) throw ConfigError("alphax.max_assets must be >= 1");
    } else if (key == "alphax.growth_threshold") {
        params.alphax.growth_threshold = static_cast<int>(to_int(key, value));
    } else if (key == "alphax.stop_loss") {
        params.alphax.stop_loss = to_double(key, value);
        if (!(params.alphax.stop_loss > 0 && params.alphax.stop_loss < 1))
            throw ConfigError("alphax.stop_loss must be in (0,1)");
    } else if (key == "forest.n_trees") {
        params.valuation.forest.n_trees = static_cast<int>(to_int(key, value));
        if (params.valuation.forest.n_trees < 1) throw ConfigError("forest.n_trees must be >= 1");
    } else if (key == "forest.max_depth") {
        params.valuation.forest.max_depth = static_cast<int>(to_int(key, value));
    } else if (key == "forest.min_leaf") {
        params.valuation.forest.min_leaf = static_cast<int>(to_int(key, value));
        if (params.valuation.forest.min_leaf < 1) throw ConfigError("forest.min_leaf must be >= 1");
    } else if (key == "forest.seed") {
        params.valuation.forest.seed = static_cast<std::uint64_t>(to_int(key, value));
    } else if (key == "ensemble.weights") {
        auto parts = csv::split(value);
        if (parts.size() != 2) throw ConfigError("ensemble.weights wants 'forest,reversion'");
        params.valuation.forest_weight = to_double(key, parts[0]);
        params.valuation.reversion_weight = to_double(key, parts[1]);
        if (params.valuation.forest_weight < 0 || params.valuation.reversion_weight < 0)
            throw ConfigError("ensemble.weights must be non-negative");
    } else if (key == "reversion.window_quarters") {
        params.valuation.reversion_window_quarters = static_cast<int>(to_int(key, value));
        if (params.valuation.reversion_window_quarters < 2)
            throw ConfigError("reversion.window_quarters must be >= 2");
    } else if (key == "tech.window") {
        params.technical.window = static_cast<int>(to_int(key, value));
        if (params.technical.window < 2) throw ConfigError("tech.window must be >= 2");
    } else if (key == "tech.oversold") {
        params.technical.oversold = to_double(key, value);
    } else if (key == "tech.overbought") {
        params.technical.overbought = to_double(key, value);
    } else if (key == "tech.max_positions") {
        params.technical.max_positions = static_cast<int>(to_int(key, value));
        if (params.technical.max_positions < 1)
            throw ConfigError("tech.max_positions must be >= 1");
    } else if (key == "tech.idle_cash_risk_free") {
        params.technical.idle_cash_risk_free = to_bool(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }

    if (params.technical.oversold && params.technical.overbought &&
        !(*params.technical.oversold < *params.technical.overbought))
        throw ConfigError("tech.oversold must be below tech.overbought");
}

std::string RunConfig::snapshot() const {
    std::string out;
    auto line = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
    line("data.bars", bars.string());
    line("data.statements", statements.string());
    line("data.risk_free", risk_free.string());
    if (!index_weights.empty()) line("data.index_weights", index_weights.string());
    if (!universe.empty()) line("data.universe", universe.string());
    std::string strats;
    for (const auto& s : strategies) {
        if (!strats.empty()) strats += ",";
        strats += s;
    }
    line("run.strategies", strats);
    if (from) line("run.from", from->to_string());
    if (to) line("run.to", to->to_string());
    line("run.out_dir", out_dir.string());
    if (seed) line("run.seed", std::to_string(*seed));
    line("engine.initial_capital", csv::format_double(engine.initial_capital));
    line("costs.per_trade_bps", csv::format_double(engine.cost_per_trade_bps));
    line("alphax.max_assets", std::to_string(params.alphax.max_assets));
    line("alphax.growth_threshold", std::to_string(params.alphax.growth_threshold));
    line("alphax.stop_loss", csv::format_double(params.alphax.stop_loss));
    line("forest.n_trees", std::to_string(params.valuation.forest.n_trees));
    line("forest.max_depth", std::to_string(params.valuation.forest.max_depth));
    line("forest.min_leaf", std::to_string(params.valuation.forest.min_leaf));
    line("forest.seed", std::to_string(params.valuation.forest.seed));
    line("ensemble.weights", csv::format_double(params.valuation.forest_weight) + "," +
                                 csv::format_double(params.valuation.reversion_weight));
    line("reversion.window_quarters",
         std::to_string(params.valuation.reversion_window_quarters));
    line("tech.window", std::to_string(params.technical.window));
    if (params.technical.oversold)
        line("tech.oversold", csv::format_double(*params.technical.oversold));
    if (params.technical.overbought)
        line("tech.overbought", csv::format_double(*params.technical.overbought));
    line("tech.max_positions", std::to_string(params.technical.max_positions));
    line("tech.idle_cash_risk_free", params.technical.idle_cash_risk_free ? "true" : "false");
    return out;
}

}  // namespace alphax
