#include "alphax/report.hpp"

#include <json.hpp>

#include "alphax/csv.hpp"

namespace alphax {
namespace {

std::string opt_cell(const std::optional<double>& v) {
    return v ? csv::format_double(*v) : "n/a";
}

}  // namespace

std::string serialize_ledger(const BacktestRun& run) {
    std::string out = "date,asset,side,qty,price,reason,cash_after,equity_after\n";
    for (const auto& rec : run.ledger) {
        out += rec.date.to_string() + "," + rec.asset + "," + to_string(rec.side) + "," +
               csv::format_double(rec.quantity) + "," + csv::format_double(rec.price) + "," +
               to_string(rec.reason) + "," + csv::format_double(rec.cash_after) + "," +
               csv::format_double(rec.equity_after) + "\n";
    }
    return out;
}

std::string serialize_equity_curve(const BacktestRun& run) {
    std::string out = "date,equity,risk_free_balance,n_positions\n";
    for (const auto& p : run.curve) {
        out += p.date.to_string() + "," + csv::format_double(p.equity) + "," +
               csv::format_double(p.risk_free_balance) + "," + std::to_string(p.n_positions) +
               "\n";
    }
    return out;
}

std::string serialize_allocations(const BacktestRun& run) {
    std::string out = "quarter,assets\n";
    for (const auto& entry : run.allocations) {
        std::string assets;
        for (const auto& asset : entry.assets) {
            if (!assets.empty()) assets += ";";
            assets += asset;
        }
        if (assets.empty()) assets = "No stocks";
        out += entry.quarter.label() + "," + assets + "\n";
    }
    return out;
}

std::string serialize_comparison_csv(const std::vector<MetricReport>& reports) {
    std::string out =
        "strategy,total_return,cagr,sharpe_annualized,sortino_annualized,max_drawdown,"
        "psr_0,psr_0.01,psr_0.1,min_trl_0,min_trl_0.01,min_trl_0.1,confidence_level\n";
    for (const auto& r : reports) {
        out += r.strategy + "," + csv::format_double(r.total_return) + "," +
               csv::format_double(r.cagr) + "," + opt_cell(r.sharpe) + "," + opt_cell(r.sortino) +
               "," + csv::format_double(r.max_drawdown);
        for (int i = 0; i < 3; ++i) out += "," + opt_cell(r.psr_at[i]);
        for (int i = 0; i < 3; ++i) out += "," + opt_cell(r.min_trl_at[i]);
        out += "," + csv::format_double(r.confidence_level) + "\n";
    }
    return out;
}

std::string serialize_comparison_json(const std::vector<MetricReport>& reports) {
    nlohmann::json root = nlohmann::json::array();
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    for (const auto& r : reports) {
        nlohmann::json row;
        row["strategy"] = r.strategy;
        row["total_return"] = r.total_return;
        row["cagr"] = r.cagr;
        row["sharpe_annualized"] = opt(r.sharpe);
        row["sortino_annualized"] = opt(r.sortino);
        row["max_drawdown"] = r.max_drawdown;
        for (int i = 0; i < 3; ++i) {
            std::string suffix = csv::format_double(kPsrThresholds[i], 2);
            row["psr_" + suffix] = opt(r.psr_at[i]);
            row["min_trl_" + suffix] = opt(r.min_trl_at[i]);
        }
        row["confidence_level"] = r.confidence_level;
        root.push_back(row);
    }
    return root.dump(2) + "\n";
}

std::string serialize_psr_report(const std::vector<MetricReport>& reports) {
    std::string out = "metric";
    for (const auto& r : reports) out += "," + r.strategy;
    out += "\n";
    static const char* labels[] = {"0", "0.01", "0.1"};
    for (int i = 0; i < 3; ++i) {
        out += std::string("PSR(") + labels[i] + ")";
        for (const auto& r : reports) out += "," + opt_cell(r.psr_at[i]);
        out += "\n";
        out += std::string("minTRL(") + labels[i] + ")";
        for (const auto& r : reports) out += "," + opt_cell(r.min_trl_at[i]);
        out += "\n";
    }
    return out;
}

}  // namespace alphax
