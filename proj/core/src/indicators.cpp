#include "alphax/indicators.hpp"

#include <algorithm>
#include <cmath>

#include "alphax/csv.hpp"

namespace alphax {
namespace {

struct TtmSums {
    double revenue = 0;
    double net_income = 0;
    double ebit = 0;
    double op_cash_flow = 0;
    bool available = false;
};

/// Sum of the 4 consecutive quarters ending `back_from` quarters before the
/// latest one. Requires all 4 to be present in the released history.
TtmSums ttm_sums(const std::vector<const StatementRecord*>& history, int back_from) {
    TtmSums out;
    if (history.empty()) return out;
    int last_idx = history.back()->fiscal_quarter.index() - back_from;
    int found = 0;
    for (const auto* rec : history) {
        int idx = rec->fiscal_quarter.index();
        if (idx <= last_idx && idx > last_idx - 4) {
            out.revenue += rec->revenue;
            out.net_income += rec->net_income;
            out.ebit += rec->ebit;
            out.op_cash_flow += rec->operating_cash_flow;
            ++found;
        }
    }
    out.available = (found == 4);
    return out;
}

/// Ratio whose denominator must be a positive magnitude (a non-positive
/// denominator would flip the ordering).
std::optional<double> ratio_pos_den(double num, double den) {
    if (den <= 0.0 || !std::isfinite(num / den)) return std::nullopt;
    return num / den;
}

}  // namespace

RawFundamentals compute_raw(const std::vector<const StatementRecord*>& history, double price) {
    RawFundamentals out;
    if (history.empty() || price <= 0) return out;
    const StatementRecord& latest = *history.back();

    TtmSums ttm = ttm_sums(history, 0);
    TtmSums prev = ttm_sums(history, 4);

    if (ttm.available) {
        out.roe = ratio_pos_den(ttm.net_income, latest.equity);
        out.net_margin = ratio_pos_den(ttm.net_income, ttm.revenue);
        out.ebit_margin = ratio_pos_den(ttm.ebit, ttm.revenue);
        out.cash_flow_coverage = ratio_pos_den(ttm.op_cash_flow, latest.total_liabilities);

        double eps = ttm.net_income / latest.shares_outstanding;
        out.earnings_yield = eps / price;  // negative earnings stay negative
        if (ttm.revenue > 0)
            out.sales_yield = (ttm.revenue / latest.shares_outstanding) / price;
    }
    out.debt_to_equity = ratio_pos_den(latest.total_liabilities, latest.equity);
    out.book_yield = (latest.equity / latest.shares_outstanding) / price;

    if (ttm.available && prev.available) {
        // Growth is only meaningful against a positive base year.
        if (prev.revenue > 0) out.revenue_growth_yoy = ttm.revenue / prev.revenue - 1.0;
        if (prev.net_income > 0)
            out.net_income_growth_yoy = ttm.net_income / prev.net_income - 1.0;
    }
    return out;
}

namespace {

using Getter = std::optional<double> (*)(const RawFundamentals&);

/// Rank of each asset for one ratio: 1 = worst .. N = best. Undefined values
/// rank below every defined value; ties break by ticker ascending.
std::map<AssetId, double> rank_ratio(const std::map<AssetId, PanelRow>& rows, Getter get,
                                     bool negate) {
    struct Entry {
        const AssetId* id;
        bool defined;
        double value;
    };
    std::vector<Entry> entries;
    entries.reserve(rows.size());
    for (const auto& [id, row] : rows) {
        auto v = get(row.raw);
        double x = v ? (negate ? -*v : *v) : 0.0;
        entries.push_back({&id, v.has_value(), x});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.defined != b.defined) return !a.defined;  // undefined ranks worst
        if (a.defined && a.value != b.value) return a.value < b.value;
        return *a.id < *b.id;
    });
    std::map<AssetId, double> out;
    for (std::size_t i = 0; i < entries.size(); ++i) out[*entries[i].id] = double(i + 1);
    return out;
}

/// Ranks composite values and maps them to 1..5 quintile scores.
std::map<AssetId, int> quintile_scores(const std::map<AssetId, double>& composite) {
    struct Entry {
        const AssetId* id;
        double value;
    };
    std::vector<Entry> entries;
    for (const auto& [id, v] : composite) entries.push_back({&id, v});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.value != b.value) return a.value < b.value;
        return *a.id < *b.id;
    });
    const std::size_t n = entries.size();
    std::map<AssetId, int> out;
    for (std::size_t i = 0; i < n; ++i) {
        int score = n == 1 ? 3 : 1 + static_cast<int>((4 * i) / (n - 1));
        out[*entries[i].id] = score;
    }
    return out;
}

}  // namespace

void score_cross_section(std::map<AssetId, PanelRow>& rows) {
    if (rows.empty()) return;

    auto mean_rank = [&](std::vector<std::map<AssetId, double>> member_ranks) {
        std::map<AssetId, double> out;
        for (const auto& [id, row] : rows) {
            double sum = 0;
            for (const auto& r : member_ranks) sum += r.at(id);
            out[id] = sum / double(member_ranks.size());
        }
        return out;
    };

    auto prof = mean_rank({
        rank_ratio(rows, [](const RawFundamentals& r) { return r.roe; }, false),
        rank_ratio(rows, [](const RawFundamentals& r) { return r.net_margin; }, false),
        rank_ratio(rows, [](const RawFundamentals& r) { return r.ebit_margin; }, false),
    });
    auto solv = mean_rank({
        rank_ratio(rows, [](const RawFundamentals& r) { return r.debt_to_equity; }, true),
        rank_ratio(rows, [](const RawFundamentals& r) { return r.cash_flow_coverage; }, false),
    });
    auto val = mean_rank({
        rank_ratio(rows, [](const RawFundamentals& r) { return r.earnings_yield; }, false),
        rank_ratio(rows, [](const RawFundamentals& r) { return r.book_yield; }, false),
        rank_ratio(rows, [](const RawFundamentals& r) { return r.sales_yield; }, false),
    });
    auto grow = mean_rank({
        rank_ratio(rows, [](const RawFundamentals& r) { return r.revenue_growth_yoy; }, false),
        rank_ratio(rows, [](const RawFundamentals& r) { return r.net_income_growth_yoy; }, false),
    });

    auto prof_s = quintile_scores(prof);
    auto solv_s = quintile_scores(solv);
    auto val_s = quintile_scores(val);
    auto grow_s = quintile_scores(grow);

    for (auto& [id, row] : rows) {
        row.composites = {prof.at(id), solv.at(id), val.at(id), grow.at(id)};
        row.scores = {prof_s.at(id), solv_s.at(id), val_s.at(id), grow_s.at(id)};
    }
}

IndicatorPanel build_panel(const MarketData& md, Date as_of) {
    IndicatorPanel panel;
    panel.as_of = as_of;
    for (const AssetId& asset : md.universe()) {
        const DailyBar* bar = md.bar_at_or_before(asset, as_of);
        if (!bar) continue;
        auto history = md.statements_as_of(asset, as_of);
        if (history.empty()) continue;
        PanelRow row;
        row.price = mid_price(*bar);
        row.raw = compute_raw(history, row.price);
        panel.rows.emplace(asset, std::move(row));
    }
    score_cross_section(panel.rows);
    return panel;
}

std::string serialize_panel(const IndicatorPanel& panel) {
    std::string out = "ticker,profitability,solvency,valuation,growth,pe,pb,ps,price\n";
    auto inv = [](const std::optional<double>& y) -> std::string {
        // multiples are the inverted yields
        if (!y || *y == 0.0) return "n/a";
        return csv::format_double(1.0 / *y);
    };
    for (const auto& [id, row] : panel.rows) {
        out += id + "," + std::to_string(row.scores.profitability) + "," +
               std::to_string(row.scores.solvency) + "," + std::to_string(row.scores.valuation) +
               "," + std::to_string(row.scores.growth) + "," + inv(row.raw.earnings_yield) + "," +
               inv(row.raw.book_yield) + "," + inv(row.raw.sales_yield) + "," +
               csv::format_double(row.price) + "\n";
    }
    return out;
}

}  // namespace alphax
