#pragma once

#include <map>
#include <optional>
#include <vector>

#include "alphax/market_data.hpp"

namespace alphax {

/// Raw fundamental ratios for one (asset, date). A ratio is nullopt when its
/// denominator is degenerate (zero, or a sign-flipping negative), so broken
/// balance sheets rank worst instead of erroring or being advantaged.
struct RawFundamentals {
    std::optional<double> roe;                    // net income (TTM) / equity
    std::optional<double> net_margin;             // net income (TTM) / revenue (TTM)
    std::optional<double> ebit_margin;            // ebit (TTM) / revenue (TTM)
    std::optional<double> debt_to_equity;         // liabilities / equity
    std::optional<double> cash_flow_coverage;     // op cash flow (TTM) / liabilities
    std::optional<double> earnings_yield;         // EPS (TTM) / price; negative EPS allowed
    std::optional<double> book_yield;             // book value per share / price
    std::optional<double> sales_yield;            // revenue per share (TTM) / price
    std::optional<double> revenue_growth_yoy;     // TTM vs TTM one year earlier
    std::optional<double> net_income_growth_yoy;  // TTM vs TTM one year earlier
};

/// Cross-sectionally normalized scores, 1 (worst) .. 5 (best).
struct IndicatorScores {
    int profitability = 0;
    int solvency = 0;
    int valuation = 0;
    int growth = 0;
};

/// Real-valued composites (mean of member ratio ranks) behind each score.
struct IndicatorComposites {
    double profitability = 0;
    double solvency = 0;
    double valuation = 0;
    double growth = 0;
};

struct PanelRow {
    RawFundamentals raw;
    IndicatorScores scores;
    IndicatorComposites composites;
    double price = 0;  // mid of the latest bar at or before the panel date
};

/// Cross-sectional snapshot at one decision date. Every row's underlying
/// statement was released at or before as_of.
struct IndicatorPanel {
    Date as_of;
    std::map<AssetId, PanelRow> rows;
};

/// Computes the raw ratios from released statements (ascending fiscal
/// quarter, all released at or before the decision date) and the current
/// price. Flow items use trailing-four-quarter sums and require 4 consecutive
/// quarters; YoY growth additionally requires the 4 quarters one year
/// earlier. Balance-sheet items come from the latest statement.
RawFundamentals compute_raw(const std::vector<const StatementRecord*>& history_asc, double price);

/// Ranks every raw ratio across the given assets (undefined ranks worst,
/// ties broken by ticker), averages member ranks into the four composites,
/// re-ranks the composites and maps them to quintile scores
/// 1 + floor(4*(rank-1)/(N-1)); a single asset scores 3.
///   profitability = mean rank of {roe, net_margin, ebit_margin}
///   solvency      = mean rank of {-debt_to_equity, cash_flow_coverage}
///   valuation     = mean rank of {earnings_yield, book_yield, sales_yield}
///   growth        = mean rank of {revenue_growth_yoy, net_income_growth_yoy}
void score_cross_section(std::map<AssetId, PanelRow>& rows);

/// Builds the full panel at `as_of` for every universe asset that has a
/// released statement and a price.
IndicatorPanel build_panel(const MarketData& md, Date as_of);

std::string serialize_panel(const IndicatorPanel& panel);

}  // namespace alphax
