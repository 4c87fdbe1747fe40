#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alphax/dates.hpp"

namespace alphax {

/// Ticker symbol, e.g. "GGBR4". Uppercase letters followed by digits.
using AssetId = std::string;

bool valid_asset_id(const AssetId& id);

struct DailyBar {
    AssetId asset;
    Date date;
    double open = 0;
    double high = 0;
    double low = 0;
    double close = 0;
    std::int64_t volume = 0;
};

/// (high + low) / 2 — the unbiased fill price for scheduled trades.
inline double mid_price(const DailyBar& bar) { return (bar.high + bar.low) / 2.0; }

/// Checks OHLC invariants; returns a description of the violation or empty.
std::string bar_violation(const DailyBar& bar);

struct StatementRecord {
    AssetId company;
    FiscalQuarter fiscal_quarter;
    double revenue = 0;
    double operating_expenses = 0;
    double gross_profit = 0;
    double ebit = 0;
    double net_income = 0;
    double total_assets = 0;
    double total_liabilities = 0;
    double equity = 0;
    double operating_cash_flow = 0;
    double shares_outstanding = 0;
    Date release_date;
};

std::string statement_violation(const StatementRecord& rec);

/// Statutory statement availability rule: a quarter's statement becomes
/// public two months after the quarter ends.
///   Q4 year Y -> Feb 28 of Y+1 (Feb 28 even in leap years)
///   Q1 year Y -> May 31 of Y
///   Q2 year Y -> Aug 31 of Y
///   Q3 year Y -> Nov 30 of Y
struct ReleaseCalendar {
    static Date release_date(FiscalQuarter q);
};

struct RiskFreeSeries {
    // (date, annualized rate as a decimal fraction), dates strictly increasing
    std::vector<std::pair<Date, double>> entries;

    /// Rate in force at `t` (latest entry with date <= t).
    std::optional<double> rate_at(Date t) const;
};

struct IndexWeights {
    Date as_of;
    std::map<AssetId, double> weights;  // normalized, sums to 1
};

struct IndexWeightsSeries {
    std::vector<IndexWeights> snapshots;  // sorted by as_of

    const IndexWeights* at_or_before(Date t) const;
};

/// Immutable point-in-time data store. All queries take an explicit as-of
/// date and only ever see rows whose date / release_date is <= that date.
class MarketData {
public:
    MarketData() = default;

    void add_bars(std::vector<DailyBar> bars);          // validates + sorts
    void add_statements(std::vector<StatementRecord>);  // validates + sorts
    void set_risk_free(RiskFreeSeries series);
    void set_index_weights(IndexWeightsSeries series);
    void set_universe(std::vector<AssetId> tickers);

    const std::vector<AssetId>& universe() const { return universe_; }
    const RiskFreeSeries& risk_free() const { return risk_free_; }
    const IndexWeightsSeries& index_weights() const { return index_weights_; }

    /// Assets that have at least one bar, sorted lexicographically.
    std::vector<AssetId> bar_assets() const;

    const std::vector<DailyBar>* bars_for(const AssetId& asset) const;

    /// Latest bar with date <= t, or null.
    const DailyBar* bar_at_or_before(const AssetId& asset, Date t) const;

    /// Bar exactly on date t, or null.
    const DailyBar* bar_on(const AssetId& asset, Date t) const;

    /// Most recent statement with release_date <= t, or null.
    const StatementRecord* statement_as_of(const AssetId& company, Date t) const;

    /// All statements with release_date <= t, sorted by fiscal quarter
    /// ascending. Used for trailing-twelve-month sums and growth.
    std::vector<const StatementRecord*> statements_as_of(const AssetId& company, Date t) const;

    const std::vector<StatementRecord>* statements_for(const AssetId& company) const;

    /// Sorted union of all bar dates in [from, to] — the trading calendar.
    std::vector<Date> trading_days(Date from, Date to) const;

    /// First trading day >= t within the loaded data, or null.
    std::optional<Date> next_trading_day(Date t) const;

    Date first_bar_date() const;
    Date last_bar_date() const;

private:
    std::map<AssetId, std::vector<DailyBar>> bars_;        // per asset, date-sorted
    std::map<AssetId, std::vector<StatementRecord>> statements_;  // release-date-sorted
    RiskFreeSeries risk_free_;
    IndexWeightsSeries index_weights_;
    std::vector<AssetId> universe_;
    std::vector<Date> all_dates_;  // sorted union of bar dates
};

// ---------------------------------------------------------------------------
// Loaders. CSV schemas (headers required):
//   bars:        ticker,date,open,high,low,close,volume
//   statements:  ticker,year,quarter,revenue,opex,gross_profit,ebit,
//                net_income,assets,liabilities,equity,op_cash_flow,
//                shares_out[,release_date]
//   risk-free:   date,annual_rate
//   weights:     as_of,ticker,weight
//   universe:    one ticker per line
// Throw ParseError / ValidationError on the first problem.
// ---------------------------------------------------------------------------

std::vector<DailyBar> load_bars(const std::filesystem::path& path);
std::vector<StatementRecord> load_statements(const std::filesystem::path& path);
RiskFreeSeries load_risk_free(const std::filesystem::path& path);
IndexWeightsSeries load_index_weights(const std::filesystem::path& path);
std::vector<AssetId> load_universe(const std::filesystem::path& path);

// Serializers (inverse of the loaders; 6-decimal round-trip).
std::string serialize_bars(const std::vector<DailyBar>& bars);
std::string serialize_statements(const std::vector<StatementRecord>& recs,
                                 bool explicit_release = false);
std::string serialize_risk_free(const RiskFreeSeries& series);
std::string serialize_index_weights(const IndexWeightsSeries& series);
std::string serialize_universe(const std::vector<AssetId>& tickers);

}  // namespace alphax
