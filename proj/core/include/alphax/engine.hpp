#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "alphax/market_data.hpp"
#include "alphax/strategy.hpp"
#include "alphax/valuation.hpp"

namespace alphax {

/// An open holding with its three barriers. Benchmark and technical positions
/// carry no barriers and exit only through strategy decisions.
struct Position {
    AssetId asset;
    Date entry_date;
    double entry_price = 0;
    double quantity = 0;
    std::optional<double> take_profit_price;  // AlphaX: the projected price
    std::optional<double> stop_loss_price;    // entry * (1 - stop_loss fraction)
    std::optional<Date> vertical_date;        // next statutory release date
};

/// Take-profit / stop-loss test against one daily bar. Fires only strictly
/// after the entry day. A day touching both barriers resolves to the stop
/// (daily bars cannot order intrabar events; the pessimistic reading avoids
/// inflating results). The vertical barrier is handled by the rebalance step,
/// so this returns nothing on the vertical date itself.
struct BarrierExit {
    double price = 0;
    OrderReason reason = OrderReason::TakeProfit;
};
std::optional<BarrierExit> check_barriers(const Position& position, const DailyBar& bar);

struct TradeRecord {
    Date date;
    AssetId asset;
    OrderSide side = OrderSide::Buy;
    double quantity = 0;
    double price = 0;
    OrderReason reason = OrderReason::Rebalance;
    double cash_after = 0;    // cash sleeve right after the trade, before sweep
    double equity_after = 0;  // cash + risk-free + positions at today's mid
};

struct EquityPoint {
    Date date;
    double equity = 0;  // cash + risk-free + positions at close
    double risk_free_balance = 0;
    int n_positions = 0;
};

struct AllocationEntry {
    FiscalQuarter quarter;
    std::vector<AssetId> assets;  // empty means "No stocks"
};

struct BacktestRun {
    std::string strategy;
    std::vector<EquityPoint> curve;
    std::vector<TradeRecord> ledger;
    std::vector<AllocationEntry> allocations;

    std::vector<std::pair<Date, double>> equity_curve() const;
};

struct EngineConfig {
    double initial_capital = 100000.0;
    double cost_per_trade_bps = 0.0;  // hook; the reference setup trades costless
    bool liquidate_at_end = true;     // mark out open positions at the final mid
};

// ---------------------------------------------------------------------------
// Strategy interface
// ---------------------------------------------------------------------------

struct QuarterlyContext {
    const MarketData* data = nullptr;
    Date today;              // execution trading day (first trading day >= release)
    FiscalQuarter quarter;   // fiscal quarter whose statutory release triggered this
    Date next_decision;     // next statutory release date = vertical barrier
    int decision_index = 0;  // counts all decisions, warm-up included
    double equity = 0;       // portfolio equity at today's mid prices
    const std::set<AssetId>* open_positions = nullptr;
};

struct QuarterlyPick {
    AssetId asset;
    double weight = 0;  // fraction of equity
    std::optional<double> take_profit;
    std::optional<double> stop_fraction;
};

struct QuarterlySelection {
    std::vector<QuarterlyPick> picks;  // empty -> everything to the risk-free sleeve
    /// true: names already held are kept as-is (barriers refreshed, no resize);
    /// false: holdings are retargeted to the pick weights (benchmark tracks).
    bool keep_overlap = true;
};

struct DailyContext {
    const MarketData* data = nullptr;
    Date today;
    const TechnicalState* state = nullptr;
};

/// One strategy instance drives exactly one backtest run (quarterly
/// strategies accumulate model history across decisions).
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual std::string name() const = 0;

    virtual bool quarterly() const { return false; }

    /// Idle cash moves into the Selic sleeve at the end of each day.
    virtual bool idle_cash_to_risk_free() const { return true; }

    /// Quarterly decision, executed the same day at mid prices.
    virtual QuarterlySelection select(const QuarterlyContext&) { return {}; }

    /// Pre-start decision dates: observe data without trading (model warm-up).
    virtual void warmup(const QuarterlyContext&) {}

    /// Daily strategies: called at each close; orders fill next day at mid.
    virtual std::vector<Order> on_close(const DailyContext&) { return {}; }
};

/// Day loop, in order: (1) risk-free accrual, (2) barrier checks, (3) pending
/// signal fills and quarterly rebalance at mid prices, (4) close signals,
/// (5) cash sweep, (6) mark to market. Throws DataGapError when an open
/// position has no bar on a trading day.
BacktestRun run_backtest(const MarketData& data, Strategy& strategy, Date start, Date end,
                         const EngineConfig& cfg = {});

// ---------------------------------------------------------------------------
// Concrete strategies
// ---------------------------------------------------------------------------

/// Fundamental selection + projection ensemble + triple-barrier management.
class AlphaXStrategy : public Strategy {
public:
    AlphaXStrategy(AlphaXConfig cfg, ValuationConfig valuation, std::uint64_t master_seed);

    std::string name() const override { return "alphax"; }
    bool quarterly() const override { return true; }
    QuarterlySelection select(const QuarterlyContext& ctx) override;
    void warmup(const QuarterlyContext& ctx) override;

    const PanelHistory& history() const { return history_; }

private:
    IndicatorPanel observe(const QuarterlyContext& ctx);

    AlphaXConfig cfg_;
    ValuationConfig valuation_;
    std::uint64_t master_seed_;
    PanelHistory history_;
};

/// RSI / Stochastic / MFI threshold trading over the universe.
class TechnicalStrategy : public Strategy {
public:
    explicit TechnicalStrategy(TechnicalConfig cfg) : cfg_(cfg) {}

    std::string name() const override { return to_string(cfg_.kind); }
    bool idle_cash_to_risk_free() const override { return cfg_.idle_cash_risk_free; }
    std::vector<Order> on_close(const DailyContext& ctx) override;

private:
    TechnicalConfig cfg_;
};

/// Benchmark: everything sits in the Selic sleeve.
class SelicStrategy : public Strategy {
public:
    std::string name() const override { return "selic"; }
};

/// Benchmark: index weights restricted to the universe, renormalized, and
/// retargeted at every quarterly decision date.
class NibovStrategy : public Strategy {
public:
    std::string name() const override { return "nibov"; }
    bool quarterly() const override { return true; }
    QuarterlySelection select(const QuarterlyContext& ctx) override;
};

struct TechnicalParams {
    int window = 14;
    std::optional<double> oversold;    // unset -> kind-specific default
    std::optional<double> overbought;  // unset -> kind-specific default
    int max_positions = 4;
    bool idle_cash_risk_free = false;
};

struct StrategyParams {
    AlphaXConfig alphax;
    ValuationConfig valuation;
    TechnicalParams technical;
    std::uint64_t master_seed = 1;
};

/// Factory for the five strategy ids: alphax, rsi, stochastic, mfi, selic,
/// nibov. Throws ConfigError for unknown names.
std::unique_ptr<Strategy> make_strategy(const std::string& name, const StrategyParams& params);

}  // namespace alphax
