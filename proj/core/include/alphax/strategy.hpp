#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "alphax/indicators.hpp"
#include "alphax/market_data.hpp"
#include "alphax/valuation.hpp"

namespace alphax {

enum class OrderSide { Buy, Sell };

enum class OrderReason { Rebalance, TakeProfit, StopLoss, Vertical, Signal, Liquidation };

std::string to_string(OrderSide side);
std::string to_string(OrderReason reason);

/// Sentinel asset id for the risk-free sleeve. Deliberately fails the market
/// ticker pattern (letters+digits) so it can never collide with a real asset.
inline const AssetId kRiskFreeSleeve = "SELIC";

/// Strategy-level order intent: a fraction of current equity, not a quantity.
struct Order {
    AssetId asset;
    OrderSide side = OrderSide::Buy;
    double weight_fraction = 0;  // (0, 1] for buys
    OrderReason reason = OrderReason::Rebalance;
};

struct AlphaXConfig {
    int max_assets = 4;          // X: at most this many names held
    int growth_threshold = 2;    // growth score must be >= this
    double stop_loss = 0.10;     // lower barrier fraction below entry
};

enum class TechnicalKind { Rsi, Stochastic, Mfi };

std::string to_string(TechnicalKind kind);

struct TechnicalConfig {
    TechnicalKind kind = TechnicalKind::Rsi;
    int window = 14;
    double oversold = 30;   // buy below this (RSI 30; Stochastic/MFI 20)
    double overbought = 70; // sell above this (RSI 70; Stochastic/MFI 80)
    int max_positions = 4;
    bool idle_cash_risk_free = false;

    static TechnicalConfig defaults(TechnicalKind kind);
};

// --- AlphaX selection and allocation ----------------------------------------

/// Ranked candidates: pass the indicator filter (profitability, solvency and
/// valuation scores strictly above their cross-sectional medians, growth >=
/// threshold) and project a positive expected return. Sorted by expected
/// return descending (ties by ticker), truncated to X.
std::vector<std::pair<AssetId, double>> alphax_select(
    const IndicatorPanel& panel, const std::map<AssetId, PriceProjection>& projections,
    const AlphaXConfig& cfg);

/// Uniform 1/k weights over the k selected assets; an empty selection becomes
/// a single order moving everything into the risk-free sleeve.
std::vector<Order> alphax_allocate(const std::vector<std::pair<AssetId, double>>& selection);

// --- technical indicators ----------------------------------------------------

/// RSI over the last window+1 closes (Wilder average gain/loss). All-loss
/// windows read 0, all-gain 100, a flat window 50.
std::optional<double> compute_rsi(std::span<const double> closes, int window);

/// Fast stochastic %K over the last `window` bars; a flat range reads 50.
std::optional<double> compute_stochastic(std::span<const DailyBar> bars, int window);

/// Money Flow Index over the last window+1 bars. Zero negative flow reads
/// 100, zero positive flow 0, no flow at all 50.
std::optional<double> compute_mfi(std::span<const DailyBar> bars, int window);

// --- technical trading rule --------------------------------------------------

/// Open positions plus orders already signaled but not yet filled (signals
/// fill at the next day's mid price).
struct TechnicalState {
    std::set<AssetId> open;
    std::set<AssetId> pending_buys;
    std::set<AssetId> pending_sells;
};

/// Sell every open position whose indicator is above `overbought`; then buy
/// oversold assets (lowest indicator first, ties by ticker) into the free
/// slots. Each new position is sized to equity / max_positions.
std::vector<Order> technical_step(const TechnicalState& state,
                                  const std::map<AssetId, double>& indicator_values,
                                  const TechnicalConfig& cfg);

// --- benchmark weights --------------------------------------------------------

/// Restricts an index snapshot to the strategy universe and renormalizes.
/// Throws ValidationError when the intersection is empty.
IndexWeights nibov_weights(const IndexWeights& index, const std::vector<AssetId>& universe);

}  // namespace alphax
