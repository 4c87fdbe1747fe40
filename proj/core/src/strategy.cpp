#include "alphax/strategy.hpp"

#include <algorithm>
#include <cmath>

#include "alphax/errors.hpp"

namespace alphax {

std::string to_string(OrderSide side) { return side == OrderSide::Buy ? "buy" : "sell"; }

std::string to_string(OrderReason reason) {
    switch (reason) {
        case OrderReason::Rebalance: return "rebalance";
        case OrderReason::TakeProfit: return "take_profit";
        case OrderReason::StopLoss: return "stop_loss";
        case OrderReason::Vertical: return "vertical";
        case OrderReason::Signal: return "signal";
        case OrderReason::Liquidation: return "liquidation";
    }
    return "?";
}

std::string to_string(TechnicalKind kind) {
    switch (kind) {
        case TechnicalKind::Rsi: return "rsi";
        case TechnicalKind::Stochastic: return "stochastic";
        case TechnicalKind::Mfi: return "mfi";
    }
    return "?";
}

TechnicalConfig TechnicalConfig::defaults(TechnicalKind kind) {
    TechnicalConfig cfg;
    cfg.kind = kind;
    if (kind == TechnicalKind::Rsi) {
        cfg.oversold = 30;
        cfg.overbought = 70;
    } else {
        cfg.oversold = 20;
        cfg.overbought = 80;
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// AlphaX selection
// ---------------------------------------------------------------------------

namespace {

double median_int(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? double(v[n / 2]) : (double(v[n / 2 - 1]) + double(v[n / 2])) / 2.0;
}

}  // namespace

std::vector<std::pair<AssetId, double>> alphax_select(
    const IndicatorPanel& panel, const std::map<AssetId, PriceProjection>& projections,
    const AlphaXConfig& cfg) {
    std::vector<std::pair<AssetId, double>> out;
    if (panel.rows.empty()) return out;

    std::vector<int> prof, solv, val;
    for (const auto& [id, row] : panel.rows) {
        prof.push_back(row.scores.profitability);
        solv.push_back(row.scores.solvency);
        val.push_back(row.scores.valuation);
    }
    const double prof_med = median_int(prof);
    const double solv_med = median_int(solv);
    const double val_med = median_int(val);

    for (const auto& [id, row] : panel.rows) {
        if (!(row.scores.profitability > prof_med)) continue;
        if (!(row.scores.solvency > solv_med)) continue;
        if (!(row.scores.valuation > val_med)) continue;
        if (row.scores.growth < cfg.growth_threshold) continue;
        auto proj = projections.find(id);
        if (proj == projections.end()) continue;
        if (!(proj->second.expected_return > 0)) continue;
        out.emplace_back(id, proj->second.expected_return);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(out.size()) > cfg.max_assets) out.resize(cfg.max_assets);
    return out;
}

std::vector<Order> alphax_allocate(const std::vector<std::pair<AssetId, double>>& selection) {
    std::vector<Order> out;
    if (selection.empty()) {
        out.push_back({kRiskFreeSleeve, OrderSide::Buy, 1.0, OrderReason::Rebalance});
        return out;
    }
    const double w = 1.0 / static_cast<double>(selection.size());
    for (const auto& [asset, er] : selection)
        out.push_back({asset, OrderSide::Buy, w, OrderReason::Rebalance});
    return out;
}

// ---------------------------------------------------------------------------
// Technical indicators
// ---------------------------------------------------------------------------

std::optional<double> compute_rsi(std::span<const double> closes, int window) {
    if (window < 2 || closes.size() < static_cast<std::size_t>(window) + 1) return std::nullopt;
    auto tail = closes.subspan(closes.size() - window - 1);
    double gain = 0, loss = 0;
    for (int i = 1; i <= window; ++i) {
        double d = tail[i] - tail[i - 1];
        if (d > 0)
            gain += d;
        else
            loss -= d;
    }
    gain /= window;
    loss /= window;
    if (gain == 0 && loss == 0) return 50.0;  // flat window
    if (loss == 0) return 100.0;
    double rs = gain / loss;
    return 100.0 - 100.0 / (1.0 + rs);
}

std::optional<double> compute_stochastic(std::span<const DailyBar> bars, int window) {
    if (window < 2 || bars.size() < static_cast<std::size_t>(window)) return std::nullopt;
    auto tail = bars.subspan(bars.size() - window);
    double hh = tail[0].high, ll = tail[0].low;
    for (const auto& bar : tail) {
        hh = std::max(hh, bar.high);
        ll = std::min(ll, bar.low);
    }
    if (hh == ll) return 50.0;  // flat range
    return 100.0 * (tail.back().close - ll) / (hh - ll);
}

std::optional<double> compute_mfi(std::span<const DailyBar> bars, int window) {
    if (window < 2 || bars.size() < static_cast<std::size_t>(window) + 1) return std::nullopt;
    auto tail = bars.subspan(bars.size() - window - 1);
    double pos = 0, neg = 0;
    for (int i = 1; i <= window; ++i) {
        auto typical = [](const DailyBar& b) { return (b.high + b.low + b.close) / 3.0; };
        double tp = typical(tail[i]);
        double prev = typical(tail[i - 1]);
        double flow = tp * static_cast<double>(tail[i].volume);
        if (tp > prev)
            pos += flow;
        else if (tp < prev)
            neg += flow;
    }
    if (pos == 0 && neg == 0) return 50.0;  // no directional flow
    if (neg == 0) return 100.0;
    if (pos == 0) return 0.0;
    return 100.0 - 100.0 / (1.0 + pos / neg);
}

// ---------------------------------------------------------------------------
// Technical trading rule
// ---------------------------------------------------------------------------

std::vector<Order> technical_step(const TechnicalState& state,
                                  const std::map<AssetId, double>& indicator_values,
                                  const TechnicalConfig& cfg) {
    std::vector<Order> out;

    int exits = 0;
    for (const auto& asset : state.open) {
        if (state.pending_sells.count(asset)) continue;
        auto it = indicator_values.find(asset);
        if (it != indicator_values.end() && it->second > cfg.overbought) {
            out.push_back({asset, OrderSide::Sell, 1.0, OrderReason::Signal});
            ++exits;
        }
    }

    // Slots count what will be open once every pending fill settles.
    int committed = static_cast<int>(state.open.size() + state.pending_buys.size()) -
                    static_cast<int>(state.pending_sells.size()) - exits;
    int slots = cfg.max_positions - committed;
    if (slots <= 0) return out;

    std::vector<std::pair<double, AssetId>> candidates;
    for (const auto& [asset, value] : indicator_values) {
        if (value >= cfg.oversold) continue;
        if (state.open.count(asset) || state.pending_buys.count(asset)) continue;
        candidates.emplace_back(value, asset);
    }
    std::sort(candidates.begin(), candidates.end());  // lowest indicator, then ticker

    const double weight = 1.0 / static_cast<double>(cfg.max_positions);
    for (const auto& [value, asset] : candidates) {
        if (slots-- <= 0) break;
        out.push_back({asset, OrderSide::Buy, weight, OrderReason::Signal});
    }
    return out;
}

IndexWeights nibov_weights(const IndexWeights& index, const std::vector<AssetId>& universe) {
    IndexWeights out;
    out.as_of = index.as_of;
    double total = 0;
    for (const auto& asset : universe) {
        auto it = index.weights.find(asset);
        if (it != index.weights.end() && it->second > 0) {
            out.weights[asset] = it->second;
            total += it->second;
        }
    }
    if (out.weights.empty() || total <= 0)
        throw ValidationError("no universe assets carry index weight at " +
                              index.as_of.to_string());
    for (auto& [asset, w] : out.weights) w /= total;
    return out;
}

}  // namespace alphax
