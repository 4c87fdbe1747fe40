#include "alphax/engine.hpp"

#include <algorithm>
#include <cmath>

#include "alphax/errors.hpp"
#include "alphax/metrics.hpp"
#include "alphax/rng.hpp"

namespace alphax {

std::vector<std::pair<Date, double>> BacktestRun::equity_curve() const {
    std::vector<std::pair<Date, double>> out;
    out.reserve(curve.size());
    for (const auto& p : curve) out.emplace_back(p.date, p.equity);
    return out;
}

std::optional<BarrierExit> check_barriers(const Position& position, const DailyBar& bar) {
    if (bar.date <= position.entry_date) return std::nullopt;
    const bool hit_tp =
        position.take_profit_price && bar.high >= *position.take_profit_price;
    const bool hit_sl = position.stop_loss_price && bar.low <= *position.stop_loss_price;
    if (hit_tp && hit_sl) return BarrierExit{*position.stop_loss_price, OrderReason::StopLoss};
    if (hit_tp) return BarrierExit{*position.take_profit_price, OrderReason::TakeProfit};
    if (hit_sl) return BarrierExit{*position.stop_loss_price, OrderReason::StopLoss};
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

namespace {

struct DecisionDay {
    FiscalQuarter quarter;
    Date release;        // statutory date
    Date exec;           // first trading day >= release
    Date next_release;   // vertical barrier for positions opened here
};

class Runner {
public:
    Runner(const MarketData& data, Strategy& strategy, const EngineConfig& cfg)
        : data_(data), strategy_(strategy), cfg_(cfg) {}

    BacktestRun run(Date start, Date end);

private:
    double fee_rate() const { return cfg_.cost_per_trade_bps / 1e4; }

    const DailyBar& bar_on_or_fail(const AssetId& asset, Date t) const {
        const DailyBar* bar = data_.bar_on(asset, t);
        if (!bar)
            throw DataGapError("no bar for open position " + asset + " on " + t.to_string());
        return *bar;
    }

    double equity_at(Date t, bool use_mid) const {
        double total = cash_ + rf_;
        for (const auto& [asset, pos] : positions_) {
            const DailyBar& bar = bar_on_or_fail(asset, t);
            total += pos.quantity * (use_mid ? mid_price(bar) : bar.close);
        }
        return total;
    }

    double drawable() const { return cash_ + rf_; }

    void draw(double amount) {
        double from_cash = std::min(amount, cash_);
        cash_ -= from_cash;
        rf_ -= amount - from_cash;
    }

    void record(Date t, const AssetId& asset, OrderSide side, double qty, double price,
                OrderReason reason) {
        TradeRecord rec;
        rec.date = t;
        rec.asset = asset;
        rec.side = side;
        rec.quantity = qty;
        rec.price = price;
        rec.reason = reason;
        rec.cash_after = cash_;
        rec.equity_after = equity_at(t, /*use_mid=*/true);
        run_.ledger.push_back(rec);
    }

    void sell(Date t, const AssetId& asset, double qty, double price, OrderReason reason) {
        auto it = positions_.find(asset);
        if (it == positions_.end()) return;
        qty = std::min(qty, it->second.quantity);
        if (qty <= 0) return;
        cash_ += qty * price * (1.0 - fee_rate());
        it->second.quantity -= qty;
        if (it->second.quantity <= 0) positions_.erase(it);
        record(t, asset, OrderSide::Sell, qty, price, reason);
    }

    void buy(Date t, const AssetId& asset, double budget, double price, OrderReason reason,
             std::optional<double> take_profit, std::optional<double> stop_fraction,
             std::optional<Date> vertical) {
        budget = std::min(budget, drawable());
        if (budget <= 0 || price <= 0) return;
        double qty = budget / (price * (1.0 + fee_rate()));
        if (qty <= 0) return;
        draw(budget);
        auto it = positions_.find(asset);
        if (it == positions_.end()) {
            Position pos;
            pos.asset = asset;
            pos.entry_date = t;
            pos.entry_price = price;
            pos.quantity = qty;
            pos.take_profit_price = take_profit;
            if (stop_fraction) pos.stop_loss_price = price * (1.0 - *stop_fraction);
            pos.vertical_date = vertical;
            positions_.emplace(asset, pos);
        } else {
            it->second.quantity += qty;  // retarget mode tops up benchmark holdings
        }
        record(t, asset, OrderSide::Buy, qty, price, reason);
    }

    void apply_pending_fills(Date t);
    void quarterly_decision(Date t, const DecisionDay& day);
    void rebalance(Date t, const DecisionDay& day, const QuarterlySelection& sel, double equity);

    const MarketData& data_;
    Strategy& strategy_;
    EngineConfig cfg_;

    double cash_ = 0;
    double rf_ = 0;
    int decision_counter_ = 0;
    std::map<AssetId, Position> positions_;
    std::vector<Order> pending_;
    BacktestRun run_;
};

void Runner::apply_pending_fills(Date t) {
    std::vector<Order> fills;
    fills.swap(pending_);
    for (const Order& order : fills) {
        if (order.side != OrderSide::Sell) continue;
        auto it = positions_.find(order.asset);
        if (it == positions_.end()) continue;
        const DailyBar& bar = bar_on_or_fail(order.asset, t);
        sell(t, order.asset, it->second.quantity, mid_price(bar), order.reason);
    }
    for (const Order& order : fills) {
        if (order.side != OrderSide::Buy) continue;
        if (positions_.count(order.asset)) continue;
        const DailyBar* bar = data_.bar_on(order.asset, t);
        if (!bar) continue;  // signal for an asset that did not trade today lapses
        double budget = order.weight_fraction * equity_at(t, true);
        buy(t, order.asset, budget, mid_price(*bar), order.reason, std::nullopt, std::nullopt,
            std::nullopt);
    }
}

void Runner::rebalance(Date t, const DecisionDay& day, const QuarterlySelection& sel,
                       double equity) {
    std::map<AssetId, const QuarterlyPick*> picks;
    for (const auto& pick : sel.picks) picks.emplace(pick.asset, &pick);

    if (sel.keep_overlap) {
        // Names no longer selected exit at mid; kept names refresh their
        // take-profit and vertical barriers (the stop stays entry-based).
        std::vector<AssetId> held;
        for (const auto& [asset, pos] : positions_) held.push_back(asset);
        for (const AssetId& asset : held) {
            auto pick = picks.find(asset);
            if (pick == picks.end()) {
                const DailyBar& bar = bar_on_or_fail(asset, t);
                sell(t, asset, positions_.at(asset).quantity, mid_price(bar),
                     OrderReason::Vertical);
            } else {
                Position& pos = positions_.at(asset);
                pos.take_profit_price = pick->second->take_profit;
                pos.vertical_date = day.next_release;
            }
        }
        for (const auto& pick : sel.picks) {
            if (positions_.count(pick.asset)) continue;
            const DailyBar* bar = data_.bar_on(pick.asset, t);
            if (!bar) continue;  // cannot fill without a bar on the decision day
            buy(t, pick.asset, pick.weight * equity, mid_price(*bar), OrderReason::Rebalance,
                pick.take_profit, pick.stop_fraction, day.next_release);
        }
    } else {
        // Retarget holdings to the pick weights: sell surpluses, buy deficits.
        const double tolerance = 1e-9 * std::max(1.0, equity);
        std::vector<AssetId> held;
        for (const auto& [asset, pos] : positions_) held.push_back(asset);
        for (const AssetId& asset : held) {
            const DailyBar& bar = bar_on_or_fail(asset, t);
            double mid = mid_price(bar);
            auto pick = picks.find(asset);
            double target_qty = pick == picks.end() ? 0.0 : pick->second->weight * equity / mid;
            double surplus = positions_.at(asset).quantity - target_qty;
            if (surplus * mid > tolerance)
                sell(t, asset, surplus, mid, OrderReason::Rebalance);
        }
        for (const auto& pick : sel.picks) {
            const DailyBar* bar = data_.bar_on(pick.asset, t);
            if (!bar) continue;
            double mid = mid_price(*bar);
            double held_qty = 0;
            if (auto it = positions_.find(pick.asset); it != positions_.end())
                held_qty = it->second.quantity;
            double deficit_value = pick.weight * equity - held_qty * mid;
            if (deficit_value > tolerance)
                buy(t, pick.asset, deficit_value, mid, OrderReason::Rebalance, std::nullopt,
                    std::nullopt, std::nullopt);
        }
    }
}

void Runner::quarterly_decision(Date t, const DecisionDay& day) {
    double equity = equity_at(t, true);
    std::set<AssetId> open;
    for (const auto& [asset, pos] : positions_) open.insert(asset);

    QuarterlyContext ctx;
    ctx.data = &data_;
    ctx.today = t;
    ctx.quarter = day.quarter;
    ctx.next_decision = day.next_release;
    ctx.decision_index = decision_counter_++;
    ctx.equity = equity;
    ctx.open_positions = &open;

    QuarterlySelection sel = strategy_.select(ctx);
    rebalance(t, day, sel, equity);

    AllocationEntry entry;
    entry.quarter = day.quarter;
    for (const auto& pick : sel.picks) entry.assets.push_back(pick.asset);
    run_.allocations.push_back(std::move(entry));
}

BacktestRun Runner::run(Date start, Date end) {
    if (end < start) throw ConfigError("backtest end before start");
    std::vector<Date> trading = data_.trading_days(start, end);
    if (trading.empty()) throw ConfigError("no trading days in backtest range");

    run_.strategy = strategy_.name();

    // Statutory decision schedule over the whole data span; exec days before
    // `start` only warm the model up, the rest trade.
    std::map<Date, DecisionDay> live;
    if (strategy_.quarterly()) {
        std::vector<DecisionDay> schedule;
        FiscalQuarter q{data_.first_bar_date().year() - 1, 1};
        FiscalQuarter last{end.year() + 1, 4};
        for (; q <= last; q = q.next()) {
            Date release = ReleaseCalendar::release_date(q);
            if (release < data_.first_bar_date() || release > end) continue;
            auto exec = data_.next_trading_day(release);
            if (!exec || *exec > end) continue;
            schedule.push_back(
                {q, release, *exec, ReleaseCalendar::release_date(q.next())});
        }
        int index = 0;
        for (const auto& day : schedule) {
            if (day.exec < start) {
                QuarterlyContext ctx;
                ctx.data = &data_;
                ctx.today = day.exec;
                ctx.quarter = day.quarter;
                ctx.next_decision = day.next_release;
                ctx.decision_index = index++;
                strategy_.warmup(ctx);
            } else {
                live.emplace(day.exec, day);
            }
        }
        decision_counter_ = index;
    }

    if (strategy_.idle_cash_to_risk_free())
        rf_ = cfg_.initial_capital;
    else
        cash_ = cfg_.initial_capital;

    for (const Date& t : trading) {
        // (1) risk-free accrual, one business-day factor per trading day
        double annual = data_.risk_free().rate_at(t).value_or(0.0);
        rf_ *= std::pow(1.0 + annual, 1.0 / kTradingDaysPerYear);

        // (2) barriers
        std::vector<AssetId> open;
        for (const auto& [asset, pos] : positions_) open.push_back(asset);
        for (const AssetId& asset : open) {
            const DailyBar& bar = bar_on_or_fail(asset, t);
            const Position& pos = positions_.at(asset);
            if (auto exit = check_barriers(pos, bar))
                sell(t, asset, pos.quantity, exit->price, exit->reason);
        }

        // (3) executions at mid: yesterday's signals, then today's decision
        apply_pending_fills(t);
        if (auto it = live.find(t); it != live.end()) quarterly_decision(t, it->second);

        // (4) close signals queue for tomorrow
        if (!strategy_.quarterly()) {
            TechnicalState state;
            for (const auto& [asset, pos] : positions_) state.open.insert(asset);
            for (const auto& order : pending_) {
                if (order.side == OrderSide::Buy)
                    state.pending_buys.insert(order.asset);
                else
                    state.pending_sells.insert(order.asset);
            }
            DailyContext ctx{&data_, t, &state};
            for (auto& order : strategy_.on_close(ctx)) pending_.push_back(order);
        }

        // end-of-run mark-out
        if (cfg_.liquidate_at_end && t == trading.back() && !positions_.empty()) {
            std::vector<AssetId> rest;
            for (const auto& [asset, pos] : positions_) rest.push_back(asset);
            for (const AssetId& asset : rest) {
                const DailyBar& bar = bar_on_or_fail(asset, t);
                sell(t, asset, positions_.at(asset).quantity, mid_price(bar),
                     OrderReason::Liquidation);
            }
        }

        // (5) sweep idle cash into the Selic sleeve where the strategy says so
        if (strategy_.idle_cash_to_risk_free()) {
            rf_ += cash_;
            cash_ = 0;
        }

        // (6) mark to market at close
        EquityPoint point;
        point.date = t;
        point.equity = equity_at(t, /*use_mid=*/false);
        point.risk_free_balance = rf_;
        point.n_positions = static_cast<int>(positions_.size());
        run_.curve.push_back(point);
    }
    return run_;
}

}  // namespace

BacktestRun run_backtest(const MarketData& data, Strategy& strategy, Date start, Date end,
                         const EngineConfig& cfg) {
    Runner runner(data, strategy, cfg);
    return runner.run(start, end);
}

// ---------------------------------------------------------------------------
// AlphaX strategy
// ---------------------------------------------------------------------------

AlphaXStrategy::AlphaXStrategy(AlphaXConfig cfg, ValuationConfig valuation,
                               std::uint64_t master_seed)
    : cfg_(cfg), valuation_(valuation), master_seed_(master_seed) {}

IndicatorPanel AlphaXStrategy::observe(const QuarterlyContext& ctx) {
    return build_panel(*ctx.data, ctx.today);
}

void AlphaXStrategy::warmup(const QuarterlyContext& ctx) {
    IndicatorPanel panel = observe(ctx);
    history_.push(ctx.today, panel);
}

QuarterlySelection AlphaXStrategy::select(const QuarterlyContext& ctx) {
    IndicatorPanel panel = observe(ctx);

    ValuationConfig vc = valuation_;
    std::uint64_t base = vc.forest.seed != 0 ? vc.forest.seed : master_seed_;
    vc.forest.seed = mix_seed(base, static_cast<std::uint64_t>(ctx.decision_index));

    auto projections = project_all(panel, history_, vc);
    auto selection = alphax_select(panel, projections, cfg_);

    QuarterlySelection out;
    out.keep_overlap = true;
    for (const Order& order : alphax_allocate(selection)) {
        if (order.asset == kRiskFreeSleeve) continue;  // empty selection: stay in Selic
        QuarterlyPick pick;
        pick.asset = order.asset;
        pick.weight = order.weight_fraction;
        pick.take_profit = projections.at(order.asset).projected_price;
        pick.stop_fraction = cfg_.stop_loss;
        out.picks.push_back(std::move(pick));
    }
    history_.push(ctx.today, panel);
    return out;
}

// ---------------------------------------------------------------------------
// Technical strategy
// ---------------------------------------------------------------------------

std::vector<Order> TechnicalStrategy::on_close(const DailyContext& ctx) {
    const MarketData& data = *ctx.data;
    std::vector<AssetId> assets =
        data.universe().empty() ? data.bar_assets() : data.universe();

    std::map<AssetId, double> values;
    for (const AssetId& asset : assets) {
        const auto* series = data.bars_for(asset);
        if (!series) continue;
        auto pos = std::upper_bound(series->begin(), series->end(), ctx.today,
                                    [](Date d, const DailyBar& b) { return d < b.date; });
        if (pos == series->begin()) continue;
        std::size_t idx = static_cast<std::size_t>(pos - series->begin()) - 1;
        if ((*series)[idx].date != ctx.today) continue;  // signals need today's close

        std::optional<double> value;
        const std::size_t need =
            cfg_.kind == TechnicalKind::Stochastic ? cfg_.window : cfg_.window + 1;
        if (idx + 1 < need) continue;
        std::span<const DailyBar> window(series->data() + (idx + 1 - need), need);
        switch (cfg_.kind) {
            case TechnicalKind::Rsi: {
                std::vector<double> closes;
                closes.reserve(window.size());
                for (const auto& bar : window) closes.push_back(bar.close);
                value = compute_rsi(closes, cfg_.window);
                break;
            }
            case TechnicalKind::Stochastic:
                value = compute_stochastic(window, cfg_.window);
                break;
            case TechnicalKind::Mfi:
                value = compute_mfi(window, cfg_.window);
                break;
        }
        if (value) values.emplace(asset, *value);
    }
    return technical_step(*ctx.state, values, cfg_);
}

// ---------------------------------------------------------------------------
// NIbov benchmark
// ---------------------------------------------------------------------------

QuarterlySelection NibovStrategy::select(const QuarterlyContext& ctx) {
    const IndexWeights* snap = ctx.data->index_weights().at_or_before(ctx.today);
    if (!snap)
        throw ConfigError("nibov: no index weights at or before " + ctx.today.to_string());
    IndexWeights restricted = nibov_weights(*snap, ctx.data->universe());

    QuarterlySelection out;
    out.keep_overlap = false;
    for (const auto& [asset, weight] : restricted.weights)
        out.picks.push_back({asset, weight, std::nullopt, std::nullopt});
    return out;
}

std::unique_ptr<Strategy> make_strategy(const std::string& name, const StrategyParams& params) {
    auto technical = [&](TechnicalKind kind) {
        TechnicalConfig cfg = TechnicalConfig::defaults(kind);
        cfg.window = params.technical.window;
        if (params.technical.oversold) cfg.oversold = *params.technical.oversold;
        if (params.technical.overbought) cfg.overbought = *params.technical.overbought;
        cfg.max_positions = params.technical.max_positions;
        cfg.idle_cash_risk_free = params.technical.idle_cash_risk_free;
        return cfg;
    };
    if (name == "alphax")
        return std::make_unique<AlphaXStrategy>(params.alphax, params.valuation,
                                                params.master_seed);
    if (name == "rsi") return std::make_unique<TechnicalStrategy>(technical(TechnicalKind::Rsi));
    if (name == "stochastic")
        return std::make_unique<TechnicalStrategy>(technical(TechnicalKind::Stochastic));
    if (name == "mfi") return std::make_unique<TechnicalStrategy>(technical(TechnicalKind::Mfi));
    if (name == "selic") return std::make_unique<SelicStrategy>();
    if (name == "nibov") return std::make_unique<NibovStrategy>();
    throw ConfigError("unknown strategy '" + name + "'");
}

}  // namespace alphax
