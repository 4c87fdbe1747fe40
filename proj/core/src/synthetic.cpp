#include "alphax/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "alphax/errors.hpp"
#include "alphax/rng.hpp"

namespace alphax {
namespace {

double quantize(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

double quantize_floor(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::floor(v * scale) / scale;
}

double quantize_ceil(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::ceil(v * scale) / scale;
}

std::vector<AssetId> make_tickers(Rng& rng, int n) {
    static const int suffixes[] = {3, 4, 5, 11};
    std::set<AssetId> seen;
    std::vector<AssetId> out;
    while (static_cast<int>(out.size()) < n) {
        std::string name;
        for (int i = 0; i < 4; ++i)
            name += static_cast<char>('A' + static_cast<int>(rng.uniform_index(26)));
        name += std::to_string(suffixes[rng.uniform_index(4)]);
        if (seen.insert(name).second) out.push_back(name);
    }
    return out;
}

struct AssetModel {
    double price;          // current close
    double daily_vol;      // stdev of daily log return
    double drift;          // annual drift of the current regime
    int regime_days_left;  // days until the drift re-draws
    double net_margin;     // net income / revenue
    double ebit_factor;    // ebit / net income
    double debt_to_equity;
    double book_to_price;  // equity per share relative to price at issue
    double earn_rate;      // quarterly EPS as a fraction of price
    double shares;
};

}  // namespace

MarketData SyntheticDataset::to_market_data() const {
    MarketData md;
    md.add_bars(bars);
    md.add_statements(statements);
    md.set_risk_free(risk_free);
    md.set_index_weights(index_weights);
    md.set_universe(tickers);
    return md;
}

SyntheticDataset generate_synthetic_universe(const SynthConfig& config) {
    if (config.n_assets < 1) throw ConfigError("n_assets must be >= 1");
    if (config.n_quarters < 2) throw ConfigError("n_quarters must be >= 2");

    SyntheticDataset out;
    Rng rng(mix_seed(config.seed, 0xa11fa));

    out.tickers = make_tickers(rng, config.n_assets);
    std::sort(out.tickers.begin(), out.tickers.end());

    out.first_quarter = FiscalQuarter{config.first_year, 1};
    out.last_quarter = out.first_quarter.next(config.n_quarters - 1);

    const Date bars_start = Date::from_ymd(config.first_year, 1, 2);
    const Date last_release = ReleaseCalendar::release_date(out.last_quarter);
    const Date bars_end = last_release.plus_days(100);

    // Per-asset price processes and fundamental parameters.
    std::vector<AssetModel> models;
    for (int i = 0; i < config.n_assets; ++i) {
        Rng arng(mix_seed(config.seed, 0xbeef00 + static_cast<std::uint64_t>(i)));
        AssetModel m;
        m.price = arng.uniform(8.0, 80.0);
        m.daily_vol = arng.uniform(0.012, 0.028);
        m.drift = arng.uniform(-0.25, 0.35);
        m.regime_days_left = arng.uniform_int(80, 220);
        m.net_margin = arng.uniform(0.04, 0.18);
        m.ebit_factor = arng.uniform(1.15, 1.6);
        m.debt_to_equity = arng.uniform(0.3, 2.2);
        m.book_to_price = arng.uniform(0.4, 1.3);
        m.earn_rate = arng.uniform(0.012, 0.035);
        m.shares = std::round(arng.uniform(1e8, 9e8));
        models.push_back(m);
    }

    // Daily bars on weekdays. Each asset has its own RNG stream so data is
    // stable under changes to n_assets.
    std::vector<Rng> streams;
    for (int i = 0; i < config.n_assets; ++i)
        streams.emplace_back(mix_seed(config.seed, 0xcafe00 + static_cast<std::uint64_t>(i)));

    std::vector<std::vector<std::pair<Date, double>>> closes(config.n_assets);
    for (Date d = bars_start; d <= bars_end; d = d.plus_days(1)) {
        if (d.is_weekend()) continue;
        for (int i = 0; i < config.n_assets; ++i) {
            auto& m = models[i];
            auto& r = streams[i];
            if (m.regime_days_left-- <= 0) {
                m.drift = r.uniform(-0.45, 0.55);
                m.regime_days_left = r.uniform_int(80, 220);
            }
            double step = m.drift / 252.0 + m.daily_vol * r.normal();
            double prev = m.price;
            m.price = std::max(0.5, m.price * std::exp(step));

            double open = prev * std::exp(0.3 * m.daily_vol * r.normal());
            double hi = std::max(open, m.price) * (1.0 + std::abs(r.normal()) * 0.4 * m.daily_vol);
            double lo = std::min(open, m.price) * (1.0 - std::abs(r.normal()) * 0.4 * m.daily_vol);

            DailyBar bar;
            bar.asset = out.tickers[i];
            bar.date = d;
            // Round low down and high up so OHLC invariants survive rounding.
            bar.open = quantize(open, 2);
            bar.close = quantize(m.price, 2);
            bar.high = quantize_ceil(hi, 2);
            bar.low = std::max(0.01, quantize_floor(lo, 2));
            bar.volume = static_cast<std::int64_t>(1e4 + r.uniform() * 5e5) * 100;
            out.bars.push_back(bar);
            closes[i].emplace_back(d, bar.close);
        }
    }
    std::sort(out.bars.begin(), out.bars.end(), [](const DailyBar& a, const DailyBar& b) {
        if (a.asset != b.asset) return a.asset < b.asset;
        return a.date < b.date;
    });

    // Quarterly statements. EPS tracks the end-of-quarter price level so
    // P/E stays plausible; occasional loss quarters; balance sheet follows
    // the accounting identity assets = liabilities + equity.
    for (int i = 0; i < config.n_assets; ++i) {
        Rng frng(mix_seed(config.seed, 0xf00d00 + static_cast<std::uint64_t>(i)));
        const auto& m = models[i];
        for (int q = 0; q < config.n_quarters; ++q) {
            FiscalQuarter fq = out.first_quarter.next(q);
            Date q_end = fq.end_date();
            // close at or before quarter end
            double px = m.price;
            for (auto it = closes[i].rbegin(); it != closes[i].rend(); ++it) {
                if (it->first <= q_end) {
                    px = it->second;
                    break;
                }
            }

            double eps = px * m.earn_rate * frng.uniform(0.7, 1.3);
            if (frng.uniform() < 0.07) eps = -std::abs(eps) * frng.uniform(0.2, 0.8);

            StatementRecord rec;
            rec.company = out.tickers[i];
            rec.fiscal_quarter = fq;
            rec.net_income = quantize(eps * m.shares, 2);
            rec.revenue = quantize(std::abs(eps) / m.net_margin * m.shares *
                                       frng.uniform(0.85, 1.15) + 1.0, 2);
            rec.ebit = quantize(rec.net_income * m.ebit_factor, 2);
            rec.gross_profit = quantize(rec.revenue * frng.uniform(0.25, 0.55), 2);
            rec.operating_expenses = quantize(rec.revenue - rec.ebit, 2);
            rec.operating_cash_flow = quantize(rec.net_income * frng.uniform(0.7, 1.5), 2);
            double equity = px * m.book_to_price * frng.uniform(0.9, 1.1) * m.shares;
            rec.equity = quantize(equity, 2);
            rec.total_liabilities =
                quantize(equity * m.debt_to_equity * frng.uniform(0.9, 1.1), 2);
            rec.total_assets = quantize(rec.equity + rec.total_liabilities, 2);
            rec.shares_outstanding = m.shares;
            rec.release_date = ReleaseCalendar::release_date(fq);
            out.statements.push_back(rec);
        }
    }
    std::sort(out.statements.begin(), out.statements.end(),
              [](const StatementRecord& a, const StatementRecord& b) {
                  if (a.company != b.company) return a.company < b.company;
                  return a.fiscal_quarter < b.fiscal_quarter;
              });

    // Monthly risk-free rate, random walk clamped to [2%, 15%].
    {
        Rng rrng(mix_seed(config.seed, 0x5e11c));
        double rate = rrng.uniform(0.05, 0.12);
        for (Date d = bars_start; d <= bars_end; d = d.plus_days(1)) {
            if (d.day() != 1 && d != bars_start) continue;
            rate = std::clamp(rate + rrng.uniform(-0.0075, 0.0075), 0.02, 0.15);
            out.risk_free.entries.emplace_back(d, quantize(rate, 6));
        }
    }

    // Index weights refreshed at every statutory release date.
    {
        Rng wrng(mix_seed(config.seed, 0x1b0f));
        for (int q = 0; q < config.n_quarters; ++q) {
            IndexWeights snap;
            snap.as_of = ReleaseCalendar::release_date(out.first_quarter.next(q));
            double total = 0;
            std::vector<double> raw(config.n_assets);
            for (int i = 0; i < config.n_assets; ++i) {
                raw[i] = std::exp(wrng.normal() * 0.8);
                total += raw[i];
            }
            for (int i = 0; i < config.n_assets; ++i)
                snap.weights[out.tickers[i]] = quantize(raw[i] / total, 6);
            out.index_weights.snapshots.push_back(std::move(snap));
        }
    }

    return out;
}

}  // namespace alphax
