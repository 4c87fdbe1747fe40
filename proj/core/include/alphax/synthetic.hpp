#pragma once

#include <cstdint>
#include <vector>

#include "alphax/market_data.hpp"

namespace alphax {

/// A complete self-consistent synthetic dataset: every file the backtester
/// consumes, generated deterministically from a seed.
struct SyntheticDataset {
    std::vector<AssetId> tickers;
    std::vector<DailyBar> bars;
    std::vector<StatementRecord> statements;
    RiskFreeSeries risk_free;
    IndexWeightsSeries index_weights;

    FiscalQuarter first_quarter;
    FiscalQuarter last_quarter;

    MarketData to_market_data() const;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    int n_assets = 5;
    int n_quarters = 8;
    int first_year = 2018;  // quarters start at Q1 of this year
};

/// Same (seed, sizes) in, byte-identical files out. Price paths are lognormal
/// random walks with slowly switching drift regimes; fundamentals track price
/// levels loosely so valuation multiples stay in a realistic range; statements
/// release on the statutory calendar; bars run from Jan 2 of first_year until
/// ~100 days past the final release so every decision date has prices.
SyntheticDataset generate_synthetic_universe(const SynthConfig& config);

}  // namespace alphax
