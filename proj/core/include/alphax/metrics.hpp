#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alphax/dates.hpp"
#include "alphax/market_data.hpp"

namespace alphax {

inline constexpr double kTradingDaysPerYear = 252.0;

/// Daily returns r_t = equity_t / equity_{t-1} - 1 and the matching excess
/// returns over the risk-free leg.
struct ReturnSeries {
    std::vector<double> returns;
    std::vector<double> excess;
};

ReturnSeries make_return_series(const std::vector<std::pair<Date, double>>& equity_curve,
                                const RiskFreeSeries& risk_free);

/// Sample moments of a return series: n, mean, sample std (n-1), adjusted
/// Fisher-Pearson skewness, and bias-corrected kurtosis (non-excess, so a
/// normal sample centers on 3). Skewness needs n >= 3, kurtosis n >= 4.
struct MomentStats {
    std::size_t n = 0;
    double mean = 0;
    double std_dev = 0;
    std::optional<double> skewness;
    std::optional<double> kurtosis;
};

MomentStats compute_moments(const std::vector<double>& x);

// --- equity-curve metrics --------------------------------------------------

double total_return(const std::vector<double>& equity);              // final/initial - 1
double cagr(const std::vector<double>& equity);                      // (final/initial)^(252/n) - 1
double max_drawdown(const std::vector<double>& equity);              // min(e_t/runmax - 1) <= 0

/// Annualized Sharpe and Sortino over excess returns. Either is nullopt when
/// its deviation is zero (degenerate series are not errors).
struct RiskAdjusted {
    std::optional<double> sharpe;
    std::optional<double> sortino;
};
RiskAdjusted sharpe_sortino(const std::vector<double>& excess);

// --- Probabilistic Sharpe Ratio --------------------------------------------

/// PSR(SR*) = Phi( (SR^ - SR*)·sqrt(n-1) / sqrt(1 - g3·SR^ + (g4-1)/4·SR^2) )
/// with SR^ = mean/std at observation frequency. nullopt when the stats are
/// degenerate or the discriminant is non-positive.
std::optional<double> psr(const MomentStats& stats, double sr_threshold);

/// minTRL = 1 + (1 - g3·SR^ + (g4-1)/4·SR^2) · (Z_alpha / (SR^ - SR*))^2.
/// nullopt unless SR^ > SR*.
std::optional<double> min_trl(const MomentStats& stats, double sr_threshold,
                              double confidence = 0.95);

// --- standard normal -------------------------------------------------------

double normal_cdf(double z);
/// Inverse of normal_cdf; throws std::domain_error for p outside (0,1).
double normal_quantile(double p);

// --- report ----------------------------------------------------------------

inline constexpr double kPsrThresholds[] = {0.0, 0.01, 0.1};

/// One strategy's row in the comparison tables.
struct MetricReport {
    std::string strategy;
    double total_return = 0;
    double cagr = 0;
    std::optional<double> sharpe;
    std::optional<double> sortino;
    double max_drawdown = 0;
    std::optional<double> psr_at[3];      // thresholds kPsrThresholds
    std::optional<double> min_trl_at[3];  // same thresholds
    double confidence_level = 0.95;
};

MetricReport compute_metric_report(const std::string& strategy,
                                   const std::vector<std::pair<Date, double>>& equity_curve,
                                   const RiskFreeSeries& risk_free);

}  // namespace alphax
