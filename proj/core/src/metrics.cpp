#include "alphax/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "alphax/errors.hpp"

namespace alphax {

ReturnSeries make_return_series(const std::vector<std::pair<Date, double>>& equity_curve,
                                const RiskFreeSeries& risk_free) {
    ReturnSeries out;
    for (std::size_t i = 1; i < equity_curve.size(); ++i) {
        double prev = equity_curve[i - 1].second;
        double cur = equity_curve[i].second;
        if (prev <= 0) throw ValidationError("non-positive equity in curve");
        double r = cur / prev - 1.0;
        out.returns.push_back(r);
        double annual = risk_free.rate_at(equity_curve[i].first).value_or(0.0);
        double rf_daily = std::pow(1.0 + annual, 1.0 / kTradingDaysPerYear) - 1.0;
        out.excess.push_back(r - rf_daily);
    }
    return out;
}

MomentStats compute_moments(const std::vector<double>& x) {
    MomentStats stats;
    stats.n = x.size();
    if (stats.n < 2) return stats;
    const double n = static_cast<double>(stats.n);

    double mean = 0;
    for (double v : x) mean += v;
    mean /= n;
    stats.mean = mean;

    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    stats.std_dev = std::sqrt(m2 * n / (n - 1.0));

    if (stats.n >= 3 && m2 > 0) {
        double g1 = m3 / std::pow(m2, 1.5);
        stats.skewness = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
    }
    if (stats.n >= 4 && m2 > 0) {
        double g2 = m4 / (m2 * m2) - 3.0;
        double G2 = ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
        stats.kurtosis = G2 + 3.0;
    }
    return stats;
}

double total_return(const std::vector<double>& equity) {
    if (equity.size() < 2) throw ValidationError("total_return needs >= 2 equity points");
    if (equity.front() <= 0) throw ValidationError("non-positive initial equity");
    return equity.back() / equity.front() - 1.0;
}

double cagr(const std::vector<double>& equity) {
    if (equity.size() < 2) throw ValidationError("cagr needs >= 2 equity points");
    if (equity.front() <= 0 || equity.back() <= 0)
        throw ValidationError("non-positive equity in cagr");
    double n_days = static_cast<double>(equity.size() - 1);
    return std::pow(equity.back() / equity.front(), kTradingDaysPerYear / n_days) - 1.0;
}

double max_drawdown(const std::vector<double>& equity) {
    double peak = -1.0;
    double worst = 0.0;
    for (double e : equity) {
        peak = std::max(peak, e);
        if (peak > 0) worst = std::min(worst, e / peak - 1.0);
    }
    return worst;
}

RiskAdjusted sharpe_sortino(const std::vector<double>& excess) {
    RiskAdjusted out;
    if (excess.size() < 2) return out;
    const double n = static_cast<double>(excess.size());

    double mean = 0;
    for (double v : excess) mean += v;
    mean /= n;

    double var = 0, downside = 0;
    for (double v : excess) {
        var += (v - mean) * (v - mean);
        double d = std::min(v, 0.0);
        downside += d * d;
    }
    var /= (n - 1.0);
    downside /= (n - 1.0);

    double ann = std::sqrt(kTradingDaysPerYear);
    if (var > 0) out.sharpe = mean / std::sqrt(var) * ann;
    if (downside > 0) out.sortino = mean / std::sqrt(downside) * ann;
    return out;
}

std::optional<double> psr(const MomentStats& stats, double sr_threshold) {
    if (stats.n < 2 || stats.std_dev <= 0) return std::nullopt;
    if (!stats.skewness || !stats.kurtosis) return std::nullopt;
    double sr = stats.mean / stats.std_dev;
    double disc = 1.0 - *stats.skewness * sr + (*stats.kurtosis - 1.0) / 4.0 * sr * sr;
    if (disc <= 0) return std::nullopt;
    double z = (sr - sr_threshold) * std::sqrt(static_cast<double>(stats.n) - 1.0) /
               std::sqrt(disc);
    return normal_cdf(z);
}

std::optional<double> min_trl(const MomentStats& stats, double sr_threshold, double confidence) {
    if (stats.n < 2 || stats.std_dev <= 0) return std::nullopt;
    if (!stats.skewness || !stats.kurtosis) return std::nullopt;
    double sr = stats.mean / stats.std_dev;
    if (!(sr > sr_threshold)) return std::nullopt;
    double disc = 1.0 - *stats.skewness * sr + (*stats.kurtosis - 1.0) / 4.0 * sr * sr;
    if (disc <= 0) return std::nullopt;
    double z = normal_quantile(confidence);
    double ratio = z / (sr - sr_threshold);
    return 1.0 + disc * ratio * ratio;
}

double normal_cdf(double z) {
    // Phi(z) = erfc(-z / sqrt(2)) / 2; erfc keeps full precision in the tails.
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");

    // Acklam's rational approximation as the initial guess...
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double q, x;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // ...polished with two Newton steps against the precise CDF.
    for (int i = 0; i < 2; ++i) {
        double err = normal_cdf(x) - p;
        double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
        if (pdf <= 0) break;
        x -= err / pdf;
    }
    return x;
}

MetricReport compute_metric_report(const std::string& strategy,
                                   const std::vector<std::pair<Date, double>>& equity_curve,
                                   const RiskFreeSeries& risk_free) {
    MetricReport report;
    report.strategy = strategy;

    std::vector<double> equity;
    equity.reserve(equity_curve.size());
    for (const auto& [date, e] : equity_curve) equity.push_back(e);

    report.total_return = total_return(equity);
    report.cagr = cagr(equity);
    report.max_drawdown = max_drawdown(equity);

    ReturnSeries series = make_return_series(equity_curve, risk_free);
    RiskAdjusted ra = sharpe_sortino(series.excess);
    report.sharpe = ra.sharpe;
    report.sortino = ra.sortino;

    MomentStats stats = compute_moments(series.excess);
    for (int i = 0; i < 3; ++i) {
        report.psr_at[i] = psr(stats, kPsrThresholds[i]);
        report.min_trl_at[i] = min_trl(stats, kPsrThresholds[i], report.confidence_level);
    }
    return report;
}

}  // namespace alphax
