#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "alphax/indicators.hpp"

namespace alphax {

/// Model inputs per (asset, decision date): the four real-valued indicator
/// composites, the valuation yields, the growth rates and the current price.
inline constexpr int kNumFeatures = 10;
using FeatureVector = std::array<double, kNumFeatures>;

/// Features for every panel row. Undefined ratios are imputed with the
/// cross-sectional median of the defined values of that feature (0 when no
/// asset defines it).
std::map<AssetId, FeatureVector> panel_features(const IndicatorPanel& panel);

struct TrainingRow {
    FeatureVector features;
    double target = 0;  // price at next decision date / price at this one
};

struct TrainingPanel {
    std::vector<TrainingRow> rows;
};

struct ForestConfig {
    int n_trees = 100;
    int max_depth = 5;
    int min_leaf = 5;
    int feature_subsample = 0;  // 0 -> ceil(sqrt(d))
    std::uint64_t seed = 0;
};

/// Axis-aligned regression tree; splits minimize the summed squared error of
/// the children, each leaf keeps >= min_leaf rows, prediction is the leaf
/// mean.
class RegressionTree {
public:
    template <typename Rng>
    static RegressionTree fit(const TrainingPanel& panel, const std::vector<int>& row_indices,
                              const ForestConfig& cfg, Rng& rng);

    double predict(const FeatureVector& x) const;

    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0;
        double value = 0;
        int left = -1;
        int right = -1;
    };
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    std::vector<Node> nodes_;
};

/// Bagged ensemble of regression trees. Fully deterministic: per-tree seeds
/// derive from the master seed, so results do not depend on build order.
class ForestModel {
public:
    /// Returns nullopt on an empty panel (caller falls back to reversion).
    static std::optional<ForestModel> fit(const TrainingPanel& panel, const ForestConfig& cfg);

    double predict(const FeatureVector& x) const;
    int n_trees() const { return static_cast<int>(trees_.size()); }

private:
    std::vector<RegressionTree> trees_;
};

/// Mean-reversion price target: mean historical P/E times current EPS.
/// Unavailable when fewer than two positive-P/E observations exist or the
/// current EPS is not positive.
std::optional<double> predict_reversion(const std::vector<double>& historical_pe,
                                        double current_eps);

struct PriceProjection {
    AssetId asset;
    double projected_price = 0;
    double expected_return = 0;  // (projected - current) / current
    std::optional<double> forest_price;
    std::optional<double> reversion_price;
};

struct ValuationConfig {
    ForestConfig forest;
    int reversion_window_quarters = 8;
    double forest_weight = 1.0;
    double reversion_weight = 1.0;
};

/// Combines the available components into one projection; nullopt when both
/// are unavailable (the asset cannot be ranked).
std::optional<PriceProjection> combine_projection(const AssetId& asset, double current_price,
                                                  std::optional<double> forest_price,
                                                  std::optional<double> reversion_price,
                                                  double forest_weight, double reversion_weight);

/// Rolling record of past decision-date panels. Everything the regressors
/// may see lives here, which is what keeps fitting free of look-ahead: only
/// snapshots strictly before the decision date enter the training panel.
class PanelHistory {
public:
    void push(Date t, const IndicatorPanel& panel);

    /// Rows built from consecutive snapshot pairs (t_k, t_{k+1}) with
    /// t_{k+1} strictly before `t`; target is the mid-price ratio.
    TrainingPanel training_panel(Date t) const;

    /// Most recent `window` P/E observations for `asset` strictly before
    /// `t` (only dates where TTM EPS was positive).
    std::vector<double> pe_history(const AssetId& asset, Date t, int window) const;

    std::size_t size() const { return snapshots_.size(); }

private:
    struct Entry {
        FeatureVector features;
        double price = 0;
        std::optional<double> eps;  // TTM EPS when defined
    };
    struct Snapshot {
        Date date;
        std::map<AssetId, Entry> entries;
    };
    std::vector<Snapshot> snapshots_;
};

/// Full projection step at one decision date: fit the forest on the history,
/// derive per-asset reversion targets, combine. Assets with no available
/// component are absent from the result.
std::map<AssetId, PriceProjection> project_all(const IndicatorPanel& panel,
                                               const PanelHistory& history,
                                               const ValuationConfig& cfg);

}  // namespace alphax
