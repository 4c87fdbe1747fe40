#include "alphax/valuation.hpp"

#include <algorithm>
#include <cmath>

#include "alphax/rng.hpp"

namespace alphax {
namespace {

double median_of(std::vector<double>& v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

using RawGetter = std::optional<double> (*)(const RawFundamentals&);

constexpr std::array<RawGetter, 5> kRatioFeatures = {
    [](const RawFundamentals& r) { return r.earnings_yield; },
    [](const RawFundamentals& r) { return r.book_yield; },
    [](const RawFundamentals& r) { return r.sales_yield; },
    [](const RawFundamentals& r) { return r.revenue_growth_yoy; },
    [](const RawFundamentals& r) { return r.net_income_growth_yoy; },
};

}  // namespace

std::map<AssetId, FeatureVector> panel_features(const IndicatorPanel& panel) {
    // Cross-sectional medians for imputation of the optional ratios.
    std::array<double, kRatioFeatures.size()> medians{};
    for (std::size_t j = 0; j < kRatioFeatures.size(); ++j) {
        std::vector<double> defined;
        for (const auto& [id, row] : panel.rows)
            if (auto v = kRatioFeatures[j](row.raw)) defined.push_back(*v);
        medians[j] = median_of(defined);
    }

    std::map<AssetId, FeatureVector> out;
    for (const auto& [id, row] : panel.rows) {
        FeatureVector x{};
        x[0] = row.composites.profitability;
        x[1] = row.composites.solvency;
        x[2] = row.composites.valuation;
        x[3] = row.composites.growth;
        for (std::size_t j = 0; j < kRatioFeatures.size(); ++j) {
            auto v = kRatioFeatures[j](row.raw);
            x[4 + j] = v ? *v : medians[j];
        }
        x[9] = row.price;
        out.emplace(id, x);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Regression tree
// ---------------------------------------------------------------------------

namespace {

struct SplitResult {
    bool found = false;
    int feature = -1;
    double threshold = 0;
    double sse = 0;
};

/// Best split over the given feature subset; minimizes SSE_left + SSE_right
/// with both children >= min_leaf. Ties break on lower feature index, then
/// lower threshold, so the tree is unique.
SplitResult best_split(const TrainingPanel& panel, std::vector<int>& rows,
                       const std::vector<int>& features, int min_leaf) {
    SplitResult best;
    const int n = static_cast<int>(rows.size());
    if (n < 2 * min_leaf) return best;

    for (int f : features) {
        std::sort(rows.begin(), rows.end(), [&](int a, int b) {
            double va = panel.rows[a].features[f];
            double vb = panel.rows[b].features[f];
            if (va != vb) return va < vb;
            return a < b;
        });
        // prefix sums of target and target^2
        double sum = 0, sum2 = 0;
        for (int r : rows) {
            double y = panel.rows[r].target;
            sum += y;
            sum2 += y * y;
        }
        double left_sum = 0, left_sum2 = 0;
        for (int i = 0; i < n - 1; ++i) {
            double y = panel.rows[rows[i]].target;
            left_sum += y;
            left_sum2 += y * y;
            double vi = panel.rows[rows[i]].features[f];
            double vnext = panel.rows[rows[i + 1]].features[f];
            if (vi == vnext) continue;  // can only cut between distinct values
            int nl = i + 1, nr = n - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            double right_sum = sum - left_sum;
            double right_sum2 = sum2 - left_sum2;
            double sse = (left_sum2 - left_sum * left_sum / nl) +
                         (right_sum2 - right_sum * right_sum / nr);
            double threshold = (vi + vnext) / 2.0;
            bool better = !best.found || sse < best.sse ||
                          (sse == best.sse &&
                           (f < best.feature || (f == best.feature && threshold < best.threshold)));
            if (better) {
                best = {true, f, threshold, sse};
            }
        }
    }
    return best;
}

}  // namespace

template <typename RngT>
RegressionTree RegressionTree::fit(const TrainingPanel& panel, const std::vector<int>& row_indices,
                                   const ForestConfig& cfg, RngT& rng) {
    RegressionTree tree;
    const int d = kNumFeatures;
    int m = cfg.feature_subsample > 0
                ? std::min(cfg.feature_subsample, d)
                : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));

    // Recursive builder; nodes appended in depth-first, left-first order.
    auto build = [&](auto&& self, std::vector<int> rows, int depth) -> int {
        double mean = 0;
        for (int r : rows) mean += panel.rows[r].target;
        mean /= static_cast<double>(rows.size());

        int node_idx = static_cast<int>(tree.nodes_.size());
        tree.nodes_.push_back(Node{-1, 0, mean, -1, -1});

        if (depth >= cfg.max_depth || static_cast<int>(rows.size()) < 2 * cfg.min_leaf)
            return node_idx;

        // random subset of m features, partial Fisher-Yates
        std::vector<int> all(d);
        for (int i = 0; i < d; ++i) all[i] = i;
        for (int i = 0; i < m; ++i) {
            int j = i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(d - i)));
            std::swap(all[i], all[j]);
        }
        std::vector<int> subset(all.begin(), all.begin() + m);
        std::sort(subset.begin(), subset.end());

        SplitResult split = best_split(panel, rows, subset, cfg.min_leaf);
        if (!split.found) return node_idx;

        std::vector<int> left, right;
        for (int r : rows) {
            if (panel.rows[r].features[split.feature] <= split.threshold)
                left.push_back(r);
            else
                right.push_back(r);
        }
        tree.nodes_[node_idx].feature = split.feature;
        tree.nodes_[node_idx].threshold = split.threshold;
        int l = self(self, std::move(left), depth + 1);
        int r = self(self, std::move(right), depth + 1);
        tree.nodes_[node_idx].left = l;
        tree.nodes_[node_idx].right = r;
        return node_idx;
    };
    build(build, row_indices, 0);
    return tree;
}

double RegressionTree::predict(const FeatureVector& x) const {
    int idx = 0;
    while (nodes_[idx].feature >= 0) {
        idx = x[nodes_[idx].feature] <= nodes_[idx].threshold ? nodes_[idx].left
                                                              : nodes_[idx].right;
    }
    return nodes_[idx].value;
}

std::optional<ForestModel> ForestModel::fit(const TrainingPanel& panel, const ForestConfig& cfg) {
    if (panel.rows.empty()) return std::nullopt;
    ForestModel model;
    const int n = static_cast<int>(panel.rows.size());
    for (int t = 0; t < cfg.n_trees; ++t) {
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        std::vector<int> sample(n);
        for (int i = 0; i < n; ++i)
            sample[i] = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        std::sort(sample.begin(), sample.end());
        model.trees_.push_back(RegressionTree::fit(panel, sample, cfg, rng));
    }
    return model;
}

double ForestModel::predict(const FeatureVector& x) const {
    double sum = 0;
    for (const auto& tree : trees_) sum += tree.predict(x);
    return sum / static_cast<double>(trees_.size());
}

// ---------------------------------------------------------------------------
// Reversion and ensemble
// ---------------------------------------------------------------------------

std::optional<double> predict_reversion(const std::vector<double>& historical_pe,
                                        double current_eps) {
    if (historical_pe.size() < 2 || current_eps <= 0) return std::nullopt;
    double mean = 0;
    for (double pe : historical_pe) mean += pe;
    mean /= static_cast<double>(historical_pe.size());
    return mean * current_eps;
}

std::optional<PriceProjection> combine_projection(const AssetId& asset, double current_price,
                                                  std::optional<double> forest_price,
                                                  std::optional<double> reversion_price,
                                                  double forest_weight, double reversion_weight) {
    double wsum = 0, psum = 0;
    if (forest_price) {
        wsum += forest_weight;
        psum += forest_weight * *forest_price;
    }
    if (reversion_price) {
        wsum += reversion_weight;
        psum += reversion_weight * *reversion_price;
    }
    if (wsum <= 0) return std::nullopt;

    PriceProjection proj;
    proj.asset = asset;
    proj.projected_price = psum / wsum;
    proj.expected_return = (proj.projected_price - current_price) / current_price;
    proj.forest_price = forest_price;
    proj.reversion_price = reversion_price;
    return proj;
}

// ---------------------------------------------------------------------------
// Panel history
// ---------------------------------------------------------------------------

void PanelHistory::push(Date t, const IndicatorPanel& panel) {
    Snapshot snap;
    snap.date = t;
    auto features = panel_features(panel);
    for (const auto& [id, row] : panel.rows) {
        Entry e;
        e.features = features.at(id);
        e.price = row.price;
        if (row.raw.earnings_yield) e.eps = *row.raw.earnings_yield * row.price;
        snap.entries.emplace(id, e);
    }
    snapshots_.push_back(std::move(snap));
}

TrainingPanel PanelHistory::training_panel(Date t) const {
    TrainingPanel panel;
    for (std::size_t k = 0; k + 1 < snapshots_.size(); ++k) {
        const Snapshot& a = snapshots_[k];
        const Snapshot& b = snapshots_[k + 1];
        if (!(b.date < t)) break;  // both dates must be strictly before t
        for (const auto& [id, entry] : a.entries) {
            auto it = b.entries.find(id);
            if (it == b.entries.end()) continue;
            if (entry.price <= 0) continue;
            panel.rows.push_back({entry.features, it->second.price / entry.price});
        }
    }
    return panel;
}

std::vector<double> PanelHistory::pe_history(const AssetId& asset, Date t, int window) const {
    // Window counts decision dates looked back, not observations collected.
    std::vector<double> out;
    int seen = 0;
    for (auto it = snapshots_.rbegin(); it != snapshots_.rend(); ++it) {
        if (!(it->date < t)) continue;
        if (seen++ >= window) break;
        auto e = it->entries.find(asset);
        if (e == it->entries.end()) continue;
        if (e->second.eps && *e->second.eps > 0 && e->second.price > 0)
            out.push_back(e->second.price / *e->second.eps);
    }
    std::reverse(out.begin(), out.end());  // oldest first
    return out;
}

std::map<AssetId, PriceProjection> project_all(const IndicatorPanel& panel,
                                               const PanelHistory& history,
                                               const ValuationConfig& cfg) {
    std::map<AssetId, PriceProjection> out;
    TrainingPanel training = history.training_panel(panel.as_of);
    std::optional<ForestModel> forest = ForestModel::fit(training, cfg.forest);
    auto features = panel_features(panel);

    for (const auto& [id, row] : panel.rows) {
        if (row.price <= 0) continue;
        std::optional<double> forest_price;
        if (forest) forest_price = forest->predict(features.at(id)) * row.price;

        std::optional<double> reversion_price;
        auto pe = history.pe_history(id, panel.as_of, cfg.reversion_window_quarters);
        std::optional<double> eps;
        if (row.raw.earnings_yield) eps = *row.raw.earnings_yield * row.price;
        if (eps) reversion_price = predict_reversion(pe, *eps);

        auto proj = combine_projection(id, row.price, forest_price, reversion_price,
                                       cfg.forest_weight, cfg.reversion_weight);
        if (proj) out.emplace(id, *proj);
    }
    return out;
}

template RegressionTree RegressionTree::fit<Rng>(const TrainingPanel&, const std::vector<int>&,
                                                 const ForestConfig&, Rng&);

}  // namespace alphax
