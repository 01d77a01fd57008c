#include "gaze3d/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gaze3d/rng.hpp"

namespace gaze3d {

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;       // reduction of sum of squared errors
    std::size_t n_left = 0;
};

// best midpoint threshold for one feature over idx[lo, hi)
SplitChoice best_split_for_feature(const Matrix& X, std::span<const double> y,
                                   std::span<const std::size_t> idx, int feature,
                                   int min_leaf) {
    const std::size_t n = idx.size();
    std::vector<std::pair<double, double>> fv(n);  // (feature value, target)
    for (std::size_t k = 0; k < n; ++k) {
        fv[k] = {X(idx[k], feature), y[idx[k]]};
    }
    std::sort(fv.begin(), fv.end());

    double total = 0.0;
    for (const auto& p : fv) total += p.second;

    SplitChoice best;
    best.feature = feature;
    double left_sum = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        left_sum += fv[k].second;
        const std::size_t nl = k + 1;
        const std::size_t nr = n - nl;
        if (fv[k].first == fv[k + 1].first) continue;  // no boundary here
        if (nl < static_cast<std::size_t>(min_leaf) ||
            nr < static_cast<std::size_t>(min_leaf)) {
            continue;
        }
        const double right_sum = total - left_sum;
        // SSE reduction = sum_l^2/n_l + sum_r^2/n_r - total^2/n
        const double gain = left_sum * left_sum / nl + right_sum * right_sum / nr -
                            total * total / n;
        if (gain > best.gain) {
            best.gain = gain;
            best.threshold = 0.5 * (fv[k].first + fv[k + 1].first);
            best.n_left = nl;
        }
    }
    return best;
}

}  // namespace

void RegressionTree::fit(const Matrix& X, std::span<const double> y,
                         std::span<const std::size_t> sample_idx, const TreeConfig& cfg,
                         Rng* rng, std::vector<double>* impurity_decrease) {
    nodes_.clear();
    std::vector<std::size_t> idx;
    if (sample_idx.empty()) {
        idx.resize(X.rows);
        std::iota(idx.begin(), idx.end(), 0);
    } else {
        idx.assign(sample_idx.begin(), sample_idx.end());
    }
    if (impurity_decrease) impurity_decrease->assign(X.cols, 0.0);
    grow(X, y, idx, 0, idx.size(), 0, cfg, rng, impurity_decrease, idx.size());
}

int RegressionTree::grow(const Matrix& X, std::span<const double> y,
                         std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi,
                         int depth, const TreeConfig& cfg, Rng* rng,
                         std::vector<double>* impurity_decrease, std::size_t n_total) {
    const std::size_t n = hi - lo;
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    double sum = 0.0;
    for (std::size_t k = lo; k < hi; ++k) sum += y[idx[k]];
    nodes_[node_id].value = sum / n;

    if (depth >= cfg.max_depth || n < 2 * static_cast<std::size_t>(cfg.min_samples_leaf)) {
        return node_id;
    }

    // candidate feature set, subsampled per node when max_features is set
    std::vector<int> features(X.cols);
    std::iota(features.begin(), features.end(), 0);
    if (cfg.max_features > 0 && cfg.max_features < static_cast<int>(X.cols) && rng) {
        for (std::size_t k = 0; k < features.size(); ++k) {
            std::swap(features[k], features[k + rng->below(features.size() - k)]);
        }
        features.resize(cfg.max_features);
    }

    SplitChoice best;
    const std::span<const std::size_t> node_idx(idx.data() + lo, n);
    for (int f : features) {
        const SplitChoice c = best_split_for_feature(X, y, node_idx, f, cfg.min_samples_leaf);
        if (c.gain > best.gain) best = c;
    }
    if (best.feature < 0 || best.gain <= 1e-12) {
        return node_id;
    }

    if (impurity_decrease) {
        (*impurity_decrease)[best.feature] += best.gain / static_cast<double>(n_total);
    }

    auto mid_it = std::partition(idx.begin() + lo, idx.begin() + hi, [&](std::size_t i) {
        return X(i, best.feature) <= best.threshold;
    });
    const std::size_t mid = static_cast<std::size_t>(mid_it - idx.begin());

    nodes_[node_id].feature = best.feature;
    nodes_[node_id].threshold = best.threshold;
    const int left = grow(X, y, idx, lo, mid, depth + 1, cfg, rng, impurity_decrease, n_total);
    const int right = grow(X, y, idx, mid, hi, depth + 1, cfg, rng, impurity_decrease, n_total);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

double RegressionTree::predict(std::span<const double> x) const {
    int cur = 0;
    while (nodes_[cur].feature >= 0) {
        cur = x[nodes_[cur].feature] <= nodes_[cur].threshold ? nodes_[cur].left
                                                              : nodes_[cur].right;
    }
    return nodes_[cur].value;
}

}  // namespace gaze3d
