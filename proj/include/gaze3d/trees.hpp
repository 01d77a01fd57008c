#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gaze3d/matrix.hpp"

namespace gaze3d {

class Rng;

struct TreeConfig {
    int max_depth = 3;
    int min_samples_leaf = 2;
    int max_features = 0;  // 0 = use all features at every split
};

// Binary regression tree grown by exact greedy variance reduction with
// midpoint thresholds.
class RegressionTree {
public:
    struct Node {
        int feature = -1;        // -1 for leaves
        double threshold = 0.0;
        double value = 0.0;      // leaf prediction (mean of samples)
        int left = -1;
        int right = -1;
    };

    // rng is only consulted when cfg.max_features limits the split search.
    // impurity_decrease, when given, accumulates per-feature total decrease
    // in node variance weighted by node size (units of sum-of-squares / n).
    void fit(const Matrix& X, std::span<const double> y,
             std::span<const std::size_t> sample_idx, const TreeConfig& cfg,
             Rng* rng = nullptr, std::vector<double>* impurity_decrease = nullptr);

    double predict(std::span<const double> x) const;

    const std::vector<Node>& nodes() const { return nodes_; }

    static RegressionTree from_nodes(std::vector<Node> nodes) {
        RegressionTree t;
        t.nodes_ = std::move(nodes);
        return t;
    }

private:
    int grow(const Matrix& X, std::span<const double> y,
             std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi,
             int depth, const TreeConfig& cfg, Rng* rng,
             std::vector<double>* impurity_decrease, std::size_t n_total);

    std::vector<Node> nodes_;
};

}  // namespace gaze3d
