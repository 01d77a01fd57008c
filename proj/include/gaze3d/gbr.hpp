#pragma once

#include <span>
#include <vector>

#include "gaze3d/matrix.hpp"
#include "gaze3d/trees.hpp"

namespace gaze3d {

struct GbrConfig {
    int n_trees = 100;
    int max_depth = 3;
    double learning_rate = 0.1;
    int min_samples_leaf = 2;
};

// Gradient boosting with squared loss: start at the target mean, every stage
// fits a depth-limited tree to the residuals.
struct GbrModel {
    GbrConfig config;
    double initial = 0.0;
    std::vector<RegressionTree> trees;

    double predict(std::span<const double> x) const;
    // prediction truncated to the first t trees
    double predict_staged(std::span<const double> x, int t) const;
};

GbrModel gbr_fit(const Matrix& X, std::span<const double> y, const GbrConfig& cfg = {});

}  // namespace gaze3d
