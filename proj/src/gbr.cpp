#include "gaze3d/gbr.hpp"

#include <cmath>

#include "gaze3d/errors.hpp"

namespace gaze3d {

double GbrModel::predict(std::span<const double> x) const {
    return predict_staged(x, static_cast<int>(trees.size()));
}

double GbrModel::predict_staged(std::span<const double> x, int t) const {
    double out = initial;
    for (int i = 0; i < t && i < static_cast<int>(trees.size()); ++i) {
        out += config.learning_rate * trees[i].predict(x);
    }
    return out;
}

GbrModel gbr_fit(const Matrix& X, std::span<const double> y, const GbrConfig& cfg) {
    if (X.rows < 2 || X.rows != y.size()) {
        throw TooFewSamples("gbr_fit needs at least two samples");
    }
    for (double v : X.data) {
        if (!std::isfinite(v)) throw NonFiniteInput("gbr_fit: non-finite feature");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw NonFiniteInput("gbr_fit: non-finite target");
    }

    GbrModel model;
    model.config = cfg;
    double sum = 0.0;
    for (double v : y) sum += v;
    model.initial = sum / y.size();

    std::vector<double> residual(y.begin(), y.end());
    for (auto& r : residual) r -= model.initial;

    TreeConfig tc{cfg.max_depth, cfg.min_samples_leaf, 0};
    model.trees.reserve(cfg.n_trees);
    for (int t = 0; t < cfg.n_trees; ++t) {
        RegressionTree tree;
        tree.fit(X, residual, {}, tc);
        for (std::size_t i = 0; i < X.rows; ++i) {
            residual[i] -= cfg.learning_rate * tree.predict(X.row(i));
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

}  // namespace gaze3d
