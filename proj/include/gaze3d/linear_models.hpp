#pragma once

#include <span>
#include <vector>

#include "gaze3d/matrix.hpp"

namespace gaze3d {

struct LinConfig {
    bool ridge_fallback = true;     // engage tiny ridge when X'X is singular
    double fallback_lambda = 1e-10;
};

struct LinModel {
    std::vector<double> coef;
    double intercept = 0.0;
    bool used_fallback = false;

    double predict(std::span<const double> x) const;
};

// Ordinary least squares via normal equations; SingularDesign without fallback.
LinModel lr_fit(const Matrix& X, std::span<const double> y, const LinConfig& cfg = {});

struct BrConfig {
    int max_iter = 300;
    double tol = 1e-4;
    // gamma-prior hyperparameters on the two precisions, matched to the
    // conventional near-flat defaults
    double alpha_1 = 1e-6, alpha_2 = 1e-6;
    double lambda_1 = 1e-6, lambda_2 = 1e-6;
};

struct BrModel {
    std::vector<double> coef;
    double intercept = 0.0;
    double alpha = 0.0;   // noise precision
    double lambda = 0.0;  // weight precision
    int n_iter = 0;

    double predict(std::span<const double> x) const;
};

// Bayesian ridge: evidence-maximizing updates of the noise and weight
// precisions around the posterior-mean weights.
BrModel br_fit(const Matrix& X, std::span<const double> y, const BrConfig& cfg = {});

struct EnetConfig {
    double alpha = 1.0;
    double l1_ratio = 0.5;
    int max_iter = 1000;
    double tol = 1e-6;
};

struct EnetModel {
    EnetConfig config;
    std::vector<double> coef;       // original feature units
    double intercept = 0.0;
    int n_sweeps = 0;
    std::vector<double> objective_per_sweep;

    double predict(std::span<const double> x) const;
};

// Elastic net by cyclic coordinate descent. Features are standardized
// internally (glmnet-style) so the default alpha is scale-free; reported
// coefficients are in original units. Objective on standardized data:
//   1/(2n) ||y - Xw||^2 + alpha*l1_ratio*||w||_1 + alpha*(1-l1_ratio)/2*||w||^2
EnetModel enet_fit(const Matrix& X, std::span<const double> y, const EnetConfig& cfg = {});

}  // namespace gaze3d
