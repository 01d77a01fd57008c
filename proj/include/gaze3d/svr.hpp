#pragma once

#include <span>
#include <vector>

#include "gaze3d/matrix.hpp"

namespace gaze3d {

struct KernelSpec {
    enum class Type { Rbf, Linear };
    Type type = Type::Rbf;
    // RBF kernel exp(-|u - v|^2 / sigma^2); sigma <= 0 selects the scale
    // heuristic sigma^2 = n_features * Var(X) at fit time.
    double sigma = 0.0;
};

struct SvrConfig {
    double C = 1.0;
    double epsilon_tube = 0.1;
    KernelSpec kernel;
    int max_iter = 100000;
    double tol = 1e-3;
};

// Fitted epsilon-SVR. Prediction is the explicit kernel expansion
//   f(x) = sum_j omega_j * K(v_j, x) + b
// over the stored support vectors (standardized feature space).
struct SvrModel {
    SvrConfig config;                 // kernel.sigma resolved to its actual value
    Matrix support_vectors;           // standardized
    std::vector<double> weights;      // omega_j, |omega_j| <= C
    double bias = 0.0;
    std::vector<double> feat_mean;
    std::vector<double> feat_scale;
    bool converged = true;
    int iterations = 0;

    double predict(std::span<const double> x) const;
    double kernel(std::span<const double> u, std::span<const double> v) const;

    // primal objective of Eq-style epsilon-insensitive loss on a dataset:
    // 0.5*||omega||^2_K + C * sum max(0, |y - f(x)| - eps)
    double primal_objective(const Matrix& X, std::span<const double> y) const;
};

struct SvrFitReport {
    double dual_objective = 0.0;
    double kkt_gap = 0.0;  // final max violating pair gap
};

SvrModel svr_fit(const Matrix& X, std::span<const double> y, const SvrConfig& cfg = {},
                 SvrFitReport* report = nullptr);

std::vector<double> svr_predict_batch(const SvrModel& model, const Matrix& X);
std::vector<double> svr_predict_batch_serial(const SvrModel& model, const Matrix& X);

// Full kernel matrix of standardized rows; OpenMP over rows, with a serial
// reference used by the tests and the benchmark.
Matrix rbf_kernel_matrix(const Matrix& Z, double sigma);
Matrix rbf_kernel_matrix_serial(const Matrix& Z, double sigma);

}  // namespace gaze3d
