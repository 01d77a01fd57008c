#include "gaze3d/linear_models.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gaze3d/errors.hpp"

namespace gaze3d {

namespace {

void check_finite(const Matrix& X, std::span<const double> y, const char* who) {
    if (X.rows != y.size()) throw DimensionMismatch(std::string(who) + ": rows != targets");
    for (double v : X.data) {
        if (!std::isfinite(v)) throw NonFiniteInput(std::string(who) + ": non-finite feature");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw NonFiniteInput(std::string(who) + ": non-finite target");
    }
}

// center X and y; returns (Xc as Eigen, yc, x_mean, y_mean)
struct Centered {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    Eigen::VectorXd x_mean;
    double y_mean = 0.0;
};

Centered center(const Matrix& X, std::span<const double> y) {
    Centered c;
    c.X.resize(X.rows, X.cols);
    c.y.resize(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
        for (std::size_t j = 0; j < X.cols; ++j) c.X(i, j) = X(i, j);
        c.y(i) = y[i];
    }
    c.x_mean = c.X.colwise().mean();
    c.y_mean = c.y.mean();
    c.X.rowwise() -= c.x_mean.transpose();
    c.y.array() -= c.y_mean;
    return c;
}

double dot_coef(std::span<const double> coef, double intercept, std::span<const double> x) {
    if (x.size() != coef.size()) {
        throw DimensionMismatch("prediction input has wrong dimensionality");
    }
    double out = intercept;
    for (std::size_t j = 0; j < coef.size(); ++j) out += coef[j] * x[j];
    return out;
}

}  // namespace

double LinModel::predict(std::span<const double> x) const {
    return dot_coef(coef, intercept, x);
}

LinModel lr_fit(const Matrix& X, std::span<const double> y, const LinConfig& cfg) {
    check_finite(X, y, "lr_fit");
    if (X.rows < 2) throw TooFewSamples("lr_fit needs at least two samples");
    Centered c = center(X, y);

    Eigen::MatrixXd gram = c.X.transpose() * c.X;
    const Eigen::VectorXd rhs = c.X.transpose() * c.y;

    LinModel model;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram);
    qr.setThreshold(1e-10);
    const bool singular = qr.rank() < static_cast<Eigen::Index>(X.cols);
    Eigen::VectorXd w;
    if (!singular) w = qr.solve(rhs);
    if (singular || X.rows < X.cols) {
        if (!cfg.ridge_fallback) {
            throw SingularDesign("lr_fit: singular design matrix");
        }
        gram.diagonal().array() += cfg.fallback_lambda;
        w = gram.ldlt().solve(rhs);
        model.used_fallback = true;
    }
    model.coef.assign(w.data(), w.data() + w.size());
    model.intercept = c.y_mean - c.x_mean.dot(w);
    return model;
}

double BrModel::predict(std::span<const double> x) const {
    return dot_coef(coef, intercept, x);
}

BrModel br_fit(const Matrix& X, std::span<const double> y, const BrConfig& cfg) {
    check_finite(X, y, "br_fit");
    if (X.rows < 2) throw TooFewSamples("br_fit needs at least two samples");
    Centered c = center(X, y);
    const std::size_t n = X.rows;
    const std::size_t d = X.cols;

    const Eigen::MatrixXd gram = c.X.transpose() * c.X;
    const Eigen::VectorXd rhs = c.X.transpose() * c.y;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(0.0);

    double y_var = c.y.squaredNorm() / n;
    if (y_var <= 0.0) y_var = 1.0;
    double alpha = 1.0 / y_var;  // noise precision
    double lambda = 1.0;         // weight precision

    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    BrModel model;
    for (int it = 0; it < cfg.max_iter; ++it) {
        // posterior mean for current precisions
        Eigen::MatrixXd A = alpha * gram;
        A.diagonal().array() += lambda;
        w = A.ldlt().solve(alpha * rhs);

        const double sse = (c.y - c.X * w).squaredNorm();
        const double wtw = w.squaredNorm();
        double gamma = 0.0;
        for (Eigen::Index k = 0; k < ev.size(); ++k) {
            gamma += alpha * ev(k) / (lambda + alpha * ev(k));
        }
        const double new_lambda = (gamma + 2.0 * cfg.lambda_1) / (wtw + 2.0 * cfg.lambda_2);
        const double new_alpha = (n - gamma + 2.0 * cfg.alpha_1) / (sse + 2.0 * cfg.alpha_2);
        model.n_iter = it + 1;
        if (std::abs(new_lambda - lambda) < cfg.tol * lambda &&
            std::abs(new_alpha - alpha) < cfg.tol * alpha) {
            lambda = new_lambda;
            alpha = new_alpha;
            break;
        }
        lambda = new_lambda;
        alpha = new_alpha;
    }
    Eigen::MatrixXd A = alpha * gram;
    A.diagonal().array() += lambda;
    w = A.ldlt().solve(alpha * rhs);

    model.coef.assign(w.data(), w.data() + w.size());
    model.intercept = c.y_mean - c.x_mean.dot(w);
    model.alpha = alpha;
    model.lambda = lambda;
    return model;
}

double EnetModel::predict(std::span<const double> x) const {
    return dot_coef(coef, intercept, x);
}

EnetModel enet_fit(const Matrix& X, std::span<const double> y, const EnetConfig& cfg) {
    check_finite(X, y, "enet_fit");
    if (X.rows < 2) throw TooFewSamples("enet_fit needs at least two samples");
    const std::size_t n = X.rows;
    const std::size_t d = X.cols;

    // standardize columns; constant columns get scale 1 and stay at zero weight
    std::vector<double> mean(d, 0.0), scale(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += X(i, j);
        m /= n;
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += (X(i, j) - m) * (X(i, j) - m);
        v /= n;
        mean[j] = m;
        scale[j] = v > 1e-24 ? std::sqrt(v) : 1.0;
    }
    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= n;

    Matrix Z(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) Z(i, j) = (X(i, j) - mean[j]) / scale[j];
    }

    const double lam1 = cfg.alpha * cfg.l1_ratio;
    const double lam2 = cfg.alpha * (1.0 - cfg.l1_ratio);

    std::vector<double> w(d, 0.0);
    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - y_mean;

    std::vector<double> col_sq(d, 0.0);  // (1/n) z_j' z_j
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += Z(i, j) * Z(i, j);
        col_sq[j] = s / n;
    }

    auto objective = [&]() {
        double sse = 0.0;
        for (double r : resid) sse += r * r;
        double l1 = 0.0, l2 = 0.0;
        for (double v : w) {
            l1 += std::abs(v);
            l2 += v * v;
        }
        return sse / (2.0 * n) + lam1 * l1 + 0.5 * lam2 * l2;
    };

    EnetModel model;
    model.config = cfg;
    model.objective_per_sweep.push_back(objective());
    for (int sweep = 0; sweep < cfg.max_iter; ++sweep) {
        double max_delta = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (col_sq[j] <= 0.0) continue;
            double rho = 0.0;  // (1/n) z_j' (resid + z_j w_j)
            for (std::size_t i = 0; i < n; ++i) rho += Z(i, j) * resid[i];
            rho = rho / n + col_sq[j] * w[j];
            double w_new;
            if (rho > lam1) {
                w_new = (rho - lam1) / (col_sq[j] + lam2);
            } else if (rho < -lam1) {
                w_new = (rho + lam1) / (col_sq[j] + lam2);
            } else {
                w_new = 0.0;
            }
            const double delta = w_new - w[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) resid[i] -= delta * Z(i, j);
                w[j] = w_new;
            }
            max_delta = std::max(max_delta, std::abs(delta));
        }
        model.n_sweeps = sweep + 1;
        model.objective_per_sweep.push_back(objective());
        if (max_delta < cfg.tol) break;
    }

    model.coef.resize(d);
    double offset = y_mean;
    for (std::size_t j = 0; j < d; ++j) {
        model.coef[j] = w[j] / scale[j];
        offset -= model.coef[j] * mean[j];
    }
    model.intercept = offset;
    return model;
}

}  // namespace gaze3d
