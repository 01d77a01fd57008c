#include "gaze3d/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaze3d/errors.hpp"

namespace gaze3d {

namespace {

double sq_dist(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double d = u[k] - v[k];
        s += d * d;
    }
    return s;
}

double kernel_value(const KernelSpec& spec, std::span<const double> u,
                    std::span<const double> v) {
    if (spec.type == KernelSpec::Type::Linear) {
        double s = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
        return s;
    }
    return std::exp(-sq_dist(u, v) / (spec.sigma * spec.sigma));
}

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    void fit(const Matrix& X) {
        mean.assign(X.cols, 0.0);
        scale.assign(X.cols, 1.0);
        for (std::size_t j = 0; j < X.cols; ++j) {
            double m = 0.0;
            for (std::size_t i = 0; i < X.rows; ++i) m += X(i, j);
            m /= X.rows;
            double v = 0.0;
            for (std::size_t i = 0; i < X.rows; ++i) v += (X(i, j) - m) * (X(i, j) - m);
            v /= X.rows;
            mean[j] = m;
            scale[j] = v > 1e-24 ? std::sqrt(v) : 1.0;
        }
    }

    Matrix transform(const Matrix& X) const {
        Matrix Z(X.rows, X.cols);
        for (std::size_t i = 0; i < X.rows; ++i) {
            for (std::size_t j = 0; j < X.cols; ++j) {
                Z(i, j) = (X(i, j) - mean[j]) / scale[j];
            }
        }
        return Z;
    }
};

}  // namespace

Matrix rbf_kernel_matrix_serial(const Matrix& Z, double sigma) {
    const int n = static_cast<int>(Z.rows);
    Matrix K(n, n);
    const double inv = 1.0 / (sigma * sigma);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = std::exp(-sq_dist(Z.row(i), Z.row(j)) * inv);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

Matrix rbf_kernel_matrix(const Matrix& Z, double sigma) {
    const int n = static_cast<int>(Z.rows);
    Matrix K(n, n);
    const double inv = 1.0 / (sigma * sigma);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = std::exp(-sq_dist(Z.row(i), Z.row(j)) * inv);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

namespace {

// On-demand kernel rows with a full-matrix fast path for the problem sizes
// this project actually trains.
class KernelCache {
public:
    KernelCache(const Matrix& Z, const KernelSpec& spec) : Z_(Z), spec_(spec) {
        const std::size_t n = Z.rows;
        if (n <= 5120) {  // full matrix up to ~200 MB, rows on demand beyond
            full_ = true;
            if (spec.type == KernelSpec::Type::Rbf) {
                K_ = rbf_kernel_matrix(Z, spec.sigma);
            } else {
                K_ = Matrix(n, n);
#pragma omp parallel for schedule(static)
                for (int i = 0; i < static_cast<int>(n); ++i) {
                    for (std::size_t j = 0; j <= static_cast<std::size_t>(i); ++j) {
                        const double v = kernel_value(spec_, Z.row(i), Z.row(j));
                        K_(i, j) = v;
                        K_(j, i) = v;
                    }
                }
            }
        } else {
            rows_.resize(n);
        }
    }

    std::span<const double> row(std::size_t i) {
        if (full_) return K_.row(i);
        if (rows_[i].empty()) {
            rows_[i].resize(Z_.rows);
            for (std::size_t j = 0; j < Z_.rows; ++j) {
                rows_[i][j] = kernel_value(spec_, Z_.row(i), Z_.row(j));
            }
        }
        return rows_[i];
    }

    double at(std::size_t i, std::size_t j) { return row(i)[j]; }

private:
    const Matrix& Z_;
    KernelSpec spec_;
    bool full_ = false;
    Matrix K_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace

double SvrModel::kernel(std::span<const double> u, std::span<const double> v) const {
    return kernel_value(config.kernel, u, v);
}

double SvrModel::predict(std::span<const double> x) const {
    if (x.size() != feat_mean.size()) {
        throw DimensionMismatch("svr predict: input has wrong dimensionality");
    }
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - feat_mean[j]) / feat_scale[j];
    double out = bias;
    for (std::size_t s = 0; s < support_vectors.rows; ++s) {
        out += weights[s] * kernel_value(config.kernel, support_vectors.row(s), z);
    }
    return out;
}

double SvrModel::primal_objective(const Matrix& X, std::span<const double> y) const {
    // 0.5*||omega||^2 in the RKHS = 0.5 * w' K w over the support vectors
    double reg = 0.0;
    for (std::size_t a = 0; a < support_vectors.rows; ++a) {
        for (std::size_t b = 0; b < support_vectors.rows; ++b) {
            reg += weights[a] * weights[b] *
                   kernel_value(config.kernel, support_vectors.row(a), support_vectors.row(b));
        }
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < X.rows; ++i) {
        const double r = std::abs(y[i] - predict(X.row(i))) - config.epsilon_tube;
        if (r > 0.0) loss += r;
    }
    return 0.5 * reg + config.C * loss;
}

SvrModel svr_fit(const Matrix& X, std::span<const double> y, const SvrConfig& cfg,
                 SvrFitReport* report) {
    const std::size_t n = X.rows;
    if (n < 2 || y.size() != n) throw TooFewSamples("svr_fit needs at least two samples");
    for (double v : X.data) {
        if (!std::isfinite(v)) throw NonFiniteInput("svr_fit: non-finite feature");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw NonFiniteInput("svr_fit: non-finite target");
    }

    SvrModel model;
    model.config = cfg;

    Standardizer std_;
    std_.fit(X);
    const Matrix Z = std_.transform(X);
    model.feat_mean = std_.mean;
    model.feat_scale = std_.scale;

    if (cfg.kernel.type == KernelSpec::Type::Rbf && cfg.kernel.sigma <= 0.0) {
        // scale heuristic: sigma^2 = n_features * Var(all standardized entries)
        double m = 0.0;
        for (double v : Z.data) m += v;
        m /= Z.data.size();
        double var = 0.0;
        for (double v : Z.data) var += (v - m) * (v - m);
        var /= Z.data.size();
        if (var < 1e-12) var = 1.0;
        model.config.kernel.sigma = std::sqrt(static_cast<double>(Z.cols) * var);
    }

    KernelCache cache(Z, model.config.kernel);

    // SMO on the 2n-variable dual: t < n carries sign +1 (alpha_i),
    // t >= n carries sign -1 (alpha*_i); beta_i = alpha_i - alpha*_i.
    const double C = cfg.C;
    const double eps = cfg.epsilon_tube;
    std::vector<double> lambda(2 * n, 0.0);
    std::vector<double> grad(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        grad[i] = eps - y[i];
        grad[n + i] = eps + y[i];
    }
    auto sign_of = [n](std::size_t t) { return t < n ? 1.0 : -1.0; };

    int iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (; iter < cfg.max_iter; ++iter) {
        // maximal violating pair
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        std::ptrdiff_t i_up = -1, i_low = -1;
        for (std::size_t t = 0; t < 2 * n; ++t) {
            const double z = sign_of(t);
            const double v = -z * grad[t];
            const bool in_up = z > 0 ? lambda[t] < C : lambda[t] > 0;
            const bool in_low = z > 0 ? lambda[t] > 0 : lambda[t] < C;
            if (in_up && v > m_up) {
                m_up = v;
                i_up = static_cast<std::ptrdiff_t>(t);
            }
            if (in_low && v < m_low) {
                m_low = v;
                i_low = static_cast<std::ptrdiff_t>(t);
            }
        }
        gap = m_up - m_low;
        if (i_up < 0 || i_low < 0 || gap <= cfg.tol) break;

        const std::size_t ti = static_cast<std::size_t>(i_up);
        const std::size_t tj = static_cast<std::size_t>(i_low);
        const std::size_t si = ti % n;
        const std::size_t sj = tj % n;
        const double zi = sign_of(ti);
        const double zj = sign_of(tj);

        const double kii = cache.at(si, si);
        const double kjj = cache.at(sj, sj);
        const double kij = cache.at(si, sj);
        double curv = kii + kjj - 2.0 * kij;
        if (curv < 1e-12) curv = 1e-12;

        double step = gap / curv;
        // box clipping along the direction z_i*e_i - z_j*e_j
        step = std::min(step, zi > 0 ? C - lambda[ti] : lambda[ti]);
        step = std::min(step, zj > 0 ? lambda[tj] : C - lambda[tj]);
        if (step <= 0.0) break;  // numerically stuck at a box corner

        lambda[ti] += zi * step;
        lambda[tj] -= zj * step;
        const auto row_i = cache.row(si);
        const auto row_j = cache.row(sj);
        for (std::size_t t = 0; t < 2 * n; ++t) {
            grad[t] += sign_of(t) * step * (row_i[t % n] - row_j[t % n]);
        }
    }
    model.converged = gap <= cfg.tol;
    model.iterations = iter;

    // bias from the free variables, midpoint of the violation bounds otherwise
    double b_sum = 0.0;
    int b_count = 0;
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < 2 * n; ++t) {
        const double z = sign_of(t);
        const double v = -z * grad[t];
        if (lambda[t] > 1e-12 && lambda[t] < C - 1e-12) {
            b_sum += v;
            ++b_count;
        }
        const bool in_up = z > 0 ? lambda[t] < C : lambda[t] > 0;
        const bool in_low = z > 0 ? lambda[t] > 0 : lambda[t] < C;
        if (in_up) m_up = std::max(m_up, v);
        if (in_low) m_low = std::min(m_low, v);
    }
    model.bias = b_count > 0 ? b_sum / b_count : 0.5 * (m_up + m_low);
    if (!std::isfinite(model.bias)) model.bias = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const double beta = lambda[i] - lambda[n + i];
        if (beta != 0.0) {
            model.support_vectors.cols = Z.cols;
            model.support_vectors.push_row(Z.row(i));
            model.weights.push_back(beta);
        }
    }
    if (model.support_vectors.rows == 0) model.support_vectors.cols = Z.cols;

    if (report) {
        double dual = 0.0;
        for (std::size_t t = 0; t < 2 * n; ++t) {
            const double p_t = t < n ? eps - y[t] : eps + y[t - n];
            dual += lambda[t] * (grad[t] + p_t);
        }
        report->dual_objective = 0.5 * dual;
        report->kkt_gap = gap;
    }
    return model;
}

std::vector<double> svr_predict_batch_serial(const SvrModel& model, const Matrix& X) {
    std::vector<double> out(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) out[i] = model.predict(X.row(i));
    return out;
}

std::vector<double> svr_predict_batch(const SvrModel& model, const Matrix& X) {
    std::vector<double> out(X.rows);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < static_cast<int>(X.rows); ++i) {
        out[i] = model.predict(X.row(i));
    }
    return out;
}

}  // namespace gaze3d
