#include "gaze3d/cross_validation.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "gaze3d/csv.hpp"
#include "gaze3d/errors.hpp"
#include "gaze3d/rng.hpp"

namespace gaze3d {

std::vector<int> make_folds(std::size_t n, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigInvalid("cross validation needs k >= 2");
    if (n < static_cast<std::size_t>(k)) {
        throw TooFewSamples("fewer samples than folds");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed({seed, 0xf01d5ULL}));
    for (std::size_t i = 0; i < n; ++i) {
        std::swap(order[i], order[i + rng.below(n - i)]);
    }
    std::vector<int> fold(n);
    for (std::size_t r = 0; r < n; ++r) {
        fold[order[r]] = static_cast<int>(r % k);
    }
    return fold;
}

FoldMetrics score_predictions(std::span<const double> truth, std::span<const double> pred) {
    FoldMetrics m;
    const std::size_t n = truth.size();
    double mean_y = 0.0;
    for (double v : truth) mean_y += v;
    mean_y /= n;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = truth[i] - pred[i];
        m.mae += std::abs(e);
        ss_res += e * e;
        ss_tot += (truth[i] - mean_y) * (truth[i] - mean_y);
    }
    m.mae /= n;
    m.mse = ss_res / n;
    m.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return m;
}

CvReport cross_validate(const ModelFactory& factory, const Matrix& X,
                        std::span<const double> y, int k, std::uint64_t seed,
                        const std::string& model_name) {
    const std::vector<int> fold = make_folds(X.rows, k, seed);
    CvReport report;
    report.model_name = model_name;
    report.seed = seed;
    report.k = k;
    for (int f = 0; f < k; ++f) {
        Matrix Xtr(0, X.cols), Xva(0, X.cols);
        std::vector<double> ytr, yva;
        for (std::size_t i = 0; i < X.rows; ++i) {
            if (fold[i] == f) {
                Xva.push_row(X.row(i));
                yva.push_back(y[i]);
            } else {
                Xtr.push_row(X.row(i));
                ytr.push_back(y[i]);
            }
        }
        const AnyModel model = factory(Xtr, ytr);
        std::vector<double> pred(Xva.rows);
        for (std::size_t i = 0; i < Xva.rows; ++i) pred[i] = model.predict(Xva.row(i));
        report.folds.push_back(score_predictions(yva, pred));
    }
    for (const auto& fm : report.folds) {
        report.mean.mae += fm.mae / k;
        report.mean.mse += fm.mse / k;
        report.mean.r2 += fm.r2 / k;
    }
    return report;
}

std::string CvReport::to_csv() const {
    std::ostringstream out;
    out << "model,fold,mae,mse,r2\n";
    for (std::size_t f = 0; f < folds.size(); ++f) {
        out << model_name << ',' << f << ',' << format_double(folds[f].mae) << ','
            << format_double(folds[f].mse) << ',' << format_double(folds[f].r2) << '\n';
    }
    out << model_name << ",mean," << format_double(mean.mae) << ','
        << format_double(mean.mse) << ',' << format_double(mean.r2) << '\n';
    return out.str();
}

}  // namespace gaze3d
