#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gaze3d/matrix.hpp"
#include "gaze3d/regressor.hpp"

namespace gaze3d {

struct FoldMetrics {
    double mae = 0.0;
    double mse = 0.0;
    double r2 = 0.0;
};

struct CvReport {
    std::string model_name;
    std::uint64_t seed = 0;
    int k = 0;
    std::vector<FoldMetrics> folds;
    FoldMetrics mean;

    std::string to_csv() const;
};

// shuffled fold assignment, deterministic in the seed; fold of sample i
std::vector<int> make_folds(std::size_t n, int k, std::uint64_t seed);

FoldMetrics score_predictions(std::span<const double> truth, std::span<const double> pred);

using ModelFactory = std::function<AnyModel(const Matrix&, std::span<const double>)>;

CvReport cross_validate(const ModelFactory& factory, const Matrix& X,
                        std::span<const double> y, int k, std::uint64_t seed,
                        const std::string& model_name = "");

}  // namespace gaze3d
