#include "gaze3d/calibration.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gaze3d/errors.hpp"
#include "json.hpp"

namespace gaze3d {

Vec2 PolyMap2::apply(const Vec2& r) const {
    const double basis[6] = {1.0, r.x, r.y, r.x * r.y, r.x * r.x, r.y * r.y};
    Vec2 out;
    for (int k = 0; k < 6; ++k) {
        out.x += a[k] * basis[k];
        out.y += b[k] * basis[k];
    }
    return out;
}

PolyMap2 fit_poly_calibration(const std::vector<CalibrationPair>& pairs) {
    const std::size_t n = pairs.size();
    if (n < 6) throw RankDeficient("polynomial calibration needs at least 6 pairs");
    Eigen::MatrixXd D(n, 6);
    Eigen::VectorXd tx(n), ty(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& r = pairs[i].raw;
        if (!std::isfinite(r.x) || !std::isfinite(r.y) ||
            !std::isfinite(pairs[i].truth.x) || !std::isfinite(pairs[i].truth.y)) {
            throw NonFiniteInput("calibration pair is not finite");
        }
        D(i, 0) = 1.0;
        D(i, 1) = r.x;
        D(i, 2) = r.y;
        D(i, 3) = r.x * r.y;
        D(i, 4) = r.x * r.x;
        D(i, 5) = r.y * r.y;
        tx(i) = pairs[i].truth.x;
        ty(i) = pairs[i].truth.y;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
    qr.setThreshold(1e-10);
    if (qr.rank() < 6) {
        throw RankDeficient("calibration points are degenerate (design rank < 6)");
    }
    const Eigen::VectorXd ca = qr.solve(tx);
    const Eigen::VectorXd cb = qr.solve(ty);

    PolyMap2 map;
    for (int k = 0; k < 6; ++k) {
        map.a[k] = ca(k);
        map.b[k] = cb(k);
    }
    double ss = 0.0;
    for (const auto& p : pairs) {
        const Vec2 e = map.apply(p.raw) - p.truth;
        ss += e.x * e.x + e.y * e.y;
    }
    map.fit_rms = std::sqrt(ss / n);
    return map;
}

std::string polymap_to_json(const PolyMap2& map) {
    nlohmann::json j;
    j["a"] = map.a;
    j["b"] = map.b;
    j["fit_rms"] = map.fit_rms;
    return j.dump();
}

PolyMap2 polymap_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PolyMap2 map;
    for (int k = 0; k < 6; ++k) {
        map.a[k] = j.at("a").at(k).get<double>();
        map.b[k] = j.at("b").at(k).get<double>();
    }
    map.fit_rms = j.value("fit_rms", 0.0);
    return map;
}

}  // namespace gaze3d
