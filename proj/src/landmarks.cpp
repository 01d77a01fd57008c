#include "gaze3d/landmarks.hpp"

#include <cmath>
#include <sstream>

#include "gaze3d/csv.hpp"
#include "gaze3d/errors.hpp"

namespace gaze3d {

std::array<double, FeatureVector13::kFlatLength> FeatureVector13::flatten() const {
    std::array<double, kFlatLength> out{};
    int k = 0;
    for (const auto& v : v_eyelid) {
        out[k++] = v.x;
        out[k++] = v.y;
    }
    out[k++] = v_om.x;
    out[k++] = v_om.y;
    out[k++] = v_on.x;
    out[k++] = v_on.y;
    out[k++] = theta1;
    out[k++] = theta2;
    out[k++] = theta3;
    return out;
}

const std::vector<std::string>& FeatureVector13::names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        const char* lid = "abcdefgh";
        for (int i = 0; i < 8; ++i) {
            n.push_back(std::string("vo") + lid[i] + "_x");
            n.push_back(std::string("vo") + lid[i] + "_y");
        }
        n.insert(n.end(), {"vom_x", "vom_y", "von_x", "von_y",
                           "theta1_deg", "theta2_deg", "theta3_deg"});
        return n;
    }();
    return names;
}

namespace {

double angle_between(const Vec2& u, const Vec2& v, const char* what) {
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu < 1e-12 || nv < 1e-12) {
        throw DegenerateLandmarks(std::string("zero-length ray while computing ") + what);
    }
    double c = u.dot(v) / (nu * nv);
    c = c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
    return deg_from_rad(std::acos(c));
}

}  // namespace

FeatureVector13 extract_features(const LandmarkSet& lm) {
    FeatureVector13 f;
    for (int i = 0; i < 8; ++i) {
        f.v_eyelid[i] = lm.eyelid[i] - lm.o;
        if (f.v_eyelid[i].norm() < 1e-12) {
            throw DegenerateLandmarks("eyelid landmark coincides with the pupil center");
        }
    }
    f.v_om = lm.m - lm.o;
    f.v_on = lm.n - lm.o;
    if (f.v_om.norm() < 1e-12 || f.v_on.norm() < 1e-12) {
        throw DegenerateLandmarks("reflection landmark coincides with the pupil center");
    }
    const Vec2& a = lm.eyelid[0];
    const Vec2& e = lm.eyelid[4];
    f.theta1 = angle_between(lm.eyelid[1] - a, lm.eyelid[7] - a, "theta1");
    f.theta2 = angle_between(lm.eyelid[3] - e, lm.eyelid[5] - e, "theta2");
    f.theta3 = angle_between(f.v_om, f.v_on, "theta3");
    return f;
}

std::string feature_matrix_csv(const std::vector<LandmarkSet>& landmarks) {
    std::ostringstream out;
    const auto& names = FeatureVector13::names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out << ',';
        out << names[i];
    }
    out << '\n';
    for (const auto& lm : landmarks) {
        const auto flat = extract_features(lm).flatten();
        for (std::size_t i = 0; i < flat.size(); ++i) {
            if (i) out << ',';
            out << format_double(flat[i]);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace gaze3d
