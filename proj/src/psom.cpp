#include "gaze3d/psom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaze3d/errors.hpp"
#include "json.hpp"

namespace gaze3d {

namespace {

// quadratic Lagrange basis over three nodes and its derivative
void lagrange3(const std::array<double, 3>& t, double x, double* l, double* dl) {
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        const double denom = (t[i] - t[j]) * (t[i] - t[k]);
        l[i] = (x - t[j]) * (x - t[k]) / denom;
        if (dl) dl[i] = (2.0 * x - t[j] - t[k]) / denom;
    }
}

}  // namespace

std::array<double, 4> PsomNet::forward(const Vec2& s) const {
    double lx[3], ly[3];
    lagrange3(xs, s.x, lx, nullptr);
    lagrange3(ys, s.y, ly, nullptr);
    std::array<double, 4> out{};
    for (int iy = 0; iy < 3; ++iy) {
        for (int ix = 0; ix < 3; ++ix) {
            const double h = lx[ix] * ly[iy];
            const auto& wk = w[iy * 3 + ix];
            for (int c = 0; c < 4; ++c) out[c] += h * wk[c];
        }
    }
    return out;
}

void PsomNet::jacobian(const Vec2& s, std::array<double, 4>& dfdx,
                       std::array<double, 4>& dfdy) const {
    double lx[3], ly[3], dlx[3], dly[3];
    lagrange3(xs, s.x, lx, dlx);
    lagrange3(ys, s.y, ly, dly);
    dfdx.fill(0.0);
    dfdy.fill(0.0);
    for (int iy = 0; iy < 3; ++iy) {
        for (int ix = 0; ix < 3; ++ix) {
            const auto& wk = w[iy * 3 + ix];
            for (int c = 0; c < 4; ++c) {
                dfdx[c] += dlx[ix] * ly[iy] * wk[c];
                dfdy[c] += lx[ix] * dly[iy] * wk[c];
            }
        }
    }
}

bool PsomNet::inside_hull(const Vec2& s) const {
    return s.x >= xs[0] && s.x <= xs[2] && s.y >= ys[0] && s.y <= ys[2];
}

PsomNet psom_calibrate(const std::vector<PsomNode>& calib) {
    if (calib.size() != 9) {
        throw NotALattice("PSOM calibration needs exactly 9 points");
    }
    // collect the distinct coordinates
    auto distinct = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        std::vector<double> out;
        for (double x : v) {
            if (out.empty() || std::abs(x - out.back()) > 1e-9) out.push_back(x);
        }
        return out;
    };
    std::vector<double> all_x, all_y;
    for (const auto& n : calib) {
        all_x.push_back(n.grid.x);
        all_y.push_back(n.grid.y);
    }
    const auto ux = distinct(all_x);
    const auto uy = distinct(all_y);
    if (ux.size() != 3 || uy.size() != 3) {
        throw NotALattice("calibration points do not form a 3x3 lattice");
    }

    PsomNet net;
    std::copy(ux.begin(), ux.end(), net.xs.begin());
    std::copy(uy.begin(), uy.end(), net.ys.begin());
    std::array<bool, 9> seen{};
    for (const auto& n : calib) {
        int ix = -1, iy = -1;
        for (int k = 0; k < 3; ++k) {
            if (std::abs(n.grid.x - net.xs[k]) <= 1e-9) ix = k;
            if (std::abs(n.grid.y - net.ys[k]) <= 1e-9) iy = k;
        }
        if (ix < 0 || iy < 0 || seen[iy * 3 + ix]) {
            throw NotALattice("calibration points do not cover the 3x3 lattice");
        }
        seen[iy * 3 + ix] = true;
        net.w[iy * 3 + ix] = n.ref;
    }
    return net;
}

Vec2 psom_error_gradient(const PsomNet& net, const std::array<double, 4>& f_et,
                         const Vec2& s) {
    const auto f = net.forward(s);
    std::array<double, 4> dfdx, dfdy;
    net.jacobian(s, dfdx, dfdy);
    Vec2 g;
    for (int c = 0; c < 4; ++c) {
        const double r = f[c] - f_et[c];
        g.x += r * dfdx[c];
        g.y += r * dfdy[c];
    }
    return g;
}

namespace {

double psom_error(const PsomNet& net, const std::array<double, 4>& f_et, const Vec2& s) {
    const auto f = net.forward(s);
    double e = 0.0;
    for (int c = 0; c < 4; ++c) e += (f[c] - f_et[c]) * (f[c] - f_et[c]);
    return 0.5 * e;
}

}  // namespace

InversionResult psom_invert(const PsomNet& net, const std::array<double, 4>& f_et,
                            const InversionConfig& cfg) {
    Vec2 s{0.5 * (net.xs[0] + net.xs[2]), 0.5 * (net.ys[0] + net.ys[2])};
    if (cfg.init == InversionConfig::Init::NearestNode) {
        double best = std::numeric_limits<double>::infinity();
        for (int iy = 0; iy < 3; ++iy) {
            for (int ix = 0; ix < 3; ++ix) {
                double d = 0.0;
                for (int c = 0; c < 4; ++c) {
                    const double r = net.w[iy * 3 + ix][c] - f_et[c];
                    d += r * r;
                }
                if (d < best) {
                    best = d;
                    s = net.node(ix, iy);
                }
            }
        }
    }

    InversionResult res;
    double e = psom_error(net, f_et, s);
    constexpr double kArmijo = 1e-4;
    int it = 0;
    for (; it < cfg.max_iter && e > cfg.threshold; ++it) {
        const Vec2 g = psom_error_gradient(net, f_et, s);
        const double g2 = g.x * g.x + g.y * g.y;
        if (g2 < 1e-30) break;  // stationary point
        if (cfg.backtracking) {
            double step = cfg.step;
            bool accepted = false;
            for (int half = 0; half < 60; ++half) {
                const Vec2 cand{s.x - step * g.x, s.y - step * g.y};
                const double ec = psom_error(net, f_et, cand);
                if (ec <= e - kArmijo * step * g2) {
                    s = cand;
                    e = ec;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;  // no descent step of useful length exists
        } else {
            s = {s.x - cfg.step * g.x, s.y - cfg.step * g.y};
            e = psom_error(net, f_et, s);
        }
    }
    res.s = s;
    res.error = e;
    res.iterations = it;
    res.converged = e <= cfg.threshold;
    res.extrapolated = !net.inside_hull(s);
    return res;
}

std::string psom_to_json(const PsomNet& net) {
    nlohmann::json j;
    j["xs"] = net.xs;
    j["ys"] = net.ys;
    auto ws = nlohmann::json::array();
    for (const auto& wk : net.w) ws.push_back(wk);
    j["w"] = ws;
    return j.dump();
}

PsomNet psom_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PsomNet net;
    for (int k = 0; k < 3; ++k) {
        net.xs[k] = j.at("xs").at(k).get<double>();
        net.ys[k] = j.at("ys").at(k).get<double>();
    }
    for (int k = 0; k < 9; ++k) {
        for (int c = 0; c < 4; ++c) net.w[k][c] = j.at("w").at(k).at(c).get<double>();
    }
    return net;
}

}  // namespace gaze3d
