#pragma once

#include <array>
#include <string>
#include <vector>

#include "gaze3d/vec.hpp"

namespace gaze3d {

// Parameterized self-organizing map over the 3x3 calibration lattice:
// four input neurons (binocular 2D gaze), nine inner neurons, two outputs
// (the X,Y elements of the 3D PoG). The forward map interpolates the nine
// reference vectors with tensor-product degree-2 Lagrange basis functions,
// which is exact at the nodes and sums to one everywhere.
struct PsomNode {
    Vec2 grid;                    // s_k: calibration point (X, Y)
    std::array<double, 4> ref;    // w_k: (x_l, y_l, x_r, y_r)
};

struct PsomNet {
    std::array<double, 3> xs{};   // lattice X coordinates, ascending
    std::array<double, 3> ys{};   // lattice Y coordinates, ascending
    std::array<std::array<double, 4>, 9> w{};  // w[iy*3+ix]

    std::array<double, 4> forward(const Vec2& s) const;
    // rows: d f / d s_x and d f / d s_y (each 4 components)
    void jacobian(const Vec2& s, std::array<double, 4>& dfdx,
                  std::array<double, 4>& dfdy) const;
    bool inside_hull(const Vec2& s) const;
    Vec2 node(int ix, int iy) const { return {xs[ix], ys[iy]}; }
};

PsomNet psom_calibrate(const std::vector<PsomNode>& calib);

struct InversionConfig {
    double step = 0.5;          // gradient step; initial step with backtracking
    double threshold = 1e-10;   // stop when E(s) falls below this
    int max_iter = 500;
    bool backtracking = true;   // halving line search with Armijo c = 1e-4
    enum class Init { LatticeCenter, NearestNode };
    Init init = Init::NearestNode;
};

struct InversionResult {
    Vec2 s;
    double error = 0.0;     // final E(s)
    int iterations = 0;
    bool converged = false;
    bool extrapolated = false;  // result left the lattice hull
};

// Minimizes E(s) = 1/2 |f(s) - f_et|^2 by gradient descent with the analytic
// Jacobian. Non-convergence is soft: the best iterate is returned flagged.
InversionResult psom_invert(const PsomNet& net, const std::array<double, 4>& f_et,
                            const InversionConfig& cfg = {});

// analytic gradient of E at s
Vec2 psom_error_gradient(const PsomNet& net, const std::array<double, 4>& f_et,
                         const Vec2& s);

std::string psom_to_json(const PsomNet& net);
PsomNet psom_from_json(const std::string& text);

}  // namespace gaze3d
