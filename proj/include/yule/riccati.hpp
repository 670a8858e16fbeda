#pragma once

#include <Eigen/Dense>
#include <functional>

#include "yule/process.hpp"

namespace yule {

// Linear SDE dX = sigma dW + (B(t) X + delta) dt on [0, horizon]. The bridge
// drift explodes at the endpoint, so integration optionally stops at
// horizon - end_cut on a grid graded toward the singularity.
struct LinearSDE {
    Eigen::Matrix2d sigma = Eigen::Matrix2d::Identity();
    std::function<Eigen::Matrix2d(double)> drift_matrix;  // B(t); null means 0
    Eigen::Vector2d delta = Eigen::Vector2d::Zero();
    double horizon = 1.0;
    double end_cut = 0.0;      // integrate over [0, horizon - end_cut]
    bool graded_end = false;   // grade the grid toward the cut endpoint
};

// Backward state of the log-quadratic ansatz F = exp(-x.Vx/2 - b.x - gamma).
struct RiccatiState {
    Eigen::Matrix2d V = Eigen::Matrix2d::Zero();
    Eigen::Vector2d b = Eigen::Vector2d::Zero();
    double gamma = 0.0;
    double t = 0.0;
    double err_estimate = 0.0;  // step-halving estimate on gamma
};

// Oracle realization of a process family as a linear SDE.
LinearSDE make_linear_sde(const ProcessSpec& spec, double bridge_cut = 1e-6);

// Fixed-step classical RK4 backward integration of
//   V' = V Sig V - (V B + B^T V) - Q
//   b' = (V Sig - B^T) b - V delta - z
//   2 gamma' = b^T Sig b - tr(V Sig) - delta . b
// from V = 0, b = 0, gamma = 0 at the right endpoint down to t = 0.
// Error estimate from one integration at half the step count.
RiccatiState integrate_backward(const LinearSDE& sde, const Eigen::Matrix2d& Q,
                                const Eigen::Vector2d& z, int steps);

// MGF phi(S) by Gaussian mixing of exp(-gamma(0; a)) over a ~ N(0, S/T).
// gamma(0; a) is exactly quadratic in a, so six probe integrations determine
// it and the mixing integral is closed form. gh_nodes > 0 switches to a
// tensor Gauss-Hermite cross-check that re-integrates at every node.
double mgf_via_mixing(const LinearSDE& sde, const Eigen::Matrix2d& S, int gh_nodes = 0,
                      int steps = 10000);

}  // namespace yule
