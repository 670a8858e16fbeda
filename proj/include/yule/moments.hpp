#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "yule/process.hpp"

namespace yule {

enum class MomentRoute { jet_quadrature, explicit_m2, monte_carlo };

inline const char* route_name(MomentRoute r) {
    switch (r) {
        case MomentRoute::jet_quadrature: return "jet_quadrature";
        case MomentRoute::explicit_m2: return "explicit_m2";
        case MomentRoute::monte_carlo: return "monte_carlo";
    }
    return "?";
}

struct QuadratureConfig {
    double abs_tol = 1e-8;
    int max_level = 12;
    enum class Scheme { gauss_legendre_panels, tanh_sinh_2d } scheme =
        Scheme::gauss_legendre_panels;
    bool symmetry_fold = true;

    void validate() const {
        if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: abs_tol must be > 0");
        if (max_level < 3) throw std::invalid_argument("QuadratureConfig: max_level must be >= 3");
    }
};

struct MomentResult {
    int k = 0;
    double value = 0.0;
    double err_estimate = 0.0;
    MomentRoute route = MomentRoute::jet_quadrature;
};

// Quadrature refinement exhausted max_level without meeting abs_tol.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(int k, int level, double delta)
        : std::runtime_error("quadrature did not converge at k=" + std::to_string(k) +
                             ", level=" + std::to_string(level) +
                             ", last delta=" + std::to_string(delta)),
          k_(k), level_(level) {}
    int k() const { return k_; }
    int level() const { return level_; }

private:
    int k_, level_;
};

// E rho^k as the 2-D semi-infinite integral of the k-th s12 derivative of the
// MGF, after the substitution u = sqrt(s11), v = sqrt(s22):
//   E rho^k = (-1)^k 4 k! / (2^k Gamma(k/2)^2)
//             * int int u^{k-1} v^{k-1} c_k(u^2, v^2) du dv,
// where c_k is the k-th Taylor coefficient of phi in s12 at 0. Odd orders for
// the exchangeable families are exactly zero and short-circuit.
MomentResult moment(const ProcessSpec& spec, int k, const QuadratureConfig& cfg = {});

// Independent closed-form route for E rho^2 of Brownian motion:
//   int_0^inf int_0^v uv sqrt(uv) / ((v^2-u^2) sqrt(sinh u sinh v))
//       * (1/(u tanh u) - 1/(v tanh v) - 1/u^2 + 1/v^2) du dv.
MomentResult moment2_explicit_bm(const QuadratureConfig& cfg = {});

// (E rho, Var rho).
std::pair<double, double> mean_and_variance(const ProcessSpec& spec,
                                            const QuadratureConfig& cfg = {});

// Gamma(k/2) for the moment prefactor.
double gamma_half_integer(int k);

}  // namespace yule
