#pragma once

#include <utility>
#include <vector>

namespace yule {

// Moment-matched polynomial density on [-1, 1], monomial basis.
struct DensityPoly {
    std::vector<double> coeffs;  // a_0..a_k
    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Unique degree-k polynomial whose first k+1 moments on [-1,1] equal the
// input (moments[0] must be 1). Computed by Legendre projection: the
// coefficient of P_n is (2n+1)/2 E[P_n(rho)], a triangular well-conditioned
// map from moments.
DensityPoly fit_density(const std::vector<double>& moments);

// Same polynomial from the monomial-basis linear system
// int x^i p(x) dx = m_i; ill-conditioned at high order, kept as a
// cross-check route.
DensityPoly fit_density_normal_equations(const std::vector<double>& moments);

double eval_density(const DensityPoly& p, double x);

// Exact moments int x^j p(x) dx of the fitted polynomial, j = 0..p.order().
std::vector<double> moments_of_density(const DensityPoly& p);

// Evenly spaced (x, p(x)) table on [-1, 1].
std::vector<std::pair<double, double>> emit_density_table(const DensityPoly& p, int n_points);

// Monomial coefficients of the Legendre polynomials P_0..P_n.
std::vector<std::vector<double>> legendre_monomial_coeffs(int n);

}  // namespace yule
