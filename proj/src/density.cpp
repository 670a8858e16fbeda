#include "yule/density.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace yule {

namespace {

void check_moments(const std::vector<double>& m) {
    if (m.empty()) throw std::invalid_argument("fit_density: need at least the zeroth moment");
    if (m.size() > 17) throw std::invalid_argument("fit_density: order must be <= 16");
    if (std::abs(m[0] - 1.0) > 1e-12)
        throw std::invalid_argument("fit_density: zeroth moment must be 1");
    for (double x : m) {
        if (!std::isfinite(x) || std::abs(x) > 1.0 + 1e-9)
            throw std::invalid_argument("fit_density: moments must be finite and within [-1, 1]");
    }
}

}  // namespace

std::vector<std::vector<double>> legendre_monomial_coeffs(int n) {
    std::vector<std::vector<double>> P(static_cast<std::size_t>(n) + 1);
    P[0] = {1.0};
    if (n == 0) return P;
    P[1] = {0.0, 1.0};
    for (int m = 1; m < n; ++m) {
        // (m+1) P_{m+1} = (2m+1) x P_m - m P_{m-1}
        std::vector<double> next(static_cast<std::size_t>(m) + 2, 0.0);
        for (std::size_t j = 0; j < P[static_cast<std::size_t>(m)].size(); ++j)
            next[j + 1] += (2.0 * m + 1.0) * P[static_cast<std::size_t>(m)][j];
        for (std::size_t j = 0; j < P[static_cast<std::size_t>(m - 1)].size(); ++j)
            next[j] -= m * P[static_cast<std::size_t>(m - 1)][j];
        for (double& c : next) c /= (m + 1.0);
        P[static_cast<std::size_t>(m) + 1] = std::move(next);
    }
    return P;
}

DensityPoly fit_density(const std::vector<double>& moments) {
    check_moments(moments);
    const int k = static_cast<int>(moments.size()) - 1;
    const auto P = legendre_monomial_coeffs(k);
    DensityPoly out;
    out.coeffs.assign(static_cast<std::size_t>(k) + 1, 0.0);
    for (int n = 0; n <= k; ++n) {
        double expect = 0.0;  // E[P_n(rho)] from the raw moments
        for (std::size_t j = 0; j < P[static_cast<std::size_t>(n)].size(); ++j)
            expect += P[static_cast<std::size_t>(n)][j] * moments[j];
        const double b = 0.5 * (2.0 * n + 1.0) * expect;
        for (std::size_t j = 0; j < P[static_cast<std::size_t>(n)].size(); ++j)
            out.coeffs[j] += b * P[static_cast<std::size_t>(n)][j];
    }
    return out;
}

DensityPoly fit_density_normal_equations(const std::vector<double>& moments) {
    check_moments(moments);
    const int n = static_cast<int>(moments.size());
    Eigen::MatrixXd H(n, n);
    Eigen::VectorXd m(n);
    for (int i = 0; i < n; ++i) {
        m(i) = moments[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j)
            H(i, j) = ((i + j) % 2 == 0) ? 2.0 / (i + j + 1) : 0.0;
    }
    const Eigen::VectorXd a = H.fullPivLu().solve(m);
    DensityPoly out;
    out.coeffs.assign(a.data(), a.data() + n);
    return out;
}

double eval_density(const DensityPoly& p, double x) {
    double r = 0.0;
    for (std::size_t i = p.coeffs.size(); i-- > 0;) r = r * x + p.coeffs[i];
    return r;
}

std::vector<double> moments_of_density(const DensityPoly& p) {
    const int k = p.order();
    std::vector<double> m(static_cast<std::size_t>(k) + 1, 0.0);
    for (int j = 0; j <= k; ++j) {
        double s = 0.0;
        for (int i = 0; i <= k; ++i)
            if ((i + j) % 2 == 0) s += p.coeffs[static_cast<std::size_t>(i)] * 2.0 / (i + j + 1);
        m[static_cast<std::size_t>(j)] = s;
    }
    return m;
}

std::vector<std::pair<double, double>> emit_density_table(const DensityPoly& p, int n_points) {
    if (n_points < 2) throw std::invalid_argument("emit_density_table: need >= 2 points");
    std::vector<std::pair<double, double>> rows;
    rows.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double x = -1.0 + 2.0 * i / (n_points - 1);
        rows.emplace_back(x, eval_density(p, x));
    }
    return rows;
}

}  // namespace yule
