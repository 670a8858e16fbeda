#include "yule/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace yule {

QuadRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    QuadRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[static_cast<std::size_t>(i)] = -x;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[static_cast<std::size_t>(i)] = w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

QuadRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    QuadRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const int m = (n + 1) / 2;
    double x = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            x -= 1.14 * std::pow(static_cast<double>(n), 0.426) / x;
        } else if (i == 2) {
            x = 1.86 * x - 0.86 * r.nodes[static_cast<std::size_t>(n - 1)];
        } else if (i == 3) {
            x = 1.91 * x - 0.91 * r.nodes[static_cast<std::size_t>(n - 2)];
        } else {
            x = 2.0 * x - r.nodes[static_cast<std::size_t>(n - i + 1)];
        }
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = x * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.nodes[static_cast<std::size_t>(i)] = -x;
        const double w = 2.0 / (pp * pp);
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
        r.weights[static_cast<std::size_t>(i)] = w;
    }
    return r;
}

QuadRule tanh_sinh(int level) {
    if (level < 0 || level > 20) throw std::invalid_argument("tanh_sinh: bad level");
    const double h = std::ldexp(1.0, -level);
    QuadRule r;
    const double half_pi = 0.5 * std::numbers::pi;
    for (int j = 0;; ++j) {
        const double t = j * h;
        const double u = half_pi * std::sinh(t);
        const double x = std::tanh(u);
        const double w = h * half_pi * std::cosh(t) / (std::cosh(u) * std::cosh(u));
        if (1.0 - x < 1e-14 || w < 1e-290) break;
        if (j == 0) {
            r.nodes.push_back(0.0);
            r.weights.push_back(w);
            continue;
        }
        r.nodes.push_back(x);
        r.weights.push_back(w);
        r.nodes.push_back(-x);
        r.weights.push_back(w);
    }
    return r;
}

}  // namespace yule
