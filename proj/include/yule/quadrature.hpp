#pragma once

#include <vector>

namespace yule {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1].
QuadRule gauss_legendre(int n);

// Gauss-Hermite rule (physicists' weight e^{-x^2}) on the real line.
QuadRule gauss_hermite(int n);

// Tanh-sinh nodes on (-1, 1) for step h = 2^-level; nodes never reach the
// endpoints, which makes the rule usable for integrands with endpoint
// singularities removed only in the limit.
QuadRule tanh_sinh(int level);

}  // namespace yule
