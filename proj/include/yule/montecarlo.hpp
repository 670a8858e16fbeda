#pragma once

#include <cstdint>
#include <vector>

#include "yule/process.hpp"

namespace yule {

// splitmix64-seeded xoshiro256++; one independent stream per path index, so
// results are bit-identical for any worker count.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next_u64();
    double next_uniform();  // [0, 1)
    double next_normal();   // Box-Muller, deterministic draw order

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct SimConfig {
    ProcessSpec spec;
    long long n_paths = 100000;
    int n_steps = 2048;  // grid cells per path
    std::uint64_t seed = 1;

    void validate() const;
};

struct RhoSample {
    double rho = 0.0;
    double y11 = 0.0, y12 = 0.0, y22 = 0.0;
};

struct MomentEstimate {
    int k = 0;
    double estimate = 0.0;
    double std_error = 0.0;
};

struct CltRow {
    double horizon = 0.0;
    double var_scaled_rho = 0.0;     // Var(sqrt(T) rho(T)), limit 1/(2r)
    double var_scaled_rho_se = 0.0;
    double var_scaled_cross = 0.0;   // Var(T^{-1/2} int X1 X2), limit 1/(8 r^3)
    double var_scaled_cross_se = 0.0;
    double mean_y11_over_t = 0.0;    // -> 1/(2r)
    double mean_rho = 0.0;
    double ks_normal = 0.0;          // KS distance of sqrt(2rT) rho to N(0,1)
};

// Exact Gaussian transitions on a uniform grid of n_steps cells (n_steps + 1
// points); the bridge is a pinned Brownian path. Two normals per step in
// fixed order.
void simulate_path(const ProcessSpec& spec, int n_steps, PathRng& rng,
                   std::vector<double>& x1, std::vector<double>& x2);

// Trapezoidal discretization of the path covariance functionals and the
// correlation ratio. Weighted Cauchy-Schwarz keeps |rho| <= 1 up to rounding.
RhoSample rho_of_path(const std::vector<double>& x1, const std::vector<double>& x2,
                      double horizon);

// Sample moments of rho with jackknife standard errors over 100 path blocks.
std::vector<MomentEstimate> estimate_moments(const SimConfig& cfg,
                                             const std::vector<int>& orders);

// OU pair asymptotics: variance of sqrt(T) rho(T) and of the scaled cross
// integral, plus a KS diagnostic against the Gaussian limit. Steps per path
// scale with T to hold per-unit-time resolution.
std::vector<CltRow> clt_experiment(double r, const std::vector<double>& horizons,
                                   long long n_paths, std::uint64_t seed,
                                   int steps_per_unit = 2048);

// Kolmogorov-Smirnov distance of samples to the standard normal.
double ks_distance_normal(std::vector<double> samples);

}  // namespace yule
