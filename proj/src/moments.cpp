#include "yule/moments.hpp"

#include <cmath>
#include <vector>

#include "yule/mgf.hpp"
#include "yule/parallel.hpp"
#include "yule/quadrature.hpp"

namespace yule {

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

struct PanelNodes {
    std::vector<double> x, w;
};

// Composite Gauss-Legendre nodes over [0, upper] with n_panels equal panels.
PanelNodes composite_gl(const QuadRule& rule, double upper, int n_panels) {
    PanelNodes out;
    out.x.reserve(rule.nodes.size() * static_cast<std::size_t>(n_panels));
    out.w.reserve(out.x.capacity());
    const double w = upper / n_panels;
    for (int p = 0; p < n_panels; ++p) {
        const double mid = (p + 0.5) * w, half = 0.5 * w;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            out.x.push_back(mid + half * rule.nodes[i]);
            out.w.push_back(half * rule.weights[i]);
        }
    }
    return out;
}

// One refinement level of the 2-D integral
//   int int u^{k-1} v^{k-1} c_k(u^2, v^2) du dv
// over [0,U]^2 (or twice the u < v triangle when folded). Outer nodes are the
// work items; chunk order fixes the reduction order.
double one_level(const ProcessSpec& spec, int k, double upper, int panels, bool fold) {
    // distinct u/v orders keep every tensor node off the diagonal
    const QuadRule gl_u = gauss_legendre(12);
    const QuadRule gl_v = gauss_legendre(13);
    const PanelNodes outer = composite_gl(gl_v, upper, panels);
    const double base_width = upper / panels;

    std::vector<double> partial(outer.x.size(), 0.0);
    parallel_chunks(static_cast<int>(outer.x.size()), [&](int idx) {
        const double v = outer.x[static_cast<std::size_t>(idx)];
        const double wv = outer.w[static_cast<std::size_t>(idx)];
        const double u_upper = fold ? v : upper;
        const int n_panels = std::max(1, static_cast<int>(std::ceil(u_upper / base_width)));
        const double pw = u_upper / n_panels;
        double inner = 0.0;
        const double v_sq = v * v;
        for (int p = 0; p < n_panels; ++p) {
            const double mid = (p + 0.5) * pw, half = 0.5 * pw;
            for (std::size_t i = 0; i < gl_u.nodes.size(); ++i) {
                const double u = mid + half * gl_u.nodes[i];
                const Jet jet = phi_s12_jet(spec, u * u, v_sq, k);
                inner += half * gl_u.weights[i] * std::pow(u, k - 1) * jet[k];
            }
        }
        partial[static_cast<std::size_t>(idx)] = wv * std::pow(v, k - 1) * inner;
    });
    const double total = pairwise_sum(partial);
    return fold ? 2.0 * total : total;
}

double truncation_limit(double horizon) { return std::max(24.0, 200.0 / horizon); }

}  // namespace

double gamma_half_integer(int k) { return std::tgamma(0.5 * k); }

MomentResult moment(const ProcessSpec& spec, int k, const QuadratureConfig& cfg) {
    spec.validate();
    cfg.validate();
    if (k < 1 || k > 16)
        throw std::invalid_argument("moment: order must be in 1..16");
    if (k % 2 == 1 && spec.kind != ProcessKind::CorrelatedBm)
        return {k, 0.0, 0.0, MomentRoute::jet_quadrature};  // zero by symmetry

    const double g = gamma_half_integer(k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double pref = sign * 4.0 * factorial(k) / (std::pow(2.0, k) * g * g);
    const double upper = truncation_limit(spec.horizon);
    const bool fold = cfg.symmetry_fold;

    double prev = 0.0;
    bool have_prev = false;
    double delta = 0.0;
    for (int level = 0; level <= cfg.max_level; ++level) {
        const int panels = 24 << level;
        const double value = pref * one_level(spec, k, upper, panels, fold);
        if (have_prev) {
            delta = std::abs(value - prev);
            if (delta < cfg.abs_tol) return {k, value, delta, MomentRoute::jet_quadrature};
        }
        prev = value;
        have_prev = true;
    }
    throw ConvergenceError(k, cfg.max_level, delta);
}

namespace {

// 1/(x tanh x) - 1/x^2, smooth through 0.
double coth_over_x_minus_inv_sq(double x) {
    if (x < 0.5) {
        const double y = x * x;
        return 1.0 / 3.0 +
               y * (-1.0 / 45.0 +
                    y * (2.0 / 945.0 +
                         y * (-1.0 / 4725.0 +
                              y * (2.0 / 93555.0 - y * (1382.0 / 638512875.0)))));
    }
    return 1.0 / (x * std::tanh(x)) - 1.0 / (x * x);
}

double explicit_m2_level(double upper, int panels, int ts_level) {
    const QuadRule outer_rule = gauss_legendre(13);
    const PanelNodes outer = composite_gl(outer_rule, upper, panels);
    const QuadRule inner = tanh_sinh(ts_level);

    std::vector<double> partial(outer.x.size(), 0.0);
    parallel_chunks(static_cast<int>(outer.x.size()), [&](int idx) {
        const double v = outer.x[static_cast<std::size_t>(idx)];
        const double hv = coth_over_x_minus_inv_sq(v);
        const double rsv = std::sqrt(std::sinh(v));
        double acc = 0.0;
        for (std::size_t i = 0; i < inner.nodes.size(); ++i) {
            const double u = 0.5 * v * (1.0 + inner.nodes[i]);
            const double w = 0.5 * v * inner.weights[i];
            const double num = u * v * std::sqrt(u * v) * (coth_over_x_minus_inv_sq(u) - hv);
            acc += w * num / ((v * v - u * u) * std::sqrt(std::sinh(u)) * rsv);
        }
        partial[static_cast<std::size_t>(idx)] = outer.w[static_cast<std::size_t>(idx)] * acc;
    });
    return pairwise_sum(partial);
}

}  // namespace

MomentResult moment2_explicit_bm(const QuadratureConfig& cfg) {
    cfg.validate();
    const double upper = 200.0;
    double prev = 0.0;
    bool have_prev = false;
    double delta = 0.0;
    for (int level = 0; level <= cfg.max_level; ++level) {
        const double value = explicit_m2_level(upper, 24 << level, 6 + level);
        if (have_prev) {
            delta = std::abs(value - prev);
            if (delta < cfg.abs_tol) return {2, value, delta, MomentRoute::explicit_m2};
        }
        prev = value;
        have_prev = true;
    }
    throw ConvergenceError(2, cfg.max_level, delta);
}

std::pair<double, double> mean_and_variance(const ProcessSpec& spec,
                                            const QuadratureConfig& cfg) {
    const double mean =
        spec.kind == ProcessKind::CorrelatedBm ? moment(spec, 1, cfg).value : 0.0;
    const double m2 = moment(spec, 2, cfg).value;
    return {mean, m2 - mean * mean};
}

}  // namespace yule
