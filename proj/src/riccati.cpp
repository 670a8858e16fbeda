#include "yule/riccati.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "yule/quadrature.hpp"

namespace yule {

namespace {

struct Packed {
    // V (symmetric: v11, v12, v22), b (2), gamma
    double v11 = 0, v12 = 0, v22 = 0, b1 = 0, b2 = 0, g = 0;

    Packed operator+(const Packed& o) const {
        return {v11 + o.v11, v12 + o.v12, v22 + o.v22, b1 + o.b1, b2 + o.b2, g + o.g};
    }
    Packed operator*(double a) const {
        return {a * v11, a * v12, a * v22, a * b1, a * b2, a * g};
    }
};

struct System {
    const LinearSDE* sde;
    Eigen::Matrix2d Sig;
    Eigen::Matrix2d Q;
    Eigen::Vector2d z;

    Packed rhs(double t, const Packed& s) const {
        Eigen::Matrix2d V;
        V << s.v11, s.v12, s.v12, s.v22;
        Eigen::Vector2d b(s.b1, s.b2);
        Eigen::Matrix2d B = sde->drift_matrix ? sde->drift_matrix(t) : Eigen::Matrix2d::Zero();
        Eigen::Matrix2d VB = V * B;
        Eigen::Matrix2d dV = V * Sig * V - (VB + VB.transpose()) - Q;
        Eigen::Vector2d db = (V * Sig - B.transpose()) * b - V * sde->delta - z;
        const double dg = 0.5 * (b.dot(Sig * b) - (V * Sig).trace() - sde->delta.dot(b));
        return {dV(0, 0), 0.5 * (dV(0, 1) + dV(1, 0)), dV(1, 1), db(0), db(1), dg};
    }
};

// Time grid from 0 to the effective right endpoint; graded grids are uniform
// in -log(horizon - t) so steps shrink like the distance to the singularity.
std::vector<double> time_grid(const LinearSDE& sde, int steps) {
    const double t_end = sde.horizon - sde.end_cut;
    std::vector<double> t(static_cast<std::size_t>(steps) + 1);
    if (sde.graded_end && sde.end_cut > 0.0) {
        const double tau_max = -std::log(sde.end_cut / sde.horizon);
        for (int i = 0; i <= steps; ++i) {
            const double frac = static_cast<double>(i) / steps;
            t[static_cast<std::size_t>(i)] = sde.horizon * (1.0 - std::exp(-frac * tau_max));
        }
        t.back() = t_end;
    } else {
        for (int i = 0; i <= steps; ++i)
            t[static_cast<std::size_t>(i)] = t_end * static_cast<double>(i) / steps;
    }
    return t;
}

Packed run_backward(const System& sys, const std::vector<double>& grid) {
    Packed s{};  // terminal condition V = 0, b = 0, gamma = 0
    for (std::size_t i = grid.size() - 1; i > 0; --i) {
        const double t1 = grid[i], t0 = grid[i - 1];
        const double h = t0 - t1;  // negative
        const Packed k1 = sys.rhs(t1, s);
        const Packed k2 = sys.rhs(t1 + 0.5 * h, s + k1 * (0.5 * h));
        const Packed k3 = sys.rhs(t1 + 0.5 * h, s + k2 * (0.5 * h));
        const Packed k4 = sys.rhs(t0, s + k3 * h);
        s = s + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
        if (!std::isfinite(s.v11) || !std::isfinite(s.g))
            throw std::runtime_error("integrate_backward: state became non-finite");
    }
    // V must stay PSD along the backward sweep
    const double tr = s.v11 + s.v22;
    const double det = s.v11 * s.v22 - s.v12 * s.v12;
    const double scale = std::abs(tr) + 1.0;
    if (tr < -1e-9 * scale || det < -1e-9 * scale * scale)
        throw std::runtime_error("integrate_backward: V lost positive semi-definiteness");
    return s;
}

std::vector<double> halved(const std::vector<double>& grid) {
    std::vector<double> g;
    g.reserve(grid.size() * 2 - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        g.push_back(grid[i]);
        g.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    g.push_back(grid.back());
    return g;
}

}  // namespace

LinearSDE make_linear_sde(const ProcessSpec& spec, double bridge_cut) {
    spec.validate();
    LinearSDE sde;
    sde.horizon = spec.horizon;
    switch (spec.kind) {
        case ProcessKind::Bm:
            break;
        case ProcessKind::Ou: {
            const double r = spec.r;
            sde.drift_matrix = [r](double) {
                return (-r * Eigen::Matrix2d::Identity()).eval();
            };
            break;
        }
        case ProcessKind::Bb:
            sde.drift_matrix = [](double t) {
                return (-1.0 / (1.0 - t) * Eigen::Matrix2d::Identity()).eval();
            };
            sde.end_cut = bridge_cut;
            sde.graded_end = true;
            break;
        case ProcessKind::CorrelatedBm:
            sde.sigma << 1.0, 0.0, spec.c, std::sqrt(1.0 - spec.c * spec.c);
            break;
    }
    return sde;
}

RiccatiState integrate_backward(const LinearSDE& sde, const Eigen::Matrix2d& Q,
                                const Eigen::Vector2d& z, int steps) {
    if (steps < 2) throw std::invalid_argument("integrate_backward: steps must be >= 2");
    System sys{&sde, sde.sigma * sde.sigma.transpose(), Q, z};
    const auto grid = time_grid(sde, steps);
    const Packed fine = run_backward(sys, halved(grid));
    const Packed coarse = run_backward(sys, grid);

    RiccatiState st;
    st.V << fine.v11, fine.v12, fine.v12, fine.v22;
    st.b << fine.b1, fine.b2;
    st.gamma = fine.g;
    st.t = 0.0;
    st.err_estimate = std::abs(fine.g - coarse.g) / 15.0;  // 4th-order Richardson scale
    return st;
}

double mgf_via_mixing(const LinearSDE& sde, const Eigen::Matrix2d& S, int gh_nodes,
                      int steps) {
    if ((S - S.transpose()).norm() > 1e-12 * (1.0 + S.norm()))
        throw std::invalid_argument("mgf_via_mixing: S must be symmetric");

    auto gamma_at = [&](const Eigen::Vector2d& a) {
        return integrate_backward(sde, S, a, steps).gamma;
    };

    const Eigen::Vector2d e1(1, 0), e2(0, 1);
    const double g00 = gamma_at(Eigen::Vector2d::Zero());
    const double gp1 = gamma_at(e1), gm1 = gamma_at(-e1);
    const double gp2 = gamma_at(e2), gm2 = gamma_at(-e2);
    const double g12 = gamma_at(e1 + e2);

    // gamma(a) = g00 + g.a + a.G a / 2, recovered by polarization
    Eigen::Vector2d g((gp1 - gm1) / 2.0, (gp2 - gm2) / 2.0);
    Eigen::Matrix2d G;
    G(0, 0) = gp1 + gm1 - 2.0 * g00;
    G(1, 1) = gp2 + gm2 - 2.0 * g00;
    G(0, 1) = G(1, 0) = g12 - g00 - g(0) - g(1) - 0.5 * (G(0, 0) + G(1, 1));

    // mixing covariance C = S / T; whiten a = L w with C = L L^T
    const Eigen::Matrix2d C = S / sde.horizon;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(C);
    Eigen::Vector2d d = es.eigenvalues().cwiseMax(0.0);
    Eigen::Matrix2d L = es.eigenvectors() * d.cwiseSqrt().asDiagonal();

    if (gh_nodes > 0) {
        // cross-check mode: fresh backward integration at every node
        const QuadRule rule = gauss_hermite(gh_nodes);
        std::vector<int> dims;
        for (int i = 0; i < 2; ++i)
            if (d(i) > 1e-14) dims.push_back(i);
        const double norm = std::pow(std::numbers::pi, -0.5 * static_cast<double>(dims.size()));
        double acc = 0.0;
        if (dims.empty()) return std::exp(-g00);
        if (dims.size() == 1) {
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const Eigen::Vector2d a =
                    L.col(dims[0]) * (std::numbers::sqrt2 * rule.nodes[i]);
                acc += rule.weights[i] * std::exp(-gamma_at(a));
            }
            return norm * acc;
        }
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                const Eigen::Vector2d a =
                    std::numbers::sqrt2 *
                    (L.col(0) * rule.nodes[i] + L.col(1) * rule.nodes[j]);
                acc += rule.weights[i] * rule.weights[j] * std::exp(-gamma_at(a));
            }
        return norm * acc;
    }

    // closed form: E[exp(-g.a - a.Ga/2)] over N(0, C)
    //            = det(I + L^T G L)^{-1/2} exp(ghat.(I + Ghat)^{-1} ghat / 2)
    const Eigen::Matrix2d Ghat = L.transpose() * G * L;
    const Eigen::Vector2d ghat = L.transpose() * g;
    const Eigen::Matrix2d M = Eigen::Matrix2d::Identity() + Ghat;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> ms(0.5 * (M + M.transpose()));
    if (ms.eigenvalues().minCoeff() <= 0.0)
        throw std::domain_error("mgf_via_mixing: mixing integral diverges (S outside domain)");
    const double quad = ghat.dot(M.inverse() * ghat);
    return std::exp(-g00 + 0.5 * quad) / std::sqrt(M.determinant());
}

}  // namespace yule
