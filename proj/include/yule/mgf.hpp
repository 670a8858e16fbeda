#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "yule/jet.hpp"
#include "yule/process.hpp"

namespace yule {

// Symmetric 2x2 MGF argument. T is double for point evaluation or Jet for
// derivative propagation in one entry.
template <class T>
struct SymMatrix2 {
    T s11, s12, s22;
};

// Eigenvalues theta_i^2 = (s11 + s22 +- sqrt((s11-s22)^2 + 4 s12^2)) / 2,
// plus branch first. Jets through the square root are well defined only when
// the discriminant has a positive constant term; on the diagonal with
// s12_0 = 0 the eigenvalue pair is not differentiable and we refuse.
template <class T>
std::pair<T, T> eigen_theta(const SymMatrix2<T>& S) {
    using std::sqrt;
    T disc = (S.s11 - S.s22) * (S.s11 - S.s22) + 4.0 * (S.s12 * S.s12);
    T d = [&] {
        if constexpr (std::is_same_v<T, double>) {
            return sqrt(disc < 0.0 ? 0.0 : disc);
        } else {
            if (constant_term(disc) <= 0.0)
                throw std::domain_error(
                    "eigen_theta: jet evaluation is nonsmooth at s11 = s22, s12 = 0");
            return sqrt(disc);
        }
    }();
    T tr = S.s11 + S.s22;
    return {0.5 * (tr + d), 0.5 * (tr - d)};
}

// Eigenvalues of (M^-1)^T S M^-1 for the correlation-removing transform,
// lambda_i^2 = (s11 + s22 + 2 c s12 +- sqrt((s11-s22)^2 + 4(c s11 + s12)(c s22 + s12)))/2.
template <class T>
std::pair<T, T> eigen_lambda(const SymMatrix2<T>& S, double c) {
    using std::sqrt;
    if (!(c > -1.0 && c < 1.0))
        throw std::invalid_argument("eigen_lambda: correlation must be in (-1, 1)");
    T disc = (S.s11 - S.s22) * (S.s11 - S.s22) +
             4.0 * ((c * S.s11 + S.s12) * (c * S.s22 + S.s12));
    T d = [&] {
        if constexpr (std::is_same_v<T, double>) {
            return sqrt(disc < 0.0 ? 0.0 : disc);
        } else {
            if (constant_term(disc) <= 0.0)
                throw std::domain_error("eigen_lambda: discriminant has no positive constant term");
            return sqrt(disc);
        }
    }();
    T tr = S.s11 + S.s22 + 2.0 * (c * S.s12);
    return {0.5 * (tr + d), 0.5 * (tr - d)};
}

// One-dimensional generating function of the centered quadratic functional of
// Brownian motion: psi(theta^2) = (theta T / sinh theta T)^{1/2}, evaluated
// through sinh(x)/x in the even variable so theta^2 = 0 is a regular point.
template <class T>
T psi_bm(const T& theta_sq, double horizon) {
    if (constant_term(theta_sq) < 0.0)
        throw std::domain_error("psi_bm: negative theta^2");
    using std::exp;
    return exp(-0.5 * log_sinhc_sqrt(theta_sq * (horizon * horizon)));
}

// OU counterpart. Evaluated with q = e^{-eta T} factored out of cosh/sinh so
// large arguments never overflow:
//   psi = sqrt(T) exp((r - eta) T / 2) / sqrt(D), eta = sqrt(r^2 + theta^2),
//   D = (theta^2/eta^4)[r (1-q)^2 + eta (1-q^2)/2]
//     + (r^2 T/eta^3)[eta (1+q^2)/2 + r (1-q^2)/2].
template <class T>
T psi_ou(const T& theta_sq, double r, double horizon) {
    if (!(r > 0.0)) throw std::invalid_argument("psi_ou: r must be > 0");
    if (constant_term(theta_sq) < 0.0)
        throw std::domain_error("psi_ou: negative theta^2");
    using std::exp;
    using std::sqrt;
    const double t = horizon;
    T eta2 = theta_sq + r * r;
    T eta = sqrt(eta2);
    T q = exp(-t * eta);
    T q2 = q * q;
    T one_m = 1.0 - q;
    T d = (theta_sq / (eta2 * eta2)) * (r * (one_m * one_m) + 0.5 * (eta * (1.0 - q2))) +
          ((r * r * t) / (eta2 * eta)) * (0.5 * (eta * (1.0 + q2)) + (0.5 * r) * (1.0 - q2));
    return sqrt(t) * exp((0.5 * t) * (r - eta)) / sqrt(d);
}

// Brownian bridge on [0,1]: psi(theta^2) = theta / (2 sinh(theta/2)).
template <class T>
T psi_bb(const T& theta_sq) {
    if (constant_term(theta_sq) < 0.0)
        throw std::domain_error("psi_bb: negative theta^2");
    using std::exp;
    return exp(-log_sinhc_sqrt(theta_sq * 0.25));
}

namespace detail {

// G(a, b) = (cosh sqrt a - cosh sqrt b) / (a - b) for a >= b >= 0, extended
// continuously. Entire and symmetric in (a, b), so it only needs the
// polynomial invariants sigma1 = a + b, sigma2 = a b:
//   G = sum_{n>=0} h_n(sigma1, sigma2) / (2n+2)!,  h_n = complete homogeneous.
// The series is used for small a; the direct ratio otherwise. This keeps the
// whole MGF smooth in (tr S, det S) with no eigenvalue branch.
template <class T>
T pair_cosh_ratio(const T& a, const T& b) {
    const double a0 = constant_term(a);
    if (a0 < 25.0) {
        T sig1 = a + b;
        T sig2 = a * b;
        T total = same_shape_constant(a, 0.5);
        T h_prev = same_shape_constant(a, 1.0);
        T h_curr = sig1;
        double fact = 24.0;  // (2*1+2)!
        total += h_curr / fact;
        for (int n = 2; n <= 40; ++n) {
            T h_next = sig1 * h_curr - sig2 * h_prev;
            fact *= (2 * n + 1) * (2 * n + 2);
            T term = h_next / fact;
            total += term;
            h_prev = h_curr;
            h_curr = h_next;
            if (std::abs(constant_term(term)) <= 1e-19 * std::abs(constant_term(total)) && n > 5)
                break;
        }
        return total;
    }
    const double b0 = constant_term(b);
    if constexpr (std::is_same_v<T, double>) {
        const double m = 0.5 * (a0 + b0);
        if (std::abs(a0 - b0) <= 3e-6 * std::sqrt(m))
            return 0.5 * sinhc_sqrt(m);  // midpoint limit, error O((a-b)^2/m)
    } else {
        if (a0 - b0 <= 0.0)
            throw std::domain_error("pair_cosh_ratio: jet evaluation needs det S > 0");
    }
    return (cosh_sqrt(a) - cosh_sqrt(b)) / (a - b);
}

// phi for independent Brownian components from the invariants s = tr S,
// p = det S:  phi^{-2} = 2 G(scale (s + 2 sqrt p), scale (s - 2 sqrt p)).
template <class T>
T phi_bm_from_invariants(const T& s, const T& p, double scale) {
    using std::exp;
    using std::log;
    using std::sqrt;
    T pp = p;
    if constexpr (std::is_same_v<T, double>) {
        if (pp < 0.0) pp = 0.0;  // PSD boundary roundoff
    }
    T q = sqrt(pp);  // jets need det S > 0 (interior of the quadrant)
    T g = pair_cosh_ratio(scale * (s + 2.0 * q), scale * (s - 2.0 * q));
    return exp(-0.5 * log(2.0 * g));
}

// Same invariant construction for the bridge; the product over eigenvalues of
// sinh(theta/2)/(theta/2) gives phi^{-1} = 2 G((s + 2 sqrt p)/4, (s - 2 sqrt p)/4).
template <class T>
T phi_bb_from_invariants(const T& s, const T& p) {
    using std::sqrt;
    T pp = p;
    if constexpr (std::is_same_v<T, double>) {
        if (pp < 0.0) pp = 0.0;
    }
    T q = sqrt(pp);
    T g = pair_cosh_ratio(0.25 * (s + 2.0 * q), 0.25 * (s - 2.0 * q));
    return 1.0 / (2.0 * g);
}

// OU pair product. With eta_i^2 = r^2 + x_i at the two eigenvalues x_i of S,
// psi(x)^{-2} = N(x) e^{-rT} / (T eta^4) where N is entire:
//   N(x) = Ch(x) alpha(x) + S(x) beta(x) + gamma(x),
//   Ch = cosh(eta T), S = sinh(eta T)/(eta T) pulled back to even arguments,
//   alpha = r^4 T + (r^2 T + 2 r) x, beta = T(r^2+x)(x + r^3 T), gamma = -2 r x.
// The symmetric product N(x1) N(x2) is assembled from pair primitives that are
// smooth functions of (s, p) via Sigma+- = T^2 (eta1 +- eta2)^2.
template <class T>
T phi_ou_from_invariants(const T& s, const T& p, double r, double horizon) {
    using std::sqrt;
    const double t = horizon;
    const double t2 = t * t;

    T rp = r * r * s + p + (r * r * r * r);  // eta1^2 eta2^2
    T q = sqrt(rp);
    T sig_p = t2 * (s + 2.0 * q + 2.0 * r * r);  // T^2 (eta1+eta2)^2
    T disc = s * s - 4.0 * p;                    // (x1 - x2)^2
    if constexpr (std::is_same_v<T, double>) {
        if (disc < 0.0) disc = 0.0;  // roundoff near s11 = s22
    }
    T sig_m = (t2 * t2) * (disc / sig_p);  // T^2 (eta1-eta2)^2

    T chp = cosh_sqrt(sig_p), chm = cosh_sqrt(sig_m);
    T scp = sinhc_sqrt(sig_p), scm = sinhc_sqrt(sig_m);
    T chp4 = cosh_sqrt(0.25 * sig_p), chm4 = cosh_sqrt(0.25 * sig_m);
    T scp4 = sinhc_sqrt(0.25 * sig_p), scm4 = sinhc_sqrt(0.25 * sig_m);

    T inv_2q = 1.0 / (2.0 * q);
    T inv_2qt2 = inv_2q / t2;

    T pcc = 0.5 * (chp + chm);                       // Ch1 Ch2
    T pss = (chp - chm) * inv_2qt2;                  // S1 S2
    T pc = 2.0 * (chp4 * chm4);                      // Ch1 + Ch2
    T dc = (0.5 * t2) * (scp4 * scm4);               // (Ch1 - Ch2)/(x1 - x2)
    T ps = (sig_p * (scp4 * chm4) - sig_m * (chp4 * scm4)) * inv_2qt2;  // S1 + S2
    T ds = (chp4 * scm4 - scp4 * chm4) * inv_2q;     // (S1 - S2)/(x1 - x2)
    T pcs = (sig_p * scp - sig_m * scm) * inv_2qt2;  // Ch1 S2 + Ch2 S1
    T dcs = (scm - scp) * inv_2q;                    // (S1 Ch2 - S2 Ch1)/(x1 - x2)

    // N(x) = Ch(x) alpha(x) + S(x) beta(x) + gamma(x) with polynomial weights
    const double al0 = r * r * r * r * t, al1 = r * r * t + 2.0 * r;
    const double be0 = r * r * r * r * r * t2, be1 = t * (r * r + r * r * r * t), be2 = t;
    const double ga1 = -2.0 * r;

    // symmetric polynomial tables: m_ab = x1^a x2^b + x1^b x2^a
    T m02 = s * s - 2.0 * p;
    T m12 = p * s;
    T m22 = 2.0 * (p * p);

    // sym(u,v) = u(x1) v(x2) + u(x2) v(x1)
    T sym_aa = (2.0 * al0 * al1) * s + (2.0 * al1 * al1) * p + 2.0 * al0 * al0;
    T sym_bb = (2.0 * be0 * be1) * s + (2.0 * be1 * be1) * p + (2.0 * be0 * be2) * m02 +
               (2.0 * be1 * be2) * m12 + (be2 * be2) * m22 + 2.0 * be0 * be0;
    T sym_gg = (2.0 * ga1 * ga1) * p;
    T sym_ab = (al0 * be1 + al1 * be0) * s + (2.0 * al1 * be1) * p + (al0 * be2) * m02 +
               (al1 * be2) * m12 + 2.0 * al0 * be0;
    T sym_ag = (al0 * ga1) * s + (2.0 * al1 * ga1) * p;
    T sym_bg = (be0 * ga1) * s + (2.0 * be1 * ga1) * p + (be2 * ga1) * m12;

    // div(u,v) = (u(x1) v(x2) - u(x2) v(x1))/(x1 - x2)
    //          = (u1 v0 - u0 v1) + (u2 v0 - u0 v2) s + (u2 v1 - u1 v2) p
    T div_ab = (-al0 * be2) * s + (-al1 * be2) * p + (al1 * be0 - al0 * be1);
    const double div_ag = -al0 * ga1;
    T div_bg = (be2 * ga1) * p + (-be0 * ga1);

    T n1n2 = 0.5 * (sym_aa * pcc) + 0.5 * (sym_bb * pss) + 0.5 * sym_gg;
    n1n2 += 0.5 * (sym_ab * pcs) - 0.5 * (disc * (div_ab * dcs));
    n1n2 += 0.5 * (sym_ag * pc) + (0.5 * div_ag) * (disc * dc);
    n1n2 += 0.5 * (sym_bg * ps) + 0.5 * (disc * (div_bg * ds));

    return (t * std::exp(r * t)) * (rp / sqrt(n1n2));
}

}  // namespace detail

// Joint MGF phi(S) = E exp(-1/2 sum s_ij Y_ij) of the centered quadratic
// functionals. Works on scalars and on jets in any single entry; evaluation
// goes through the matrix invariants so it is smooth across s11 = s22.
template <class T>
T phi(const ProcessSpec& spec, const SymMatrix2<T>& S) {
    spec.validate();
    T s = S.s11 + S.s22;
    T p = S.s11 * S.s22 - S.s12 * S.s12;
    switch (spec.kind) {
        case ProcessKind::Bm:
            return detail::phi_bm_from_invariants(s, p, spec.horizon * spec.horizon);
        case ProcessKind::Bb:
            return detail::phi_bb_from_invariants(s, p);
        case ProcessKind::Ou:
            return detail::phi_ou_from_invariants(s, p, spec.r, spec.horizon);
        case ProcessKind::CorrelatedBm: {
            T sc = s + 2.0 * (spec.c * S.s12);
            T pc = (1.0 - spec.c * spec.c) * p;
            return detail::phi_bm_from_invariants(sc, pc, spec.horizon * spec.horizon);
        }
    }
    throw std::logic_error("phi: unknown process kind");
}

// Jet of phi(s11, s12, s22) in s12 around s12 = 0, order k. This is the
// object Proposition-style moment formulas differentiate.
inline Jet phi_s12_jet(const ProcessSpec& spec, double s11, double s22, int order) {
    SymMatrix2<Jet> S{Jet::constant(s11, order), Jet::variable(0.0, order),
                      Jet::constant(s22, order)};
    return phi(spec, S);
}

}  // namespace yule
