#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace yule {

// Truncated univariate Taylor series of fixed order K: value plus the first K
// derivatives in one perturbation direction, stored as raw Taylor coefficients
// c_0..c_K (the k-th derivative is k! * c_k). All arithmetic is exact ring
// truncation; transcendental functions use the standard ODE recurrences.
class Jet {
public:
    Jet() : c_(1, 0.0) {}

    static Jet constant(double x, int order) {
        if (order < 0) throw std::invalid_argument("Jet: order must be >= 0");
        Jet j;
        j.c_.assign(static_cast<std::size_t>(order) + 1, 0.0);
        j.c_[0] = x;
        return j;
    }

    // Seed of the perturbation variable: x + eps. Needs at least one
    // derivative slot.
    static Jet variable(double x, int order) {
        if (order < 1) throw std::invalid_argument("Jet: variable needs order >= 1");
        Jet j = constant(x, order);
        j.c_[1] = 1.0;
        return j;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double value() const { return c_[0]; }

    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    // k-th derivative at the expansion point, k! * c_k.
    double derivative(int k) const {
        if (k > order()) return 0.0;
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return c_[static_cast<std::size_t>(k)] * f;
    }

    // First J+1 coefficients as a lower-order jet.
    Jet truncated(int J) const {
        if (J < 0 || J > order()) throw std::invalid_argument("Jet: bad truncation order");
        Jet j;
        j.c_.assign(c_.begin(), c_.begin() + J + 1);
        return j;
    }

    bool all_finite() const {
        for (double x : c_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    Jet& operator+=(const Jet& b) {
        check_order(b);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& b) {
        check_order(b);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
        return *this;
    }
    Jet& operator+=(double x) { c_[0] += x; return *this; }
    Jet& operator-=(double x) { c_[0] -= x; return *this; }
    Jet& operator*=(double x) {
        for (double& v : c_) v *= x;
        return *this;
    }
    Jet& operator/=(double x) { return (*this) *= 1.0 / x; }

    friend Jet operator-(const Jet& a) {
        Jet r = a;
        for (double& v : r.c_) v = -v;
        return r;
    }
    friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
    friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
    friend Jet operator+(Jet a, double x) { a += x; return a; }
    friend Jet operator+(double x, Jet a) { a += x; return a; }
    friend Jet operator-(Jet a, double x) { a -= x; return a; }
    friend Jet operator-(double x, const Jet& a) { return -a + x; }
    friend Jet operator*(Jet a, double x) { a *= x; return a; }
    friend Jet operator*(double x, Jet a) { a *= x; return a; }
    friend Jet operator/(Jet a, double x) { a /= x; return a; }

    // Cauchy product truncated at the common order.
    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_order(b);
        const int n = a.order();
        Jet r = constant(0.0, n);
        for (int i = 0; i <= n; ++i) {
            double s = 0.0;
            for (int j = 0; j <= i; ++j) s += a.c_[j] * b.c_[i - j];
            r.c_[i] = s;
        }
        return r;
    }

    // Convolution inversion: c_i = (a_i - sum_{j<i} c_j b_{i-j}) / b_0.
    friend Jet operator/(const Jet& a, const Jet& b) {
        a.check_order(b);
        if (b.c_[0] == 0.0)
            throw std::domain_error("Jet division: zero constant term");
        const int n = a.order();
        Jet r = constant(0.0, n);
        for (int i = 0; i <= n; ++i) {
            double s = a.c_[static_cast<std::size_t>(i)];
            for (int j = 0; j < i; ++j) s -= r.c_[j] * b.c_[i - j];
            r.c_[i] = s / b.c_[0];
        }
        return r;
    }
    friend Jet operator/(double x, const Jet& b) {
        return constant(x, b.order()) / b;
    }

    friend Jet sqrt(const Jet& a) {
        if (a.c_[0] <= 0.0)
            throw std::domain_error("Jet sqrt: nonpositive constant term");
        const int n = a.order();
        Jet r = constant(0.0, n);
        r.c_[0] = std::sqrt(a.c_[0]);
        for (int i = 1; i <= n; ++i) {
            double s = a.c_[static_cast<std::size_t>(i)];
            for (int j = 1; j < i; ++j) s -= r.c_[j] * r.c_[i - j];
            r.c_[i] = s / (2.0 * r.c_[0]);
        }
        return r;
    }

    friend Jet exp(const Jet& a) {
        const int n = a.order();
        Jet r = constant(0.0, n);
        r.c_[0] = std::exp(a.c_[0]);
        for (int i = 1; i <= n; ++i) {
            double s = 0.0;
            for (int j = 1; j <= i; ++j) s += j * a.c_[j] * r.c_[i - j];
            r.c_[i] = s / i;
        }
        return r;
    }

    friend Jet log(const Jet& a) {
        if (a.c_[0] <= 0.0)
            throw std::domain_error("Jet log: nonpositive constant term");
        const int n = a.order();
        Jet r = constant(0.0, n);
        r.c_[0] = std::log(a.c_[0]);
        for (int i = 1; i <= n; ++i) {
            double s = a.c_[static_cast<std::size_t>(i)];
            for (int j = 1; j < i; ++j) s -= (static_cast<double>(j) / i) * r.c_[j] * a.c_[i - j];
            r.c_[i] = s / a.c_[0];
        }
        return r;
    }

    // sinh and cosh propagate jointly through s' = a' c, c' = a' s.
    friend Jet sinh(const Jet& a) { return sinh_cosh(a).first; }
    friend Jet cosh(const Jet& a) { return sinh_cosh(a).second; }

    friend std::pair<Jet, Jet> sinh_cosh(const Jet& a) {
        const int n = a.order();
        Jet s = constant(0.0, n), c = constant(0.0, n);
        s.c_[0] = std::sinh(a.c_[0]);
        c.c_[0] = std::cosh(a.c_[0]);
        for (int i = 1; i <= n; ++i) {
            double ss = 0.0, cc = 0.0;
            for (int j = 1; j <= i; ++j) {
                ss += j * a.c_[j] * c.c_[i - j];
                cc += j * a.c_[j] * s.c_[i - j];
            }
            s.c_[i] = ss / i;
            c.c_[i] = cc / i;
        }
        return {s, c};
    }

private:
    void check_order(const Jet& b) const {
        if (c_.size() != b.c_.size())
            throw std::invalid_argument("Jet: mismatched orders");
    }
    std::vector<double> c_;
};

template <std::floating_point F>
double constant_term(F x) { return static_cast<double>(x); }
inline double constant_term(const Jet& j) { return j.value(); }

// Builds a constant with the same order as a prototype value. Lets scalar and
// jet code share one template body.
template <std::floating_point F>
F same_shape_constant(F /*proto*/, double x) { return static_cast<F>(x); }
inline Jet same_shape_constant(const Jet& proto, double x) {
    return Jet::constant(x, proto.order());
}

// sinh(x)/x with the removable singularity at 0 handled by an 8-term even
// series below |x0| = 1e-3; both branches agree to ~1e-12 at the seam.
template <std::floating_point F>
F sinhc(F x) {
    if (std::abs(x) < F(1e-3)) {
        const F y = x * x;
        F term = 1, sum = 1;
        for (int n = 1; n < 8; ++n) {
            term *= y / ((2 * n) * (2 * n + 1));
            sum += term;
        }
        return sum;
    }
    return std::sinh(x) / x;
}

inline Jet sinhc(const Jet& a) {
    if (std::abs(a.value()) < 1e-3) {
        const Jet y = a * a;
        Jet term = same_shape_constant(a, 1.0);
        Jet sum = term;
        for (int n = 1; n < 8; ++n) {
            term = term * y / static_cast<double>((2 * n) * (2 * n + 1));
            sum += term;
        }
        return sum;
    }
    return sinh(a) / a;
}

namespace detail {

// Scalar Taylor coefficients of g at y0 composed with the jet tail of y.
// taylor[m] = g^(m)(y0)/m!.
inline Jet compose_local_taylor(const Jet& y, const std::vector<double>& taylor) {
    Jet delta = y;
    delta[0] = 0.0;
    const int n = y.order();
    Jet r = Jet::constant(taylor[static_cast<std::size_t>(n)], n);
    for (int m = n - 1; m >= 0; --m) {
        r = r * delta;
        r[0] += taylor[static_cast<std::size_t>(m)];
    }
    return r;
}

// Derivatives of cosh(sqrt y) via 4y g'' + 2g' - g = 0, or of sinh(sqrt y)/sqrt y
// via 4y g'' + 6g' - g = 0. Both fundamental solutions have comparable size, so
// the forward recurrence is well conditioned for y0 away from 0.
inline std::vector<double> even_kernel_taylor(double y0, int order, bool cosh_kind) {
    std::vector<double> g(static_cast<std::size_t>(order) + 3, 0.0);
    const double rx = std::sqrt(y0);
    if (cosh_kind) {
        g[0] = std::cosh(rx);
        g[1] = std::sinh(rx) / (2.0 * rx);
    } else {
        g[0] = std::sinh(rx) / rx;
        g[1] = (std::cosh(rx) - g[0]) / (2.0 * y0);
    }
    const double shift = cosh_kind ? 2.0 : 6.0;
    for (int m = 0; m <= order; ++m)
        g[m + 2] = (g[m] - (4.0 * m + shift) * g[m + 1]) / (4.0 * y0);
    std::vector<double> t(static_cast<std::size_t>(order) + 1);
    double fact = 1.0;
    for (int m = 0; m <= order; ++m) {
        t[static_cast<std::size_t>(m)] = g[static_cast<std::size_t>(m)] / fact;
        fact *= (m + 1);
    }
    return t;
}

// Entire-series evaluation sum_n y^n / denom(n), denom = (2n)! or (2n+1)!.
inline Jet even_kernel_series(const Jet& y, bool cosh_kind) {
    Jet total = same_shape_constant(y, 1.0);
    Jet term = total;
    int n = 0;
    int extra = -1;
    while (true) {
        const double d = cosh_kind
            ? static_cast<double>((2 * n + 1) * (2 * n + 2))
            : static_cast<double>((2 * n + 2) * (2 * n + 3));
        term = term * y / d;
        total += term;
        ++n;
        if (extra < 0 && n > 3 &&
            std::abs(term.value()) <= 1e-19 * std::abs(total.value()))
            extra = 6;  // a few more terms for the higher coefficients
        if (extra == 0 || n > 900) break;
        if (extra > 0) --extra;
    }
    return total;
}

constexpr double kEvenKernelSwitch = 400.0;

}  // namespace detail

// cosh(sqrt y): entire in y, so jets stay regular across y0 = 0. Series from
// zero below the switch point, local Taylor composition above it.
inline double cosh_sqrt(double y) { return std::cosh(std::sqrt(y)); }
inline Jet cosh_sqrt(const Jet& y) {
    if (y.value() < detail::kEvenKernelSwitch) return detail::even_kernel_series(y, true);
    return detail::compose_local_taylor(y, detail::even_kernel_taylor(y.value(), y.order(), true));
}

// sinh(sqrt y)/sqrt y, entire in y.
inline double sinhc_sqrt(double y) {
    if (y < 1e-6) return 1.0 + y / 6.0 + y * y / 120.0;
    const double r = std::sqrt(y);
    return std::sinh(r) / r;
}
inline Jet sinhc_sqrt(const Jet& y) {
    if (y.value() < detail::kEvenKernelSwitch) return detail::even_kernel_series(y, false);
    return detail::compose_local_taylor(y, detail::even_kernel_taylor(y.value(), y.order(), false));
}

// log(sinh(sqrt y)/sqrt y). For very large arguments sinh overflows, so switch
// to x - log 2 + log(1 - e^{-2x}) - log x.
inline double log_sinhc_sqrt(double y) {
    if (y < 3.6e5) return std::log(sinhc_sqrt(y));
    const double x = std::sqrt(y);
    return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x)) - std::log(x);
}
inline Jet log_sinhc_sqrt(const Jet& y) {
    if (y.value() < 3.6e5) return log(sinhc_sqrt(y));
    const Jet x = sqrt(y);
    return x - std::log(2.0) + log(1.0 - exp(-2.0 * x)) - log(x);
}

}  // namespace yule
