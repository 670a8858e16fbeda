#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fd_util.hpp"
#include "yule/jet.hpp"

using yule::Jet;

namespace {

Jet random_jet(std::mt19937_64& rng, int order, double lo, double hi) {
    std::uniform_real_distribution<double> head(lo, hi);
    std::uniform_real_distribution<double> tail(-1.0, 1.0);
    Jet j = Jet::constant(head(rng), order);
    for (int i = 1; i <= order; ++i) j[i] = tail(rng);
    return j;
}

double eval_poly(const Jet& j, double eps) {
    double r = 0.0;
    for (int i = j.order(); i >= 0; --i) r = r * eps + j[i];
    return r;
}

// Checks jet coefficients of op(a) against finite differences of the scalar
// composition eps -> op(a(eps)).
void check_against_fd(const Jet& result, const std::function<double(double)>& scalar,
                      int max_order, double tol, double h = 0.15) {
    for (int i = 0; i <= max_order; ++i) {
        const double want = i == 0 ? scalar(0.0) : fd_derivative(scalar, i, h);
        double fact = 1.0;
        for (int m = 2; m <= i; ++m) fact *= m;
        CAPTURE(i);
        CHECK(rel_err(result[i] * fact, want) < tol);
    }
}

}  // namespace

TEST_CASE("constant and variable seeds") {
    const Jet c = Jet::constant(5.0, 2);
    CHECK(c[0] == 5.0);
    CHECK(c[1] == 0.0);
    CHECK(c[2] == 0.0);

    const Jet z = Jet::constant(0.0, 0);
    CHECK(z.order() == 0);
    CHECK(z[0] == 0.0);

    const Jet one = Jet::constant(1.0, 16);
    CHECK(one.order() == 16);
    for (int i = 1; i <= 16; ++i) CHECK(one[i] == 0.0);

    const Jet v = Jet::variable(0.0, 2);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 1.0);
    CHECK(v[2] == 0.0);

    const Jet v2 = Jet::variable(3.0, 1);
    CHECK(v2[0] == 3.0);
    CHECK(v2[1] == 1.0);

    const Jet v3 = Jet::variable(0.0, 16);
    CHECK(v3[1] == 1.0);
    for (int i = 2; i <= 16; ++i) CHECK(v3[i] == 0.0);

    CHECK_THROWS_AS(Jet::variable(0.0, 0), std::invalid_argument);
}

TEST_CASE("ring operations") {
    Jet a = Jet::constant(1.0, 2);
    a[1] = 1.0;
    const Jet sq = a * a;  // (1+eps)^2
    CHECK(sq[0] == 1.0);
    CHECK(sq[1] == 2.0);
    CHECK(sq[2] == 1.0);

    const Jet inv = Jet::constant(1.0, 2) / a;  // geometric series
    CHECK(inv[0] == doctest::Approx(1.0));
    CHECK(inv[1] == doctest::Approx(-1.0));
    CHECK(inv[2] == doctest::Approx(1.0));

    CHECK_THROWS_AS(Jet::constant(1.0, 2) / Jet::variable(0.0, 2), std::domain_error);
    CHECK_THROWS_AS(Jet::constant(1.0, 2) + Jet::constant(1.0, 3), std::invalid_argument);
}

TEST_CASE("mul/div round trip on random jets") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 200; ++rep) {
        const int order = 1 + static_cast<int>(rng() % 10);
        const Jet a = random_jet(rng, order, -2.0, 2.0);
        Jet b = random_jet(rng, order, 0.5, 2.0);
        if (rng() & 1) b = -b;  // nonzero constant term of either sign
        const Jet r = a * b / b;
        for (int i = 0; i <= order; ++i) CHECK(std::abs(r[i] - a[i]) < 1e-12);
    }
}

TEST_CASE("sqrt") {
    const Jet four = Jet::constant(4.0, 2);
    const Jet r = sqrt(four);
    CHECK(r[0] == 2.0);
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 0.0);

    Jet s = Jet::constant(1.0, 2);
    s[1] = 2.0;
    s[2] = 1.0;
    const Jet rs = sqrt(s);  // sqrt((1+eps)^2) = 1 + eps
    CHECK(rs[0] == doctest::Approx(1.0));
    CHECK(rs[1] == doctest::Approx(1.0));
    CHECK(rs[2] == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(sqrt(Jet::constant(-1.0, 2)), std::domain_error);
    CHECK_THROWS_AS(sqrt(Jet::variable(0.0, 2)), std::domain_error);

    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const Jet a = random_jet(rng, 6, 0.5, 3.0);
        const Jet res = sqrt(a);
        check_against_fd(res, [&](double e) { return std::sqrt(eval_poly(a, e)); }, 3, 1e-7,
                         0.05);
        const Jet back = res * res;
        for (int i = 0; i <= 6; ++i) CHECK(std::abs(back[i] - a[i]) < 1e-12);
    }
}

TEST_CASE("transcendental ops match Maclaurin examples") {
    const Jet s = sinh(Jet::variable(0.0, 3));
    CHECK(s[0] == doctest::Approx(0.0));
    CHECK(s[1] == doctest::Approx(1.0));
    CHECK(s[2] == doctest::Approx(0.0));
    CHECK(s[3] == doctest::Approx(1.0 / 6.0));

    const Jet c = cosh(Jet::variable(0.0, 2));
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(0.0));
    CHECK(c[2] == doctest::Approx(0.5));

    CHECK_THROWS_AS(log(Jet::constant(0.0, 2)), std::domain_error);
    CHECK_THROWS_AS(log(Jet::constant(-2.0, 2)), std::domain_error);
}

TEST_CASE("exp(log(a)) round trip") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 100; ++rep) {
        const int order = 1 + static_cast<int>(rng() % 8);
        const Jet a = random_jet(rng, order, 0.2, 4.0);
        const Jet r = exp(log(a));
        for (int i = 0; i <= order; ++i)
            CHECK(std::abs(r[i] - a[i]) < 1e-12 * std::max(1.0, std::abs(a[i])));
    }
}

TEST_CASE("elementary ops match finite differences on random inputs") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 30; ++rep) {
        const Jet a = random_jet(rng, 6, 0.6, 2.0);
        check_against_fd(exp(a), [&](double e) { return std::exp(eval_poly(a, e)); }, 6, 1e-6);
        check_against_fd(log(a), [&](double e) { return std::log(eval_poly(a, e)); }, 6, 1e-6);
        check_against_fd(sinh(a), [&](double e) { return std::sinh(eval_poly(a, e)); }, 6, 1e-6);
        check_against_fd(cosh(a), [&](double e) { return std::cosh(eval_poly(a, e)); }, 6, 1e-6);
        const Jet b = random_jet(rng, 6, 0.5, 2.0);
        check_against_fd(a / b,
                         [&](double e) { return eval_poly(a, e) / eval_poly(b, e); }, 6, 1e-6);
    }
}

TEST_CASE("higher-order coefficients within the looser tolerance") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const Jet a = random_jet(rng, 10, 0.8, 1.6);
        check_against_fd(exp(a), [&](double e) { return std::exp(eval_poly(a, e)); }, 10, 1e-4,
                         0.35);
    }
}

TEST_CASE("sinhc") {
    const Jet s = yule::sinhc(Jet::variable(0.0, 2));
    CHECK(s[0] == doctest::Approx(1.0));
    CHECK(s[1] == doctest::Approx(0.0));
    CHECK(s[2] == doctest::Approx(1.0 / 6.0));

    CHECK(yule::sinhc(1.0) == doctest::Approx(1.1752011936438014).epsilon(1e-12));

    // branch continuity at the switch threshold
    for (double x0 : {1e-3, -1e-3}) {
        Jet a = Jet::variable(x0, 4);
        const Jet series = [&] {
            const Jet y = a * a;
            Jet term = Jet::constant(1.0, 4), sum = term;
            for (int n = 1; n < 8; ++n) {
                term = term * y / static_cast<double>((2 * n) * (2 * n + 1));
                sum += term;
            }
            return sum;
        }();
        const Jet direct = sinh(a) / a;
        for (int i = 0; i <= 4; ++i) CHECK(std::abs(series[i] - direct[i]) < 1e-12);
    }
}

TEST_CASE("even kernels: cosh_sqrt and sinhc_sqrt") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        const Jet y = random_jet(rng, 6, 0.3, 30.0);
        check_against_fd(yule::cosh_sqrt(y),
                         [&](double e) { return std::cosh(std::sqrt(eval_poly(y, e))); }, 6,
                         1e-6, 0.05);
        check_against_fd(yule::sinhc_sqrt(y),
                         [&](double e) {
                             const double v = eval_poly(y, e);
                             return std::sinh(std::sqrt(v)) / std::sqrt(v);
                         },
                         6, 1e-6, 0.05);
    }

    // regular across y0 = 0: negative constant terms mean cos/sinc territory
    Jet y0 = Jet::variable(0.0, 4);
    const Jet ch = yule::cosh_sqrt(y0);
    CHECK(ch[0] == doctest::Approx(1.0));
    CHECK(ch[1] == doctest::Approx(0.5));
    CHECK(ch[2] == doctest::Approx(1.0 / 24.0));

    // series and local-Taylor branches agree at the seam
    for (double seam : {390.0, 410.0}) {
        Jet y = Jet::variable(seam, 8);
        const Jet a = yule::detail::even_kernel_series(y, true);
        const Jet b = yule::detail::compose_local_taylor(
            y, yule::detail::even_kernel_taylor(seam, 8, true));
        for (int i = 0; i <= 8; ++i)
            CHECK(std::abs(a[i] - b[i]) < 1e-11 * std::max(1.0, std::abs(a[i])));
        const Jet as = yule::detail::even_kernel_series(y, false);
        const Jet bs = yule::detail::compose_local_taylor(
            y, yule::detail::even_kernel_taylor(seam, 8, false));
        for (int i = 0; i <= 8; ++i)
            CHECK(std::abs(as[i] - bs[i]) < 1e-11 * std::max(1.0, std::abs(as[i])));
    }
}

TEST_CASE("log_sinhc_sqrt large-argument branch") {
    // seam between direct log and the overflow-safe form
    for (double y0 : {3.5e5, 3.7e5}) {
        const double direct = std::log(std::sinh(std::sqrt(y0)) / std::sqrt(y0));
        CHECK(rel_err(yule::log_sinhc_sqrt(y0), direct) < 1e-12);
    }
    // far beyond sinh overflow the log form stays finite
    const double huge = 1e8;  // sqrt = 1e4
    const double expect = 1e4 - std::log(2.0) - std::log(1e4);
    CHECK(rel_err(yule::log_sinhc_sqrt(huge), expect) < 1e-12);

    Jet y = Jet::variable(4.0e5, 4);
    const Jet a = yule::log_sinhc_sqrt(y);
    check_against_fd(a,
                     [&](double e) {
                         const double v = eval_poly(y, e);
                         const double x = std::sqrt(v);
                         return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x)) -
                                std::log(x);
                     },
                     4, 1e-7, 0.05);
}

TEST_CASE("truncation consistency") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const Jet a = random_jet(rng, 10, 0.5, 2.0);
        const Jet b = random_jet(rng, 10, 0.5, 2.0);
        const int j = 2 + static_cast<int>(rng() % 8);
        // ring ops truncate bitwise
        const Jet full = a * b;
        const Jet cut = a.truncated(j) * b.truncated(j);
        for (int i = 0; i <= j; ++i) CHECK(full[i] == cut[i]);
        // transcendental ops agree to rounding
        const Jet efull = exp(a);
        const Jet ecut = exp(a.truncated(j));
        for (int i = 0; i <= j; ++i)
            CHECK(std::abs(efull[i] - ecut[i]) < 1e-14 * std::max(1.0, std::abs(efull[i])));
    }
}

TEST_CASE("finite outputs on valid inputs") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const Jet a = random_jet(rng, 8, 0.2, 5.0);
        const Jet b = random_jet(rng, 8, 0.2, 5.0);
        CHECK((a + b).all_finite());
        CHECK((a - b).all_finite());
        CHECK((a * b).all_finite());
        CHECK((a / b).all_finite());
        CHECK(sqrt(a).all_finite());
        CHECK(exp(a).all_finite());
        CHECK(log(a).all_finite());
        CHECK(sinh(a).all_finite());
        CHECK(cosh(a).all_finite());
        CHECK(yule::sinhc(a).all_finite());
    }
}
