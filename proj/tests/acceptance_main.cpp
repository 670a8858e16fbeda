// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Runs the full reference workload, so expect tens of minutes.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fd_util.hpp"
#include "yule/density.hpp"
#include "yule/mgf.hpp"
#include "yule/moments.hpp"
#include "yule/montecarlo.hpp"
#include "yule/riccati.hpp"

using yule::ProcessSpec;

namespace {

int failures = 0;
std::vector<std::string> notes;

void note(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    notes.emplace_back(buf);
}

void criterion(int id, const char* label, const std::function<bool()>& body) {
    notes.clear();
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note("exception: %s", e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("CRITERION %2d [%s]: %s  (%.1fs)\n", id, label, ok ? "PASS" : "FAIL", secs);
    for (const auto& n : notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

bool check_moment_table(const ProcessSpec& spec, const std::vector<int>& orders,
                        const std::vector<double>& expect, double tol) {
    bool ok = true;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        const double got = yule::moment(spec, orders[i]).value;
        const double dev = std::abs(got - expect[i]);
        note("%s k=%-2d  got %.6f  want %.6f  |dev| %.2e", spec.name().c_str(), orders[i],
             got, expect[i], dev);
        ok = ok && dev < tol;
    }
    return ok;
}

double max_oracle_dev(const ProcessSpec& spec, int steps) {
    const yule::LinearSDE sde = yule::make_linear_sde(spec);
    double max_dev = 0.0;
    for (double s11 : {0.4, 0.9, 1.7, 2.8, 4.5})
        for (double s22 : {0.4, 0.9, 1.7, 2.8, 4.5})
            for (double f : {-0.55, 0.0, 0.55}) {
                const double s12 = f * std::sqrt(s11 * s22);
                const double closed =
                    yule::phi(spec, yule::SymMatrix2<double>{s11, s12, s22});
                Eigen::Matrix2d S;
                S << s11, s12, s12, s22;
                max_dev =
                    std::max(max_dev, std::abs(closed - yule::mgf_via_mixing(sde, S, 0, steps)));
            }
    return max_dev;
}

bool mc_covers(const yule::SimConfig& cfg, const std::vector<int>& orders,
               const std::vector<double>& expect) {
    const auto est = yule::estimate_moments(cfg, orders);
    bool ok = true;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double dev = std::abs(est[i].estimate - expect[i]);
        const bool hit = dev <= 3.0 * est[i].std_error;
        note("%s k=%-2d  mc %.5f  want %.5f  |dev| %.1e  3se %.1e  %s",
             cfg.spec.name().c_str(), est[i].k, est[i].estimate, expect[i], dev,
             3.0 * est[i].std_error, hit ? "ok" : "MISS");
        ok = ok && hit;
    }
    return ok;
}

double eval_poly_jet(const yule::Jet& j, double eps) {
    double r = 0.0;
    for (int i = j.order(); i >= 0; --i) r = r * eps + j[i];
    return r;
}

}  // namespace

int main() {
    criterion(1, "Brownian moment table k=2..16", [] {
        return check_moment_table(
            ProcessSpec::bm(), {2, 4, 6, 8, 10, 12, 14, 16},
            {0.240523, 0.109177, 0.060862, 0.037788, 0.025114, 0.017504, 0.012641, 0.009385},
            1e-4);
    });

    criterion(2, "OU second-moment table", [] {
        const std::vector<double> rs{0.1, 0.5, 1.0, 2.0, 10.0, 100.0};
        const std::vector<double> want{0.23209, 0.20504, 0.18231, 0.15583, 0.07627, 0.00971};
        bool ok = true;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const double got = yule::moment(ProcessSpec::ou(rs[i]), 2).value;
            const double dev = std::abs(got - want[i]);
            note("ou r=%-5g got %.6f want %.5f |dev| %.2e", rs[i], got, want[i], dev);
            ok = ok && dev < 1e-4;
        }
        return ok;
    });

    criterion(3, "bridge moment table k=2..8", [] {
        return check_moment_table(ProcessSpec::bb(), {2, 4, 6, 8},
                                  {0.149001, 0.047864, 0.0201829, 0.009876}, 1e-4);
    });

    criterion(4, "correlated-motion mean/second-moment table", [] {
        const std::vector<double> cs{0.1, 0.3, 0.5, 0.8, 0.9};
        const std::vector<double> want1{0.08873, 0.26804, 0.45338, 0.75698, 0.87151};
        const std::vector<double> want2{0.24550, 0.28636, 0.37407, 0.63509, 0.78298};
        bool ok = true;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const ProcessSpec spec = ProcessSpec::correlated_bm(cs[i]);
            const double m1 = yule::moment(spec, 1).value;
            const double m2 = yule::moment(spec, 2).value;
            note("cbm c=%.1f  E rho %.6f (want %.5f)  E rho^2 %.6f (want %.5f)", cs[i], m1,
                 want1[i], m2, want2[i]);
            ok = ok && std::abs(m1 - want1[i]) < 1e-4 && std::abs(m2 - want2[i]) < 1e-4;
        }
        const auto [mean, var] = yule::mean_and_variance(ProcessSpec::correlated_bm(0.8));
        note("cbm c=0.8 Var(rho) = %.5f (want 0.0621)", var);
        return ok && std::abs(var - 0.0621) < 2e-4;
    });

    criterion(5, "density coefficients and 12th-order flatness", [] {
        std::vector<double> moments{1.0};
        for (int k = 1; k <= 12; ++k)
            moments.push_back(yule::moment(ProcessSpec::bm(), k).value);

        auto fit = [&](int order) {
            return yule::fit_density({moments.begin(), moments.begin() + order + 1});
        };
        const auto f4 = fit(4), f6 = fit(6), f8 = fit(8), f12 = fit(12);
        struct Want {
            int order, idx;
            double value;
        };
        const std::vector<Want> wants{
            {4, 0, 0.59081},  {4, 2, 0.31001},  {4, 4, -0.97075}, {6, 0, 0.60057},
            {6, 2, 0.10518},  {6, 4, -0.35627}, {6, 6, -0.45062}, {8, 0, 0.61200},
            {8, 2, -0.30638}, {8, 4, 1.9073},   {8, 6, -4.3742},  {8, 8, 2.1019}};
        bool ok = true;
        for (const auto& w : wants) {
            const yule::DensityPoly& p = w.order == 4 ? f4 : (w.order == 6 ? f6 : f8);
            const double got = p.coeffs[static_cast<std::size_t>(w.idx)];
            const double dev = std::abs(got - w.value);
            note("f%d coeff[%d] = %+.5f  want %+.5f  |dev| %.1e", w.order, w.idx, got,
                 w.value, dev);
            ok = ok && dev < 2e-4;
        }
        // 12th-order curve: symmetric, approximately flat on (-0.5, 0.5)
        double lo = 1e300, hi = -1e300, asym = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = -0.5 + i / 400.0;
            const double v = yule::eval_density(f12, x);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            asym = std::max(asym, std::abs(v - yule::eval_density(f12, -x)));
        }
        note("f12 on (-0.5,0.5): min %.5f max %.5f ratio %.4f, asymmetry %.1e", lo, hi,
             hi / lo, asym);
        return ok && asym < 1e-12 && hi / lo < 1.15;
    });

    criterion(6, "closed forms match the Riccati mixing oracle", [] {
        bool ok = true;
        for (const ProcessSpec& spec :
             {ProcessSpec::bm(), ProcessSpec::ou(1.0), ProcessSpec::correlated_bm(0.5)}) {
            const double dev = max_oracle_dev(spec, 10000);
            note("%s max dev %.2e (tolerance 1e-6)", spec.name().c_str(), dev);
            ok = ok && dev < 1e-6;
        }
        const double bb_dev = max_oracle_dev(ProcessSpec::bb(), 20000);
        note("bb max dev %.2e (tolerance 1e-5, endpoint cut 1e-6)", bb_dev);
        return ok && bb_dev < 1e-5;
    });

    criterion(7, "explicit formula agrees with the jet route for E rho^2", [] {
        const double jet = yule::moment(ProcessSpec::bm(), 2).value;
        const double explicit_route = yule::moment2_explicit_bm().value;
        note("jet %.8f  explicit %.8f  |dev| %.2e", jet, explicit_route,
             std::abs(jet - explicit_route));
        return std::abs(jet - explicit_route) < 1e-6;
    });

    criterion(8, "Monte Carlo covers all low-order table entries", [] {
        bool ok = true;
        yule::SimConfig cfg;
        cfg.n_paths = 1000000;
        cfg.n_steps = 2048;

        cfg.spec = ProcessSpec::bm();
        cfg.seed = 1001;
        ok = mc_covers(cfg, {2, 4}, {0.240523, 0.109177}) && ok;

        const std::vector<double> rs{0.1, 0.2, 0.3, 0.4, 0.5, 1.0,
                                     2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
        const std::vector<double> want{0.23209, 0.22438, 0.21734, 0.21091, 0.20504, 0.18231,
                                       0.15583, 0.11454, 0.07627, 0.04404, 0.01907, 0.00971};
        for (std::size_t i = 0; i < rs.size(); ++i) {
            cfg.spec = ProcessSpec::ou(rs[i]);
            cfg.seed = 2000 + static_cast<std::uint64_t>(i);
            ok = mc_covers(cfg, {2}, {want[i]}) && ok;
        }

        cfg.spec = ProcessSpec::bb();
        cfg.seed = 3001;
        ok = mc_covers(cfg, {2, 4}, {0.149001, 0.047864}) && ok;

        const std::vector<double> cs{0.1, 0.3, 0.5, 0.8, 0.9};
        const std::vector<double> c1{0.08873, 0.26804, 0.45338, 0.75698, 0.87151};
        const std::vector<double> c2{0.24550, 0.28636, 0.37407, 0.63509, 0.78298};
        for (std::size_t i = 0; i < cs.size(); ++i) {
            cfg.spec = ProcessSpec::correlated_bm(cs[i]);
            cfg.seed = 4000 + static_cast<std::uint64_t>(i);
            ok = mc_covers(cfg, {1, 2}, {c1[i], c2[i]}) && ok;
        }
        return ok;
    });

    criterion(9, "OU central limit behavior", [] {
        const auto rows = yule::clt_experiment(1.0, {10.0, 25.0, 50.0}, 100000, 5001);
        for (const auto& row : rows)
            note("T=%-4g var(sqrt(T) rho) %.4f +- %.4f   var(cross) %.4f   ks %.4f",
                 row.horizon, row.var_scaled_rho, row.var_scaled_rho_se,
                 row.var_scaled_cross, row.ks_normal);
        const auto& last = rows.back();
        bool ok = last.var_scaled_rho > 0.475 && last.var_scaled_rho < 0.525;
        ok = ok && last.var_scaled_cross > 0.119 && last.var_scaled_cross < 0.131;
        ok = ok && rows[0].ks_normal > rows[1].ks_normal &&
             rows[1].ks_normal > rows[2].ks_normal;
        return ok;
    });

    criterion(10, "property suites", [] {
        bool ok = true;

        // jet coefficients match finite differences through order 6
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> diag(0.4, 3.0);
        int fd_fail = 0;
        for (int rep = 0; rep < 12; ++rep) {
            const double s11 = diag(rng), s22 = diag(rng);
            for (const ProcessSpec& spec :
                 {ProcessSpec::bm(), ProcessSpec::ou(0.8), ProcessSpec::bb(),
                  ProcessSpec::correlated_bm(0.4)}) {
                const yule::Jet j = yule::phi_s12_jet(spec, s11, s22, 6);
                auto scalar = [&](double eps) {
                    return yule::phi(spec, yule::SymMatrix2<double>{s11, eps, s22});
                };
                for (int i = 1; i <= 6; ++i) {
                    double fact = 1.0;
                    for (int m = 2; m <= i; ++m) fact *= m;
                    const double want = fd_derivative(scalar, i, 0.06);
                    if (std::abs(want) < 1e-9) continue;
                    if (rel_err(j[i] * fact, want) > 1e-6) ++fd_fail;
                }
            }
        }
        note("jet-vs-finite-difference failures: %d", fd_fail);
        ok = ok && fd_fail == 0;

        // phi normalization, symmetry, ray monotonicity
        int phi_fail = 0;
        for (const ProcessSpec& spec :
             {ProcessSpec::bm(), ProcessSpec::ou(2.0), ProcessSpec::bb(),
              ProcessSpec::correlated_bm(0.6)}) {
            if (std::abs(yule::phi(spec, yule::SymMatrix2<double>{0, 0, 0}) - 1.0) > 1e-13)
                ++phi_fail;
            for (int rep = 0; rep < 200; ++rep) {
                const double s11 = diag(rng), s22 = diag(rng);
                const double s12 = 0.8 * std::sqrt(s11 * s22) *
                                   (2.0 * (rng() & 1) - 1.0) * diag(rng) / 3.0;
                const double v = yule::phi(spec, yule::SymMatrix2<double>{s11, s12, s22});
                if (!(v > 0.0 && v <= 1.0)) ++phi_fail;
                if (rel_err(v, yule::phi(spec, yule::SymMatrix2<double>{s22, s12, s11})) >
                    1e-12)
                    ++phi_fail;
                double prev = 1.0 + 1e-14;
                for (double t : {0.5, 1.0, 2.0, 4.0}) {
                    const double vt = yule::phi(
                        spec, yule::SymMatrix2<double>{t * s11, t * s12, t * s22});
                    if (vt > prev * (1.0 + 1e-13)) ++phi_fail;
                    prev = vt;
                }
            }
        }
        note("phi invariant failures: %d", phi_fail);
        ok = ok && phi_fail == 0;

        // even-moment monotonicity across computed orders
        int mono_fail = 0;
        for (const ProcessSpec& spec : {ProcessSpec::bm(), ProcessSpec::bb()}) {
            double prev = 1.0;
            for (int k = 2; k <= 8; k += 2) {
                const double m = yule::moment(spec, k).value;
                if (m >= prev) ++mono_fail;
                prev = m;
            }
        }
        note("even-moment monotonicity failures: %d", mono_fail);
        ok = ok && mono_fail == 0;

        // |rho| <= 1 on 1e5 random simulated paths
        int rho_fail = 0;
        std::vector<double> x1, x2;
        for (int i = 0; i < 100000; ++i) {
            const ProcessSpec& spec =
                (i % 4 == 0)   ? ProcessSpec::bm()
                : (i % 4 == 1) ? ProcessSpec::ou(1.0)
                : (i % 4 == 2) ? ProcessSpec::bb()
                               : ProcessSpec::correlated_bm(0.5);
            yule::PathRng prng(4242, static_cast<std::uint64_t>(i));
            yule::simulate_path(spec, 64, prng, x1, x2);
            const auto s = yule::rho_of_path(x1, x2, spec.horizon);
            if (std::abs(s.rho) > 1.0 + 1e-12) ++rho_fail;
        }
        note("|rho| <= 1 violations: %d / 100000", rho_fail);
        return ok && rho_fail == 0;
    });

    std::printf("%s (%d criterion failures)\n", failures == 0 ? "ALL PASS" : "FAILED",
                failures);
    return failures;
}
