#include "yule/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "yule/parallel.hpp"

namespace yule {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr int kJackknifeBlocks = 100;

}  // namespace

PathRng::PathRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0xd1342543de82ef95ULL * (stream + 1));
    for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t PathRng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double PathRng::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double PathRng::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = next_uniform();
    const double u2 = next_uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

void SimConfig::validate() const {
    spec.validate();
    if (n_paths < 1) throw std::invalid_argument("SimConfig: n_paths must be >= 1");
    if (n_steps < 2) throw std::invalid_argument("SimConfig: n_steps must be >= 2");
}

void simulate_path(const ProcessSpec& spec, int n_steps, PathRng& rng,
                   std::vector<double>& x1, std::vector<double>& x2) {
    const std::size_t n = static_cast<std::size_t>(n_steps);
    x1.assign(n + 1, 0.0);
    x2.assign(n + 1, 0.0);
    const double h = spec.horizon / n_steps;
    switch (spec.kind) {
        case ProcessKind::Bm: {
            const double sd = std::sqrt(h);
            for (std::size_t j = 1; j <= n; ++j) {
                x1[j] = x1[j - 1] + sd * rng.next_normal();
                x2[j] = x2[j - 1] + sd * rng.next_normal();
            }
            break;
        }
        case ProcessKind::Ou: {
            const double decay = std::exp(-spec.r * h);
            const double sd = std::sqrt((1.0 - decay * decay) / (2.0 * spec.r));
            for (std::size_t j = 1; j <= n; ++j) {
                x1[j] = decay * x1[j - 1] + sd * rng.next_normal();
                x2[j] = decay * x2[j - 1] + sd * rng.next_normal();
            }
            break;
        }
        case ProcessKind::Bb: {
            const double sd = std::sqrt(h);
            for (std::size_t j = 1; j <= n; ++j) {
                x1[j] = x1[j - 1] + sd * rng.next_normal();
                x2[j] = x2[j - 1] + sd * rng.next_normal();
            }
            const double w1 = x1[n], w2 = x2[n];
            for (std::size_t j = 0; j <= n; ++j) {
                const double frac = static_cast<double>(j) / n;
                x1[j] -= frac * w1;
                x2[j] -= frac * w2;
            }
            x1[n] = 0.0;
            x2[n] = 0.0;
            break;
        }
        case ProcessKind::CorrelatedBm: {
            const double sd = std::sqrt(h);
            const double c = spec.c, root = std::sqrt(1.0 - c * c);
            for (std::size_t j = 1; j <= n; ++j) {
                const double dw1 = sd * rng.next_normal();
                const double dw2 = sd * rng.next_normal();
                x1[j] = x1[j - 1] + dw1;
                x2[j] = x2[j - 1] + c * dw1 + root * dw2;
            }
            break;
        }
    }
}

RhoSample rho_of_path(const std::vector<double>& x1, const std::vector<double>& x2,
                      double horizon) {
    const std::size_t n = x1.size() - 1;
    if (x1.size() < 2 || x1.size() != x2.size())
        throw std::invalid_argument("rho_of_path: need two equal-length paths with >= 2 points");
    const double h = horizon / static_cast<double>(n);
    double s11 = 0.0, s12 = 0.0, s22 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        s11 += w * x1[j] * x1[j];
        s12 += w * x1[j] * x2[j];
        s22 += w * x2[j] * x2[j];
        m1 += w * x1[j];
        m2 += w * x2[j];
    }
    s11 *= h;
    s12 *= h;
    s22 *= h;
    m1 *= h / horizon;
    m2 *= h / horizon;
    RhoSample out;
    out.y11 = s11 - horizon * m1 * m1;
    out.y12 = s12 - horizon * m1 * m2;
    out.y22 = s22 - horizon * m2 * m2;
    if (out.y11 <= 0.0 || out.y22 <= 0.0)
        throw std::domain_error("rho_of_path: degenerate path");
    out.rho = out.y12 / std::sqrt(out.y11 * out.y22);
    return out;
}

std::vector<MomentEstimate> estimate_moments(const SimConfig& cfg,
                                             const std::vector<int>& orders) {
    cfg.validate();
    for (int k : orders)
        if (k < 1 || k > 16) throw std::invalid_argument("estimate_moments: orders must be in 1..16");

    const int blocks = static_cast<int>(std::min<long long>(kJackknifeBlocks, cfg.n_paths));
    const std::size_t n_orders = orders.size();
    // per-block sums of rho^k; block == deterministic work chunk
    std::vector<std::vector<double>> block_sums(
        static_cast<std::size_t>(blocks), std::vector<double>(n_orders, 0.0));
    std::vector<long long> block_count(static_cast<std::size_t>(blocks), 0);

    parallel_chunks(blocks, [&](int b) {
        const long long lo = cfg.n_paths * b / blocks;
        const long long hi = cfg.n_paths * (b + 1) / blocks;
        std::vector<double> x1, x2;
        auto& sums = block_sums[static_cast<std::size_t>(b)];
        for (long long i = lo; i < hi; ++i) {
            PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
            simulate_path(cfg.spec, cfg.n_steps, rng, x1, x2);
            const RhoSample s = rho_of_path(x1, x2, cfg.spec.horizon);
            for (std::size_t q = 0; q < n_orders; ++q)
                sums[q] += std::pow(s.rho, orders[q]);
        }
        block_count[static_cast<std::size_t>(b)] = hi - lo;
    });

    std::vector<MomentEstimate> out(n_orders);
    for (std::size_t q = 0; q < n_orders; ++q) {
        std::vector<double> per_block(static_cast<std::size_t>(blocks));
        for (int b = 0; b < blocks; ++b) per_block[static_cast<std::size_t>(b)] =
            block_sums[static_cast<std::size_t>(b)][q];
        const double total = pairwise_sum(per_block);
        const double mean = total / static_cast<double>(cfg.n_paths);
        // jackknife over leave-one-block-out means
        double ss = 0.0;
        for (int b = 0; b < blocks; ++b) {
            const double nb = static_cast<double>(block_count[static_cast<std::size_t>(b)]);
            const double loo = (total - per_block[static_cast<std::size_t>(b)]) /
                               (static_cast<double>(cfg.n_paths) - nb);
            ss += (loo - mean) * (loo - mean);
        }
        const double se = std::sqrt((blocks - 1.0) / blocks * ss);
        out[q] = {orders[q], mean, se};
    }
    return out;
}

double ks_distance_normal(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-samples[i] / std::numbers::sqrt2);
        d = std::max(d, std::max(cdf - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - cdf));
    }
    return d;
}

std::vector<CltRow> clt_experiment(double r, const std::vector<double>& horizons,
                                   long long n_paths, std::uint64_t seed,
                                   int steps_per_unit) {
    if (!(r > 0.0)) throw std::invalid_argument("clt_experiment: r must be > 0");
    std::vector<CltRow> rows;
    for (double t : horizons) {
        if (!(t > 0.0)) throw std::invalid_argument("clt_experiment: horizons must be > 0");
        const int n_steps = std::max(2, static_cast<int>(std::llround(steps_per_unit * t)));
        const ProcessSpec spec = ProcessSpec::ou(r, t);
        const int blocks = static_cast<int>(std::min<long long>(kJackknifeBlocks, n_paths));

        struct BlockAcc {
            double sr = 0, sr2 = 0;      // sqrt(T) rho
            double sc = 0, sc2 = 0;      // T^{-1/2} int X1 X2
            double sy = 0;               // Y11 / T
            long long n = 0;
        };
        std::vector<BlockAcc> acc(static_cast<std::size_t>(blocks));
        std::vector<std::vector<double>> block_scaled(static_cast<std::size_t>(blocks));

        parallel_chunks(blocks, [&](int b) {
            const long long lo = n_paths * b / blocks;
            const long long hi = n_paths * (b + 1) / blocks;
            std::vector<double> x1, x2;
            BlockAcc& a = acc[static_cast<std::size_t>(b)];
            auto& vals = block_scaled[static_cast<std::size_t>(b)];
            vals.reserve(static_cast<std::size_t>(hi - lo));
            const double h = t / n_steps;
            for (long long i = lo; i < hi; ++i) {
                PathRng rng(seed, static_cast<std::uint64_t>(i));
                simulate_path(spec, n_steps, rng, x1, x2);
                const RhoSample s = rho_of_path(x1, x2, t);
                double cross = 0.0;  // raw trapezoid of X1 X2
                for (std::size_t j = 0; j < x1.size(); ++j) {
                    const double w = (j == 0 || j + 1 == x1.size()) ? 0.5 : 1.0;
                    cross += w * x1[j] * x2[j];
                }
                cross *= h;
                const double sr = std::sqrt(t) * s.rho;
                const double sc = cross / std::sqrt(t);
                a.sr += sr;
                a.sr2 += sr * sr;
                a.sc += sc;
                a.sc2 += sc * sc;
                a.sy += s.y11 / t;
                a.n += 1;
                vals.push_back(sr * std::sqrt(2.0 * r));
            }
        });

        const double n = static_cast<double>(n_paths);
        auto tot = [&](auto proj) {
            std::vector<double> v(static_cast<std::size_t>(blocks));
            for (int b = 0; b < blocks; ++b) v[static_cast<std::size_t>(b)] =
                proj(acc[static_cast<std::size_t>(b)]);
            return pairwise_sum(v);
        };
        const double sr = tot([](const BlockAcc& a) { return a.sr; });
        const double sr2 = tot([](const BlockAcc& a) { return a.sr2; });
        const double sc = tot([](const BlockAcc& a) { return a.sc; });
        const double sc2 = tot([](const BlockAcc& a) { return a.sc2; });
        const double sy = tot([](const BlockAcc& a) { return a.sy; });

        auto var_of = [n](double s1, double s2) { return s2 / n - (s1 / n) * (s1 / n); };
        CltRow row;
        row.horizon = t;
        row.var_scaled_rho = var_of(sr, sr2);
        row.var_scaled_cross = var_of(sc, sc2);
        row.mean_y11_over_t = sy / n;
        row.mean_rho = sr / n / std::sqrt(t);

        // jackknife SEs for both variances
        auto jk_var = [&](auto s1_proj, auto s2_proj, double s1_all, double s2_all) {
            const double full = var_of(s1_all, s2_all);
            double ss = 0.0;
            for (int b = 0; b < blocks; ++b) {
                const BlockAcc& a = acc[static_cast<std::size_t>(b)];
                const double nn = n - static_cast<double>(a.n);
                const double m1 = (s1_all - s1_proj(a)) / nn;
                const double m2 = (s2_all - s2_proj(a)) / nn;
                const double loo = m2 - m1 * m1;
                ss += (loo - full) * (loo - full);
            }
            return std::sqrt((blocks - 1.0) / blocks * ss);
        };
        row.var_scaled_rho_se = jk_var([](const BlockAcc& a) { return a.sr; },
                                       [](const BlockAcc& a) { return a.sr2; }, sr, sr2);
        row.var_scaled_cross_se = jk_var([](const BlockAcc& a) { return a.sc; },
                                         [](const BlockAcc& a) { return a.sc2; }, sc, sc2);

        std::vector<double> all;
        all.reserve(static_cast<std::size_t>(n_paths));
        for (auto& v : block_scaled) all.insert(all.end(), v.begin(), v.end());
        row.ks_normal = ks_distance_normal(std::move(all));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace yule
