// Command-line front end: moments, density fits, Monte Carlo estimates, the
// Riccati-oracle verification sweep, and the OU central-limit experiment.
// CSV or JSON output, with a manifest sidecar for reproducibility.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "yule/density.hpp"
#include "yule/mgf.hpp"
#include "yule/moments.hpp"
#include "yule/montecarlo.hpp"
#include "yule/riccati.hpp"
#include "yule/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitVerifyFailed = 4;

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // preformatted cells
    json records = json::array();                // raw values for JSON output

    std::string to_csv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i)
            os << header[i] << (i + 1 < header.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                os << row[i] << (i + 1 < row.size() ? "," : "\n");
        return os.str();
    }
};

struct OutputOptions {
    std::string format = "csv";
    std::string out_path;
};

json manifest_base(const std::string& command, const json& params,
                   const std::vector<std::string>& routes) {
    json m;
    m["tool"] = "yulecorr";
    m["version"] = yule::kVersion;
    m["command"] = command;
    m["params"] = params;
    if (params.contains("seed")) m["seed"] = params["seed"];
    m["routes"] = routes;
    return m;
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

// Emits the result table plus its manifest. The output document itself never
// contains the timestamp so reruns are byte-identical; the sidecar does.
void emit(const Table& table, const std::string& command, const json& params,
          const std::vector<std::string>& routes, const OutputOptions& opt,
          const json& extra = json()) {
    const json manifest = manifest_base(command, params, routes);
    std::string payload;
    if (opt.format == "json") {
        json doc;
        doc["manifest"] = manifest;
        doc["results"] = table.records;
        if (!extra.is_null()) doc["extra"] = extra;
        payload = doc.dump(2) + "\n";
    } else {
        payload = table.to_csv();
    }
    if (opt.out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + opt.out_path);
    f << payload;
    json side = manifest;
    side["timestamp"] = timestamp_now();
    std::ofstream mf(opt.out_path + ".manifest.json", std::ios::binary);
    mf << side.dump(2) << "\n";
}

yule::ProcessSpec build_spec(const std::string& process, std::optional<double> r,
                             std::optional<double> c, double horizon) {
    if (process == "bm") return yule::ProcessSpec::bm(horizon);
    if (process == "ou") {
        if (!r) throw CLI::ValidationError("--r is required for the OU process");
        return yule::ProcessSpec::ou(*r, horizon);
    }
    if (process == "bb") {
        if (horizon != 1.0)
            throw CLI::ValidationError("the bridge is defined on [0,1]; --T must be 1");
        return yule::ProcessSpec::bb();
    }
    if (process == "cbm") {
        if (!c) throw CLI::ValidationError("--c is required for correlated Brownian motion");
        return yule::ProcessSpec::correlated_bm(*c, horizon);
    }
    throw CLI::ValidationError("unknown process: " + process);
}

std::vector<int> parse_orders(const std::string& orders) {
    std::vector<int> out;
    std::stringstream ss(orders);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    if (out.empty()) throw CLI::ValidationError("--orders must name at least one order");
    return out;
}

std::vector<double> parse_doubles(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("expected a comma-separated list of numbers");
    return out;
}

json spec_params(const yule::ProcessSpec& spec) {
    json p;
    p["process"] = spec.name();
    p["T"] = spec.horizon;
    if (spec.kind == yule::ProcessKind::Ou) p["r"] = spec.r;
    if (spec.kind == yule::ProcessKind::CorrelatedBm) p["c"] = spec.c;
    return p;
}

int run_moments(const yule::ProcessSpec& spec, const std::vector<int>& orders, double tol,
                const OutputOptions& opt) {
    yule::QuadratureConfig cfg;
    cfg.abs_tol = tol;
    Table t;
    t.header = {"k", "value", "err_estimate", "route"};
    for (int k : orders) {
        const yule::MomentResult m = yule::moment(spec, k, cfg);
        t.rows.push_back({std::to_string(m.k), fixed6(m.value), sci(m.err_estimate),
                          yule::route_name(m.route)});
        t.records.push_back({{"k", m.k},
                             {"value", m.value},
                             {"err_estimate", m.err_estimate},
                             {"route", yule::route_name(m.route)}});
    }
    json params = spec_params(spec);
    params["orders"] = orders;
    params["tol"] = tol;
    emit(t, "moments", params, {"jet_quadrature"}, opt);
    return kExitOk;
}

int run_density(const yule::ProcessSpec& spec, int order, int points, double tol,
                const OutputOptions& opt) {
    if (spec.symmetric() && order % 2 != 0)
        throw CLI::ValidationError("symmetric processes need an even density order");
    if (order < 0 || order > 16) throw CLI::ValidationError("--order must be in 0..16");

    yule::QuadratureConfig cfg;
    cfg.abs_tol = tol;
    std::vector<double> moments{1.0};
    for (int k = 1; k <= order; ++k) moments.push_back(yule::moment(spec, k, cfg).value);
    const yule::DensityPoly poly = yule::fit_density(moments);
    const auto curve = yule::emit_density_table(poly, points);

    Table t;
    t.header = {"x", "pdf"};
    for (const auto& [x, p] : curve) {
        t.rows.push_back({fixed6(x), fixed6(p)});
        t.records.push_back({{"x", x}, {"pdf", p}});
    }
    json params = spec_params(spec);
    params["order"] = order;
    params["points"] = points;
    params["tol"] = tol;
    json extra;
    extra["coefficients"] = poly.coeffs;
    extra["moments"] = moments;
    emit(t, "density", params, {"jet_quadrature"}, opt, extra);
    if (!opt.out_path.empty()) {
        std::ofstream cf(opt.out_path + ".coeffs.json", std::ios::binary);
        cf << extra.dump(2) << "\n";
    }
    return kExitOk;
}

int run_simulate(const yule::ProcessSpec& spec, long long paths, int steps,
                 std::uint64_t seed, const std::vector<int>& orders,
                 const OutputOptions& opt) {
    yule::SimConfig cfg;
    cfg.spec = spec;
    cfg.n_paths = paths;
    cfg.n_steps = steps;
    cfg.seed = seed;
    const auto est = yule::estimate_moments(cfg, orders);
    Table t;
    t.header = {"k", "estimate", "std_error"};
    for (const auto& e : est) {
        t.rows.push_back({std::to_string(e.k), fixed6(e.estimate), sci(e.std_error)});
        t.records.push_back(
            {{"k", e.k}, {"estimate", e.estimate}, {"std_error", e.std_error}});
    }
    json params = spec_params(spec);
    params["paths"] = paths;
    params["steps"] = steps;
    params["seed"] = seed;
    params["orders"] = orders;
    emit(t, "simulate", params, {"monte_carlo"}, opt);
    return kExitOk;
}

int run_verify(const yule::ProcessSpec& spec, int steps, const OutputOptions& opt) {
    const double tolerance = spec.kind == yule::ProcessKind::Bb ? 1e-5 : 1e-6;
    const yule::LinearSDE sde = yule::make_linear_sde(spec);
    const std::vector<double> diag{0.4, 0.9, 1.7, 2.8, 4.5};
    const std::vector<double> offdiag_frac{-0.55, 0.0, 0.55};

    Table t;
    t.header = {"s11", "s12", "s22", "phi_closed", "phi_oracle", "abs_dev"};
    double max_dev = 0.0;
    std::array<double, 3> worst{0, 0, 0};
    for (double s11 : diag)
        for (double s22 : diag)
            for (double f : offdiag_frac) {
                const double s12 = f * std::sqrt(s11 * s22);
                const double closed =
                    yule::phi(spec, yule::SymMatrix2<double>{s11, s12, s22});
                Eigen::Matrix2d S;
                S << s11, s12, s12, s22;
                const double oracle = yule::mgf_via_mixing(sde, S, 0, steps);
                const double dev = std::abs(closed - oracle);
                if (dev > max_dev) {
                    max_dev = dev;
                    worst = {s11, s12, s22};
                }
                t.rows.push_back({fixed6(s11), fixed6(s12), fixed6(s22), fixed6(closed),
                                  fixed6(oracle), sci(dev)});
                t.records.push_back({{"s11", s11},
                                     {"s12", s12},
                                     {"s22", s22},
                                     {"phi_closed", closed},
                                     {"phi_oracle", oracle},
                                     {"abs_dev", dev}});
            }

    json params = spec_params(spec);
    params["steps"] = steps;
    json extra;
    extra["max_abs_dev"] = max_dev;
    extra["tolerance"] = tolerance;
    emit(t, "verify", params, {"jet_quadrature", "riccati_oracle"}, opt, extra);
    std::cerr << "max |phi_closed - phi_oracle| = " << sci(max_dev) << " (tolerance "
              << sci(tolerance) << ")\n";
    if (max_dev >= tolerance) {
        std::cerr << "verification FAILED at s11=" << worst[0] << " s12=" << worst[1]
                  << " s22=" << worst[2] << "\n";
        return kExitVerifyFailed;
    }
    return kExitOk;
}

int run_clt(double r, const std::vector<double>& horizons, long long paths,
            std::uint64_t seed, const OutputOptions& opt) {
    const auto rows = yule::clt_experiment(r, horizons, paths, seed);
    Table t;
    t.header = {"T",          "var_scaled_rho",   "var_scaled_rho_se",
                "var_cross",  "var_cross_se",     "mean_y11_over_T",
                "mean_rho",   "ks_normal"};
    for (const auto& row : rows) {
        t.rows.push_back({fixed6(row.horizon), fixed6(row.var_scaled_rho),
                          sci(row.var_scaled_rho_se), fixed6(row.var_scaled_cross),
                          sci(row.var_scaled_cross_se), fixed6(row.mean_y11_over_t),
                          fixed6(row.mean_rho), fixed6(row.ks_normal)});
        t.records.push_back({{"T", row.horizon},
                             {"var_scaled_rho", row.var_scaled_rho},
                             {"var_scaled_rho_se", row.var_scaled_rho_se},
                             {"var_cross", row.var_scaled_cross},
                             {"var_cross_se", row.var_scaled_cross_se},
                             {"mean_y11_over_T", row.mean_y11_over_t},
                             {"mean_rho", row.mean_rho},
                             {"ks_normal", row.ks_normal}});
    }
    json params;
    params["r"] = r;
    params["T"] = horizons;
    params["paths"] = paths;
    params["seed"] = seed;
    emit(t, "clt", params, {"monte_carlo"}, opt);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "yulecorr " + std::string(yule::kVersion) +
        " - moments, density approximations, and asymptotics of the empirical\n"
        "correlation rho = Y12 / sqrt(Y11 Y22) of two diffusion paths on [0,T],\n"
        "where Yij = int Xi Xj dt - T Xbar_i Xbar_j. Processes: bm (Brownian\n"
        "motion), ou (Ornstein-Uhlenbeck, --r), bb (Brownian bridge), cbm\n"
        "(correlated Brownian motion, --c). VC_THREADS caps worker threads."};
    app.require_subcommand(1);

    std::string process = "bm";
    std::optional<double> r_opt, c_opt;
    double horizon = 1.0;
    double tol = 1e-8;
    std::string orders_str = "2";
    long long paths = 1000000;
    int steps = 2048;
    std::uint64_t seed = 1;
    OutputOptions out;

    auto add_common = [&](CLI::App* cmd, bool with_process = true) {
        if (with_process)
            cmd->add_option("--process", process, "bm | ou | bb | cbm")->required();
        cmd->add_option("--r", r_opt, "OU mean-reversion rate (> 0)");
        cmd->add_option("--c", c_opt, "correlation for cbm, in (-1, 1)");
        cmd->add_option("--T", horizon, "time horizon (> 0; bb requires 1)")
            ->default_val(1.0);
        cmd->add_option("--format", out.format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->default_val("csv");
        cmd->add_option("--out", out.out_path,
                        "output file (a .manifest.json sidecar is written next to it)");
    };

    CLI::App* moments = app.add_subcommand(
        "moments",
        "E rho^k = (-1)^k / (2^k Gamma(k/2)^2) * int_0^inf int_0^inf s11^{k/2-1}\n"
        "s22^{k/2-1} d^k phi/d s12^k (s11, 0, s22) ds11 ds22, evaluated with\n"
        "truncated-Taylor jets and panel Gauss-Legendre quadrature.");
    add_common(moments);
    moments->add_option("--orders", orders_str, "comma list of orders in 1..16")
        ->default_val("2");
    moments->add_option("--tol", tol, "absolute quadrature tolerance")->default_val(1e-8);

    CLI::App* density = app.add_subcommand(
        "density",
        "moment-matched polynomial density on [-1,1]: the unique degree-k\n"
        "polynomial whose moments match E rho^0..E rho^k (Legendre projection).");
    add_common(density);
    int order = 4;
    int points = 201;
    density->add_option("--order", order, "polynomial order (even for symmetric processes)")
        ->default_val(4);
    density->add_option("--points", points, "points in the sampled curve")->default_val(201);
    density->add_option("--tol", tol, "absolute quadrature tolerance")->default_val(1e-8);

    CLI::App* simulate = app.add_subcommand(
        "simulate",
        "Monte Carlo moments of rho from exact-transition path simulation with\n"
        "trapezoidal Y integrals; jackknife standard errors over 100 blocks.");
    add_common(simulate);
    simulate->add_option("--paths", paths, "number of simulated paths")
        ->default_val(1000000);
    simulate->add_option("--steps", steps, "grid cells per path")->default_val(2048);
    simulate->add_option("--seed", seed, "RNG seed; identical seeds reproduce bytes")
        ->default_val(1);
    simulate->add_option("--orders", orders_str, "comma list of orders in 1..16")
        ->default_val("2");

    CLI::App* verify = app.add_subcommand(
        "verify",
        "compares closed-form phi(S) against the backward-Riccati mixing oracle\n"
        "phi(S) = E_a exp(-gamma(0; a)), a ~ N(0, S/T), over an S grid.");
    add_common(verify);
    int rk_steps = 10000;
    verify->add_option("--steps", rk_steps, "backward RK4 steps")->default_val(10000);

    CLI::App* clt = app.add_subcommand(
        "clt",
        "OU pair asymptotics: Var(sqrt(T) rho(T)) -> 1/(2r) and\n"
        "Var(T^{-1/2} int X1 X2 dt) -> 1/(8 r^3), with a KS diagnostic of\n"
        "sqrt(2rT) rho(T) against N(0,1).");
    double clt_r = 1.0;
    std::string t_list = "10,25,50";
    clt->add_option("--r", clt_r, "OU mean-reversion rate (> 0)")->required();
    clt->add_option("--T", t_list, "comma list of horizons")->default_val("10,25,50");
    clt->add_option("--paths", paths, "paths per horizon")->default_val(100000);
    clt->add_option("--seed", seed, "RNG seed")->default_val(1);
    clt->add_option("--format", out.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_val("csv");
    clt->add_option("--out", out.out_path, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (moments->parsed()) {
            const auto spec = build_spec(process, r_opt, c_opt, horizon);
            return run_moments(spec, parse_orders(orders_str), tol, out);
        }
        if (density->parsed()) {
            const auto spec = build_spec(process, r_opt, c_opt, horizon);
            return run_density(spec, order, points, tol, out);
        }
        if (simulate->parsed()) {
            const auto spec = build_spec(process, r_opt, c_opt, horizon);
            return run_simulate(spec, paths, steps, seed, parse_orders(orders_str), out);
        }
        if (verify->parsed()) {
            const auto spec = build_spec(process, r_opt, c_opt, horizon);
            return run_verify(spec, rk_steps, out);
        }
        if (clt->parsed()) {
            if (!(clt_r > 0.0)) throw CLI::ValidationError("--r must be > 0");
            return run_clt(clt_r, parse_doubles(t_list), paths, seed, out);
        }
    } catch (const yule::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
