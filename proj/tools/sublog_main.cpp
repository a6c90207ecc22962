// Command-line front end: verification suites and continuation sweeps with
// machine-readable CSV/JSON output.
//
// Exit codes: 0 success, 1 tolerance failure, 2 config error,
//             3 degenerate critical point, 4 partial sweep.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "sublog/bubbles.hpp"
#include "sublog/greenfn.hpp"
#include "sublog/io.hpp"
#include "sublog/quadrature.hpp"
#include "sublog/radial_pde.hpp"
#include "sublog/reduced.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sublog;

namespace {

struct RunConfig {
    json raw = json::object();
    int dim = 3;
    std::uint64_t seed = 12345;
    fs::path out_dir = ".";

    QuadratureSettings quadrature() const {
        QuadratureSettings q;
        if (raw.contains("quadrature")) {
            const auto& j = raw.at("quadrature");
            q.abs_tol = j.value("abs_tol", q.abs_tol);
            q.rel_tol = j.value("rel_tol", q.rel_tol);
            q.max_subdivisions = j.value("max_subdivisions", q.max_subdivisions);
        }
        return q;
    }

    DomainSpec domain() const {
        if (raw.contains("domain")) return domain_from_json(raw.at("domain"));
        return DomainSpec::unit_ball(dim);
    }
};

RunConfig load_config(const std::string& config_path, int n_override,
                      long long seed_override, const std::string& out_override) {
    RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot open config file " + config_path);
        in >> cfg.raw;
        if (!cfg.raw.is_object()) throw std::invalid_argument("config must be a JSON object");
    }
    cfg.dim = cfg.raw.value("N", 3);
    cfg.seed = cfg.raw.value("seed", 12345ull);
    cfg.out_dir = cfg.raw.value("out", std::string("."));
    if (n_override > 0) cfg.dim = n_override;
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_override.empty()) cfg.out_dir = out_override;
    fs::create_directories(cfg.out_dir);
    return cfg;
}

int cmd_verify_constants(const RunConfig& cfg) {
    const QuadratureSettings qs = cfg.quadrature();
    double tol_frakB = 1e-6, tol_structure = 1e-8, tol_sobolev = 1e-8;
    std::vector<int> dims{3, 4, 5, 6, 7};
    if (cfg.raw.contains("tolerances")) {
        const auto& t = cfg.raw.at("tolerances");
        tol_frakB = t.value("frakB_rel", tol_frakB);
        tol_structure = t.value("structure_rel", tol_structure);
        tol_sobolev = t.value("sobolev_rel", tol_sobolev);
    }
    if (cfg.raw.contains("constants_dims"))
        dims = cfg.raw.at("constants_dims").get<std::vector<int>>();

    json report;
    report["checks"] = json::array();
    bool all_ok = true;
    for (int N : dims) {
        StructuralConstants sc = structural_constants(N, qs);
        const double err_frakB = std::abs(sc.frakB - sc.frakB_closed) / sc.frakB_closed;
        const double err_structure = std::abs(sc.A - 0.5 * (N - 2) * sc.B) / sc.A;
        const double err_sobolev =
            std::abs(sc.sobolev_mass - sc.grad_mass) / sc.sobolev_mass;
        const bool ok = err_frakB <= tol_frakB && err_structure <= tol_structure &&
                        err_sobolev <= tol_sobolev;
        all_ok = all_ok && ok;
        json entry = to_json(sc);
        entry["err_frakB_rel"] = err_frakB;
        entry["err_structure_rel"] = err_structure;
        entry["err_sobolev_rel"] = err_sobolev;
        entry["pass"] = ok;
        report["checks"].push_back(entry);
        std::printf("N=%d frakB %.12g vs closed %.12g (rel %.2e) A-(N-2)B/2 rel %.2e "
                    "sobolev rel %.2e -> %s\n",
                    N, sc.frakB, sc.frakB_closed, err_frakB, err_structure,
                    err_sobolev, ok ? "ok" : "FAIL");
    }
    report["pass"] = all_ok;
    report["tolerances"] =
        json{{"frakB_rel", tol_frakB}, {"structure_rel", tol_structure},
             {"sobolev_rel", tol_sobolev}};
    write_json((cfg.out_dir / "constants.json").string(), report);
    return all_ok ? 0 : 1;
}

int cmd_robin(const RunConfig& cfg) {
    const DomainSpec domain = cfg.domain();
    int samples = 17;
    Eigen::VectorXd x0;
    if (cfg.raw.contains("robin")) {
        const auto& r = cfg.raw.at("robin");
        samples = r.value("samples", samples);
        if (r.contains("x0")) {
            const auto& arr = r.at("x0");
            x0.resize(arr.size());
            for (std::size_t i = 0; i < arr.size(); ++i) x0[i] = arr[i].get<double>();
        }
    }
    if (x0.size() == 0) {
        x0 = domain.kind == DomainSpec::Kind::UnitBall
                 ? Eigen::VectorXd::Constant(domain.dim, 0.1)
                 : Eigen::VectorXd(0.45 * domain.sides);
    }
    if (!domain.contains(x0))
        throw std::invalid_argument("robin: starting point x0 outside the domain");

    // tabulate rho along the segment through the domain center in direction e1
    std::vector<std::vector<double>> rows;
    Eigen::VectorXd center = domain.kind == DomainSpec::Kind::UnitBall
                                 ? Eigen::VectorXd::Zero(domain.dim)
                                 : Eigen::VectorXd(0.5 * domain.sides);
    const double halfspan = domain.kind == DomainSpec::Kind::UnitBall
                                ? 0.8
                                : 0.5 * domain.sides[0] - 2.0 * domain.sides[0] /
                                                              (domain.resolution - 1);
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? 0.0 : -1.0 + 2.0 * i / (samples - 1);
        Eigen::VectorXd x = center;
        x[0] += t * halfspan;
        rows.push_back({t * halfspan, robin_value(domain, x)});
    }
    write_csv((cfg.out_dir / "robin.csv").string(), {"offset", "rho"}, rows);

    CriticalPoint cp = find_critical_point(domain, x0, 1e-8);
    json cp_json{{"xi_star", std::vector<double>(cp.xi.data(), cp.xi.data() + cp.xi.size())},
                 {"rho", robin_value(domain, cp.xi)},
                 {"grad_norm", cp.grad_norm},
                 {"nondegenerate", cp.nondegenerate},
                 {"iterations", cp.iterations},
                 {"domain", to_json(domain)}};
    write_json((cfg.out_dir / "critical_point.json").string(), cp_json);
    std::printf("critical point at |xi|=%.3e rho=%.12g nondegenerate=%d\n",
                cp.xi.norm(), robin_value(domain, cp.xi), cp.nondegenerate ? 1 : 0);
    return 0;
}

int cmd_reduced(const RunConfig& cfg) {
    const DomainSpec domain = cfg.domain();
    Eigen::VectorXd x0 = domain.kind == DomainSpec::Kind::UnitBall
                             ? Eigen::VectorXd::Constant(domain.dim, 0.1)
                             : Eigen::VectorXd(0.45 * domain.sides);
    if (cfg.raw.contains("x0")) {
        const auto& arr = cfg.raw.at("x0");
        x0.resize(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i) x0[i] = arr[i].get<double>();
    }
    if (!domain.contains(x0))
        throw std::invalid_argument("reduced: starting point x0 outside the domain");
    ReducedConstants constants = reduced_constants(domain.dim, cfg.quadrature());
    ReducedRoot root = solve_reduced(domain, x0, constants);
    write_json((cfg.out_dir / "reduced.json").string(), to_json(root));
    std::printf("d0 = %.12g at |xi0| = %.3e (A1=%.6g A2=%.6g A3=%.6g)\n", root.d0,
                root.xi0.norm(), constants.A1, constants.A2, constants.A3);
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    double eps_start = 0.5, ratio = 0.5, eps_min = 7e-6, fit_eps_max = 3.2e-3;
    NewtonSettings newton;
    if (cfg.raw.contains("sweep")) {
        const auto& s = cfg.raw.at("sweep");
        eps_start = s.value("eps_start", eps_start);
        ratio = s.value("ratio", ratio);
        eps_min = s.value("eps_min", eps_min);
        fit_eps_max = s.value("fit_eps_max", fit_eps_max);
        if (s.contains("newton")) {
            const auto& n = s.at("newton");
            newton.max_iterations = n.value("max_iterations", newton.max_iterations);
            newton.tolerance = n.value("tolerance", newton.tolerance);
        }
    }
    ContinuationSchedule schedule = ContinuationSchedule::geometric(eps_start, ratio, eps_min);
    schedule.newton = newton;

    ReducedConstants constants = reduced_constants(cfg.dim, cfg.quadrature());
    const DomainSpec ball = DomainSpec::unit_ball(cfg.dim);
    ReducedRoot root = solve_reduced(ball, Eigen::VectorXd::Constant(cfg.dim, 0.1), constants);

    std::vector<RadialSolution> sweep = continuation_sweep(schedule, cfg.dim, root.d0);

    std::vector<std::vector<double>> rows;
    for (const auto& sol : sweep) {
        const double dnum = extract_concentration(sol);
        rows.push_back({sol.epsilon, dnum, sol.u[0], correction_energy(sol, dnum),
                        static_cast<double>(sol.newton_iterations),
                        sol.converged ? 1.0 : 0.0});
        std::printf("eps=%.6e delta_num=%.6e u0=%.8g energy=%.3e\n", sol.epsilon,
                    dnum, sol.u[0], correction_energy(sol, dnum));
    }
    write_csv((cfg.out_dir / "sweep.csv").string(),
              {"epsilon", "delta_num", "u0", "correction_energy", "newton_iters",
               "converged"},
              rows);

    json summary{{"N", cfg.dim},
                 {"d0", root.d0},
                 {"scheduled", schedule.epsilons.size()},
                 {"converged", sweep.size()}};
    bool partial = sweep.size() < schedule.epsilons.size();
    try {
        RateFit fit = rate_fit(sweep, fit_eps_max);
        summary["rate_fit"] = to_json(fit);
        summary["fit_eps_max"] = fit_eps_max;
        std::printf("rate fit: slope=%.4f (target %.4f) d_hat=%.4f over %d points\n",
                    fit.slope, 1.0 / (cfg.dim - 2), fit.d_hat, fit.points);
    } catch (const std::exception& e) {
        summary["rate_fit_error"] = e.what();
        std::printf("rate fit unavailable: %s\n", e.what());
    }
    write_json((cfg.out_dir / "rate_fit.json").string(), summary);
    return partial ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for log-damped critical bubbles"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    int n_override = -1;
    long long seed_override = -1;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_override, "output directory");
    app.add_option("--n", n_override, "space dimension override");
    app.add_option("--seed", seed_override, "RNG seed override");

    auto* c_verify = app.add_subcommand("verify-constants",
                                        "structural constants vs closed forms");
    auto* c_robin = app.add_subcommand("robin", "Robin function table and critical point");
    auto* c_reduced = app.add_subcommand("reduced", "reduced-map root (d0, xi0)");
    auto* c_sweep = app.add_subcommand("sweep", "radial continuation sweep and rate fit");
    for (auto* sub : {c_verify, c_robin, c_reduced, c_sweep}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = load_config(config_path, n_override, seed_override, out_override);
        if (c_verify->parsed()) return cmd_verify_constants(cfg);
        if (c_robin->parsed()) return cmd_robin(cfg);
        if (c_reduced->parsed()) return cmd_reduced(cfg);
        if (c_sweep->parsed()) return cmd_sweep(cfg);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        if (msg.find("degenerate critical point") != std::string::npos) return 3;
        return 1;
    }
    return 2;
}
