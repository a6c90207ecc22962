#include "sublog/radial_pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "sublog/bubbles.hpp"
#include "sublog/reduced.hpp"

namespace sublog {

void RadialMesh::validate() const {
    if (r.size() < 3) throw std::invalid_argument("RadialMesh: need at least 3 nodes");
    if (r.front() != 0.0 || std::abs(r.back() - 1.0) > 1e-14)
        throw std::invalid_argument("RadialMesh: nodes must span [0, 1]");
    double prev_h = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) {
        const double h = r[i] - r[i - 1];
        if (!(h > 0.0)) throw std::invalid_argument("RadialMesh: nodes must increase");
        if (prev_h > 0.0) {
            const double ratio = h / prev_h;
            if (ratio < 1.0 - 1e-9 || ratio > 1.2 + 1e-9)
                throw std::invalid_argument("RadialMesh: grading ratio outside [1.0, 1.2]");
        }
        prev_h = h;
    }
}

RadialMesh make_bubble_mesh(double delta, double grading, double first_cell_frac,
                            int refine) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("make_bubble_mesh: delta must lie in (0, 1)");
    if (!(grading > 1.0 && grading <= 1.2))
        throw std::invalid_argument("make_bubble_mesh: grading must lie in (1, 1.2]");
    if (refine < 1) throw std::invalid_argument("make_bubble_mesh: refine must be >= 1");
    const double h0 = delta * first_cell_frac;
    const int base = static_cast<int>(
        std::ceil(std::log1p((grading - 1.0) / h0) / std::log(grading)));
    RadialMesh mesh;
    mesh.kappa = base * std::log(grading);
    const long long M = static_cast<long long>(base) * refine;
    mesh.r.resize(M + 1);
    const double denom = std::expm1(mesh.kappa);
    for (long long i = 0; i <= M; ++i)
        mesh.r[i] = std::expm1(mesh.kappa * static_cast<double>(i) / M) / denom;
    mesh.r.front() = 0.0;
    mesh.r.back() = 1.0;
    return mesh;
}

int refinement_for_scale(double delta, int dim, double err_target) {
    const double sigma = std::pow(delta, dim - 2) * std::abs(std::log(delta));
    const double R = std::sqrt(1.5 / (400.0 * err_target * sigma));
    return std::min(std::max(static_cast<int>(std::ceil(R)), 4), 4096);
}

RadialOperator make_feps_operator(const NonlinearityParams& params) {
    params.validate();
    RadialOperator op;
    op.dim = params.dim;
    op.f = [params](double u) { return eval_f(u, params); };
    op.fprime = [params](double u) { return eval_fprime(u, params); };
    return op;
}

void TridiagonalMatrix::solve_in_place(std::vector<double>& rhs) const {
    const std::size_t n = diag.size();
    std::vector<double> c(n);
    double m = diag[0];
    c[0] = upper[0] / m;
    rhs[0] /= m;
    for (std::size_t i = 1; i < n; ++i) {
        m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

void residual_and_jacobian(const RadialMesh& mesh, std::span<const double> u,
                           const RadialOperator& op, std::vector<double>& residual,
                           std::vector<double>& row_scale,
                           TridiagonalMatrix* jacobian) {
    const std::size_t M = mesh.segments();
    if (u.size() != M)
        throw std::invalid_argument("residual_and_jacobian: expected M interior+origin values");
    const auto& r = mesh.r;
    const int N = op.dim;
    residual.assign(M, 0.0);
    row_scale.assign(M, 0.0);
    if (jacobian) {
        jacobian->lower.assign(M, 0.0);
        jacobian->diag.assign(M, 0.0);
        jacobian->upper.assign(M, 0.0);
    }

    // origin row: symmetry gives Lap u(0) = N u''(0) = 2N (u_1 - u_0)/h_1^2
    const double h1 = r[1] - r[0];
    const double c0 = 2.0 * N / (h1 * h1);
    const double u1 = (M > 1) ? u[1] : 0.0;
    const double f0v = op.f(u[0]);
    residual[0] = c0 * (u1 - u[0]) + f0v;
    row_scale[0] = std::abs(c0 * u1) + std::abs(c0 * u[0]) + std::abs(f0v);
    if (jacobian) {
        jacobian->diag[0] = -c0 + op.fprime(u[0]);
        jacobian->upper[0] = c0;
    }

    for (std::size_t i = 1; i < M; ++i) {
        const double hm = r[i] - r[i - 1];
        const double hp = r[i + 1] - r[i];
        const double c2m = 2.0 / (hm * (hm + hp));
        const double c2c = -2.0 / (hm * hp);
        const double c2p = 2.0 / (hp * (hm + hp));
        const double c1m = -hp / (hm * (hm + hp));
        const double c1c = (hp - hm) / (hm * hp);
        const double c1p = hm / (hp * (hm + hp));
        const double drift = (N - 1) / r[i];
        const double km = c2m + drift * c1m;
        const double kc = c2c + drift * c1c;
        const double kp = c2p + drift * c1p;
        const double up1 = (i + 1 < M) ? u[i + 1] : 0.0;
        const double fv = op.f(u[i]);
        residual[i] = km * u[i - 1] + kc * u[i] + kp * up1 + fv;
        row_scale[i] = std::abs(km * u[i - 1]) + std::abs(kc * u[i]) +
                       std::abs(kp * up1) + std::abs(fv);
        if (jacobian) {
            jacobian->lower[i] = km;
            jacobian->diag[i] = kc + op.fprime(u[i]);
            jacobian->upper[i] = kp;
        }
    }
}

void residual_and_jacobian(const RadialSolution& sol, std::vector<double>& residual,
                           std::vector<double>& row_scale,
                           TridiagonalMatrix* jacobian) {
    const RadialOperator op = make_feps_operator({sol.dim, sol.epsilon});
    std::span<const double> interior(sol.u.data(), sol.mesh.segments());
    residual_and_jacobian(sol.mesh, interior, op, residual, row_scale, jacobian);
}

namespace {

bool sweep_trace() {
    static const bool on = std::getenv("SUBLOG_SWEEP_TRACE") != nullptr;
    return on;
}

double scaled_max_norm(const std::vector<double>& res, const std::vector<double>& scale) {
    double m = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i)
        m = std::max(m, std::abs(res[i]) / std::max(scale[i], 1.0));
    return m;
}

double weighted_two_norm(const std::vector<double>& res, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        const double t = res[i] / w[i];
        s += t * t;
    }
    return std::sqrt(s / res.size());
}

struct NewtonOutcome {
    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;
};

// Damped Newton on values[0..M-1] (boundary value eliminated); weights of the
// line-search merit function are frozen within each iteration.
NewtonOutcome newton_iterate(const RadialMesh& mesh, const RadialOperator& op,
                             std::vector<double>& values,
                             const NewtonSettings& settings) {
    const std::size_t M = mesh.segments();
    std::vector<double> res, scale, res_t, scale_t, w(M), trial(M), du;
    TridiagonalMatrix jac;
    NewtonOutcome out;
    for (int it = 0; it < settings.max_iterations; ++it) {
        residual_and_jacobian(mesh, values, op, res, scale, &jac);
        out.residual_norm = scaled_max_norm(res, scale);
        out.iterations = it;
        if (out.residual_norm <= settings.tolerance) {
            out.converged = true;
            return out;
        }
        for (std::size_t i = 0; i < M; ++i) w[i] = std::max(scale[i], 1.0);
        du = res;
        for (auto& v : du) v = -v;
        jac.solve_in_place(du);
        const double n0 = weighted_two_norm(res, w);
        double umax = 0.0;
        for (double v : values) umax = std::max(umax, std::abs(v));
        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= settings.min_damping) {
            double tmin = 0.0, tmax = 0.0;
            for (std::size_t i = 0; i < M; ++i) {
                trial[i] = values[i] + lambda * du[i];
                tmin = std::min(tmin, trial[i]);
                tmax = std::max(tmax, trial[i]);
            }
            if (tmin < -settings.positivity_slack * std::max(tmax, 1.0)) {
                lambda *= 0.5;
                continue;
            }
            residual_and_jacobian(mesh, trial, op, res_t, scale_t, nullptr);
            if (weighted_two_norm(res_t, w) <= (1.0 - 0.25 * lambda) * n0) {
                values.swap(trial);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) return out;
    }
    residual_and_jacobian(mesh, values, op, res, scale, nullptr);
    out.residual_norm = scaled_max_norm(res, scale);
    out.converged = out.residual_norm <= settings.tolerance;
    out.iterations = settings.max_iterations;
    return out;
}

// Peak-pinned interior Newton: u_0 = m fixed, rows 1..M-1 solved. Removes the
// soft dilation coordinate from the iteration.
bool newton_pinned(const RadialMesh& mesh, const RadialOperator& op, double m,
                   std::vector<double>& interior, const NewtonSettings& settings,
                   int max_it = 80) {
    const std::size_t M = mesh.segments();
    const std::size_t n = M - 1;
    std::vector<double> full(M), res, scale, res_t, w(n), du(n), trial(n);
    TridiagonalMatrix jac, sub;
    auto assemble = [&](const std::vector<double>& v, std::vector<double>& rr,
                        std::vector<double>& ss, TridiagonalMatrix* jj) {
        full[0] = m;
        std::copy(v.begin(), v.end(), full.begin() + 1);
        residual_and_jacobian(mesh, full, op, rr, ss, jj);
    };
    for (int it = 0; it < max_it; ++it) {
        assemble(interior, res, scale, &jac);
        double norm = 0.0;
        for (std::size_t i = 1; i < M; ++i)
            norm = std::max(norm, std::abs(res[i]) / std::max(scale[i], 1.0));
        if (norm <= std::max(settings.tolerance, 1e-13)) return true;
        sub.lower.assign(jac.lower.begin() + 1, jac.lower.end());
        sub.diag.assign(jac.diag.begin() + 1, jac.diag.end());
        sub.upper.assign(jac.upper.begin() + 1, jac.upper.end());
        sub.lower[0] = 0.0;
        sub.upper[n - 1] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = std::max(scale[i + 1], 1.0);
            du[i] = -res[i + 1];
        }
        sub.solve_in_place(du);
        double n0 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = res[i + 1] / w[i];
            n0 += t * t;
        }
        n0 = std::sqrt(n0);
        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= settings.min_damping) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = interior[i] + lambda * du[i];
            assemble(trial, res_t, scale, nullptr);
            double nt = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double t = res_t[i + 1] / w[i];
                nt += t * t;
            }
            nt = std::sqrt(nt);
            if (nt <= (1.0 - 0.25 * lambda) * n0) {
                interior.swap(trial);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) return false;
    }
    return false;
}

// Scalar residual of the origin row at the pinned sub-solution, normalized by
// its row scale.
double origin_gap(const RadialMesh& mesh, const RadialOperator& op, double m,
                  const std::vector<double>& interior) {
    const double h1 = mesh.r[1];
    const double c0 = 2.0 * op.dim / (h1 * h1);
    const double fv = op.f(m);
    const double g = c0 * (interior[0] - m) + fv;
    const double s = std::abs(c0 * interior[0]) + std::abs(c0 * m) + std::abs(fv);
    return g / std::max(s, 1.0);
}

// Branch solve at fixed epsilon: secant iteration in ln m on the origin gap,
// each evaluation a pinned interior solve warm-started from the previous one.
bool solve_pinned_branch(const RadialMesh& mesh, const RadialOperator& op,
                         double m0, std::vector<double>& interior,
                         const NewtonSettings& settings, double& m_out) {
    if (!newton_pinned(mesh, op, m0, interior, settings)) {
        if (sweep_trace()) std::fprintf(stderr, "      pinned: interior solve failed at m0=%.6g\n", m0);
        return false;
    }
    double lm0 = std::log(m0);
    double g0 = origin_gap(mesh, op, m0, interior);
    double lm1 = lm0 + (g0 > 0 ? 0.04 : -0.04);
    if (!newton_pinned(mesh, op, std::exp(lm1), interior, settings)) return false;
    double g1 = origin_gap(mesh, op, std::exp(lm1), interior);
    // The secant bottoms out at the interior-solve noise floor; the scalar only
    // needs to be small enough for the full-system polish to take over.
    double best = std::abs(g1);
    int stale = 0;
    int it = 0;
    for (; it < 60; ++it) {
        if (std::abs(g1) < 1e-13 || g1 == g0) break;
        double step = -g1 * (lm1 - lm0) / (g1 - g0);
        step = std::clamp(step, -0.5, 0.5);
        if (std::abs(step) < 1e-12) break;
        lm0 = lm1;
        g0 = g1;
        lm1 += step;
        if (!newton_pinned(mesh, op, std::exp(lm1), interior, settings)) {
            if (sweep_trace())
                std::fprintf(stderr, "      pinned: interior solve failed at secant it %d m=%.6g\n",
                             it, std::exp(lm1));
            return false;
        }
        g1 = origin_gap(mesh, op, std::exp(lm1), interior);
        if (sweep_trace())
            std::fprintf(stderr, "        secant it %d: m=%.10g g=%.6e step=%.3e\n", it,
                         std::exp(lm1), g1, step);
        if (std::abs(g1) < 0.5 * best) {
            best = std::abs(g1);
            stale = 0;
        } else if (++stale >= 8) {
            break;
        }
    }
    m_out = std::exp(lm1);
    if (sweep_trace())
        std::fprintf(stderr, "      pinned: m*=%.8g gap=%.3e after %d secant its\n", m_out,
                     g1, it);
    return std::abs(g1) < 1e-6;
}

double concentration_of_peak(double peak, int dim) {
    return std::pow(bubble_alpha(dim) / peak, 2.0 / (dim - 2));
}

std::vector<double> pu_profile(const RadialMesh& mesh, double delta, int dim) {
    BubbleParams bp{delta, Eigen::VectorXd::Zero(dim), dim};
    ClosedFormProjection pu(bp, -1);
    std::vector<double> g(mesh.r.size());
    for (std::size_t i = 0; i < mesh.r.size(); ++i)
        g[i] = std::max(pu.radial(mesh.r[i]), 0.0);
    g.back() = 0.0;
    return g;
}

double linear_interp(const std::vector<double>& x, const std::vector<double>& y,
                     double t) {
    if (t <= x.front()) return y.front();
    if (t >= x.back()) return y.back();
    auto it = std::upper_bound(x.begin(), x.end(), t);
    const std::size_t i = it - x.begin();
    const double w = (t - x[i - 1]) / (x[i] - x[i - 1]);
    return (1.0 - w) * y[i - 1] + w * y[i];
}

struct BranchPoint {
    double eps;
    double delta_num;
};

double d_coordinate(const BranchPoint& p, int dim) {
    return p.eps / (std::pow(p.delta_num, dim - 2) * std::abs(std::log(p.delta_num)));
}

double predict_delta(const std::vector<BranchPoint>& history, double eps, int dim,
                     double d0) {
    if (history.empty()) return delta_of_epsilon_exact(d0, eps, dim);
    if (history.size() == 1)
        return delta_of_epsilon_exact(d_coordinate(history.back(), dim), eps, dim);
    const BranchPoint& p1 = history[history.size() - 2];
    const BranchPoint& p2 = history.back();
    const double ld1 = std::log(d_coordinate(p1, dim));
    const double ld2 = std::log(d_coordinate(p2, dim));
    const double t = (std::log(eps) - std::log(p2.eps)) /
                     (std::log(p2.eps) - std::log(p1.eps));
    return delta_of_epsilon_exact(std::exp(ld2 + t * (ld2 - ld1)), eps, dim);
}

struct StepResult {
    RadialSolution sol;
    double delta_num = 0.0;
    bool ok = false;
};

// One continuation step: mesh at the predicted scale, transfer of the previous
// profile through the bubble ratio, pinned branch solve, re-anchor the mesh on
// the observed concentration, then a full-system Newton polish.
StepResult solve_at_epsilon(int dim, double eps, double delta_pred,
                            const RadialSolution* prev, double prev_delta,
                            const NewtonSettings& settings) {
    StepResult out;
    const RadialOperator op = make_feps_operator({dim, eps});
    double dmesh = delta_pred;
    std::vector<double> carry_r, carry_u;  // previous attempt on this epsilon

    for (int attempt = 0; attempt < 5; ++attempt) {
        RadialMesh mesh =
            make_bubble_mesh(dmesh, 1.05, 1.0 / 20.0, refinement_for_scale(dmesh, dim));
        const std::size_t M = mesh.segments();
        std::vector<double> guess(M + 1);
        if (!carry_r.empty()) {
            for (std::size_t i = 0; i <= M; ++i)
                guess[i] = linear_interp(carry_r, carry_u, mesh.r[i]);
        } else if (prev == nullptr) {
            guess = pu_profile(mesh, dmesh, dim);
        } else {
            // transfer u_prev through the multiplicative bubble ratio
            std::vector<double> ratio(prev->mesh.r.size());
            BubbleParams bp{prev_delta, Eigen::VectorXd::Zero(dim), dim};
            ClosedFormProjection pu_prev(bp, -1);
            for (std::size_t i = 0; i + 1 < ratio.size(); ++i) {
                const double den = pu_prev.radial(prev->mesh.r[i]);
                ratio[i] = den > 0.0 ? std::clamp(prev->u[i] / den, 0.0, 10.0) : 1.0;
            }
            ratio.back() = ratio[ratio.size() - 2];
            std::vector<double> pu_new = pu_profile(mesh, dmesh, dim);
            for (std::size_t i = 0; i <= M; ++i)
                guess[i] = pu_new[i] * linear_interp(prev->mesh.r, ratio, mesh.r[i]);
        }
        guess.back() = 0.0;

        std::vector<double> interior(guess.begin() + 1, guess.end() - 1);
        double m_star = 0.0;
        const double m_guess = std::max(guess[0], 1.01 * bubble_alpha(dim));
        if (sweep_trace())
            std::fprintf(stderr, "    attempt %d: eps=%.4e dmesh=%.4e M=%zu m_guess=%.6g\n",
                         attempt, eps, dmesh, M, m_guess);
        if (!solve_pinned_branch(mesh, op, m_guess, interior, settings, m_star)) {
            out.ok = false;
            return out;
        }

        RadialSolution sol;
        sol.mesh = mesh;
        sol.dim = dim;
        sol.epsilon = eps;
        sol.u.assign(M + 1, 0.0);
        sol.u[0] = m_star;
        std::copy(interior.begin(), interior.end(), sol.u.begin() + 1);

        RadialSolution polished = newton_solve(sol, eps, settings);
        if (!polished.converged) {
            if (sweep_trace())
                std::fprintf(stderr, "    polish failed: res=%.3e its=%d\n",
                             polished.residual_norm, polished.newton_iterations);
            out.ok = false;
            return out;
        }
        const double dnum = concentration_of_peak(polished.u[0], dim);
        if (dnum / dmesh < 0.75 || dnum / dmesh > 1.35) {
            dmesh = dnum;
            carry_r = polished.mesh.r;
            carry_u = polished.u;
            continue;
        }
        out.sol = std::move(polished);
        out.delta_num = dnum;
        out.ok = true;
        return out;
    }
    out.ok = false;
    return out;
}

}  // namespace

RadialSolution newton_solve(const RadialSolution& initial, double epsilon,
                            const NewtonSettings& settings) {
    initial.mesh.validate();
    if (initial.u.size() != initial.mesh.r.size())
        throw std::invalid_argument("newton_solve: values/mesh size mismatch");
    RadialSolution sol = initial;
    sol.epsilon = epsilon;
    const RadialOperator op = make_feps_operator({sol.dim, epsilon});
    std::vector<double> values(sol.u.begin(), sol.u.end() - 1);
    NewtonOutcome outcome = newton_iterate(sol.mesh, op, values, settings);
    std::copy(values.begin(), values.end(), sol.u.begin());
    sol.u.back() = 0.0;
    sol.converged = outcome.converged;
    sol.residual_norm = outcome.residual_norm;
    sol.newton_iterations = outcome.iterations;
    return sol;
}

ContinuationSchedule ContinuationSchedule::geometric(double eps_start, double ratio,
                                                     double eps_floor) {
    if (!(eps_start > 0.0) || !(ratio > 0.0 && ratio < 1.0) || !(eps_floor > 0.0))
        throw std::invalid_argument("ContinuationSchedule: invalid geometric parameters");
    ContinuationSchedule s;
    for (double e = eps_start; e >= eps_floor; e *= ratio) s.epsilons.push_back(e);
    s.validate();
    return s;
}

void ContinuationSchedule::validate() const {
    if (epsilons.empty())
        throw std::invalid_argument("ContinuationSchedule: empty schedule");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0))
            throw std::invalid_argument("ContinuationSchedule: epsilons must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("ContinuationSchedule: epsilons must decrease");
    }
}

std::vector<RadialSolution> continuation_sweep(const ContinuationSchedule& schedule,
                                               int dim, double d0) {
    schedule.validate();
    if (!(d0 > 0.0)) throw std::invalid_argument("continuation_sweep: d0 must be > 0");
    std::vector<RadialSolution> results;
    std::vector<BranchPoint> history;
    const RadialSolution* prev = nullptr;
    double prev_delta = 0.0;

    for (double eps : schedule.epsilons) {
        const double dpred = predict_delta(history, eps, dim, d0);
        StepResult step =
            solve_at_epsilon(dim, eps, dpred, prev, prev_delta, schedule.newton);
        if (!step.ok && prev != nullptr) {
            // one midpoint substep to re-anchor the branch prediction
            const double eps_mid = std::sqrt(history.back().eps * eps);
            const double dmid = predict_delta(history, eps_mid, dim, d0);
            StepResult mid =
                solve_at_epsilon(dim, eps_mid, dmid, prev, prev_delta, schedule.newton);
            if (mid.ok) {
                auto hist2 = history;
                hist2.push_back({eps_mid, mid.delta_num});
                const double dpred2 = predict_delta(hist2, eps, dim, d0);
                step = solve_at_epsilon(dim, eps, dpred2, &mid.sol, mid.delta_num,
                                        schedule.newton);
            }
        }
        if (!step.ok) break;
        results.push_back(step.sol);
        history.push_back({eps, step.delta_num});
        prev = &results.back();
        prev_delta = step.delta_num;
    }
    return results;
}

double extract_concentration(const RadialSolution& sol) {
    if (!sol.converged)
        throw std::invalid_argument("extract_concentration: solution not converged");
    const double a = bubble_alpha(sol.dim);
    if (!(sol.u[0] > a))
        throw std::domain_error(
            "extract_concentration: peak below alpha_N, solution not concentrated");
    return concentration_of_peak(sol.u[0], sol.dim);
}

double correction_energy(const RadialSolution& sol, double delta_num) {
    const auto& r = sol.mesh.r;
    const int N = sol.dim;
    const double omega = omega_sphere(N);
    const double scale = std::pow(delta_num, -0.5 * (N - 2));
    double energy = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double phi_i = sol.u[i] - scale * U_profile(r[i] / delta_num, N);
        const double phi_p = sol.u[i + 1] - scale * U_profile(r[i + 1] / delta_num, N);
        const double h = r[i + 1] - r[i];
        const double slope = (phi_p - phi_i) / h;
        const double rmid = 0.5 * (r[i] + r[i + 1]);
        energy += slope * slope * std::pow(rmid, N - 1) * h;
    }
    return omega * energy;
}

RateFit rate_fit(std::span<const RadialSolution> sweep, double eps_max) {
    std::vector<double> x, y, dvals;
    int dim = 0;
    for (const auto& sol : sweep) {
        if (!sol.converged || sol.epsilon > eps_max) continue;
        dim = sol.dim;
        const double dnum = extract_concentration(sol);
        const double leps = std::abs(std::log(sol.epsilon));
        x.push_back(std::log(sol.epsilon / leps));
        y.push_back(std::log(dnum));
        dvals.push_back(std::pow(dnum, sol.dim - 2) * leps / sol.epsilon);
    }
    if (x.size() < 5)
        throw std::invalid_argument("rate_fit: need at least 5 converged solutions");
    const double span = *std::max_element(x.begin(), x.end()) -
                        *std::min_element(x.begin(), x.end());
    if (span < 2.0 * std::log(10.0) * 0.99)
        throw std::invalid_argument("rate_fit: epsilon range must span >= 2 decades");
    (void)dim;

    LineFit fit = fit_line(x, y);
    RateFit out;
    out.slope = fit.slope;
    out.slope_halfwidth = 2.0 * fit.slope_stderr;
    out.points = static_cast<int>(x.size());
    std::sort(dvals.begin(), dvals.end());
    const std::size_t n = dvals.size();
    out.d_hat = (n % 2 == 1) ? dvals[n / 2] : 0.5 * (dvals[n / 2 - 1] + dvals[n / 2]);
    out.d_hat_halfwidth = 0.5 * (dvals[(3 * n) / 4] - dvals[n / 4]);
    return out;
}

}  // namespace sublog
