// Radial Newton-continuation solver for -Delta u = f_eps(u) on the unit ball:
// graded meshes that track the concentration scale, a damped Newton iteration
// on the full finite-difference system, a peak-pinned elimination of the
// near-kernel dilation mode for branch tracking, and the rate-law extraction.
#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "sublog/nonlinearity.hpp"

namespace sublog {

struct RadialMesh {
    std::vector<double> r;  // r[0] = 0 < ... < r[M] = 1
    double kappa = 0.0;     // grading exponent of the generating map

    std::size_t segments() const { return r.empty() ? 0 : r.size() - 1; }
    void validate() const;
};

// Geometrically graded mesh with first cell ~ delta * first_cell_frac and
// per-cell ratio grading^(1/refine); refine splits smoothly (same map, more
// nodes), so mesh families are nested under refine doubling.
RadialMesh make_bubble_mesh(double delta, double grading = 1.05,
                            double first_cell_frac = 1.0 / 20.0, int refine = 1);

// Refinement factor keeping the dilation-coordinate discretization error at
// err_target: the near-kernel mode amplifies the O(h^2) truncation error by
// 1/sigma with sigma = delta^{N-2} |ln delta|.
int refinement_for_scale(double delta, int dim, double err_target = 0.005);

struct RadialSolution {
    RadialMesh mesh;
    std::vector<double> u;  // nodal values, u[M] = 0
    int dim = 3;
    double epsilon = 0.0;
    bool converged = false;
    double residual_norm = 0.0;  // scaled max norm
    int newton_iterations = 0;
};

// Right-hand side of the radial operator; f_eps in production, replaceable by
// manufactured sources in tests.
struct RadialOperator {
    int dim = 3;
    std::function<double(double)> f;
    std::function<double(double)> fprime;
};

RadialOperator make_feps_operator(const NonlinearityParams& params);

struct TridiagonalMatrix {
    std::vector<double> lower, diag, upper;
    // Thomas solve; rhs overwritten with the solution.
    void solve_in_place(std::vector<double>& rhs) const;
};

// Residual and row scales of the interior+origin equations for nodal values
// u (length M; the boundary value u[M] = 0 is eliminated). The origin row
// uses the symmetry closure Lap u(0) = N u''(0). Fills the tridiagonal
// Jacobian when jacobian is non-null.
void residual_and_jacobian(const RadialMesh& mesh, std::span<const double> u,
                           const RadialOperator& op, std::vector<double>& residual,
                           std::vector<double>& row_scale,
                           TridiagonalMatrix* jacobian);

// Convenience overload on a RadialSolution with f_eps.
void residual_and_jacobian(const RadialSolution& sol, std::vector<double>& residual,
                           std::vector<double>& row_scale,
                           TridiagonalMatrix* jacobian);

struct NewtonSettings {
    int max_iterations = 200;
    double tolerance = 1e-10;      // scaled max-norm residual
    double min_damping = 1e-14;
    double positivity_slack = 1e-8;
};

// Damped Newton with backtracking line search on the scaled residual norm;
// steps that push min u below -positivity_slack * max u are rejected.
RadialSolution newton_solve(const RadialSolution& initial, double epsilon,
                            const NewtonSettings& settings = {});

struct ContinuationSchedule {
    std::vector<double> epsilons;  // strictly decreasing, positive
    NewtonSettings newton;
    static ContinuationSchedule geometric(double eps_start, double ratio,
                                          double eps_floor);
    void validate() const;
};

// Continuation in epsilon on the concentrating branch of the unit ball.
// d0 calibrates the initial concentration scale through the exact inverse of
// epsilon = d0 delta^{N-2} |ln delta|; later steps extrapolate the observed
// branch. Stops at the first epsilon that fails to converge (partial result).
std::vector<RadialSolution> continuation_sweep(const ContinuationSchedule& schedule,
                                               int dim, double d0);

// delta_num = (alpha_N / u(0))^{2/(N-2)}; throws when u(0) <= alpha_N.
double extract_concentration(const RadialSolution& sol);

// int |grad(u - U_{delta_num,0})|^2 by midpoint/trapezoidal radial quadrature.
double correction_energy(const RadialSolution& sol, double delta_num);

struct RateFit {
    double slope = 0.0;
    double slope_halfwidth = 0.0;
    double d_hat = 0.0;
    double d_hat_halfwidth = 0.0;
    int points = 0;
};

// Least-squares slope of ln delta_num against ln(eps/|ln eps|) over converged
// solutions with eps <= eps_max; d_hat = median of delta_num^{N-2} |ln eps|/eps.
RateFit rate_fit(std::span<const RadialSolution> sweep,
                 double eps_max = std::numeric_limits<double>::infinity());

}  // namespace sublog
