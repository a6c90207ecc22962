// Adaptive Gauss-Kronrod quadrature and the scalar bubble integrals built on
// top of it: structural constants (A, B, frakB, Sobolev mass), moments of the
// bubble family over the unit ball, and the delta-scaling of the nonlinear
// composition norms used by the reduction estimates.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sublog {

struct QuadratureSettings {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 400;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    int subdivisions = 0;
};

using Integrand = std::function<double(double)>;

// Adaptive GK15 on a finite interval. Optional breakpoints seed the initial
// subdivision (kinks, sign changes, interior peaks).
IntegralResult integrate(const Integrand& f, double a, double b,
                         const QuadratureSettings& settings = {},
                         std::span<const double> breakpoints = {});

// Integral over (a, +inf) via the compactification r = a + t/(1-t).
IntegralResult integrate_to_infinity(const Integrand& f, double a = 0.0,
                                     const QuadratureSettings& settings = {},
                                     std::span<const double> breakpoints = {});

// Radial integral of a decaying integrand over (0, inf); thin wrapper kept as
// the module's public name for it.
IntegralResult radial_integral(const Integrand& f,
                               const QuadratureSettings& settings = {},
                               std::span<const double> breakpoints = {});

// Surface area of the unit sphere in R^N.
double omega_sphere(int dim);

// Least-squares line fit of y against x (used for log-log order fits).
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Scalar constants of the reduction, all radial integrals of the standard
// bubble profile:
//   A = p * int U^{p-1} psi^0,   B = int U^p,
//   frakB = -int U^p ln(U) psi^0 (with Beta-function closed form),
//   sobolev_mass = int U^{2*} = int |grad U|^2.
struct StructuralConstants {
    int dim = 0;
    double A = 0.0;
    double B = 0.0;
    double frakB = 0.0;
    double frakB_closed = 0.0;
    double sobolev_mass = 0.0;
    double grad_mass = 0.0;
};

StructuralConstants structural_constants(int dim,
                                         const QuadratureSettings& settings = {});

// Closed form of frakB: Gamma(N/2) pi^{N/2} / (4 Gamma(N+1)) * N^{N/2} (N-2)^{(N+4)/2}.
double frakB_closed_form(int dim);

enum class MomentKind { U, Psi0, PsiJ };

// int_{unit ball} X^q for X in {U_{d,0}, |psi^0_{d,0}|, |psi^j_{d,0}|},
// reduced to a 1-D integral over (0, 1/delta) in the concentration variable.
double bubble_moment(MomentKind kind, double q, double delta, int dim,
                     const QuadratureSettings& settings = {});

// log-log slope of bubble_moment over a delta grid. When divide_log is set the
// values are divided by |ln delta| first (the threshold-exponent branches).
double moment_exponent_fit(MomentKind kind, double q,
                           std::span<const double> deltas, int dim,
                           bool divide_log = false,
                           const QuadratureSettings& settings = {});

// Piecewise exponent tables for the moments. log_corrected is set on the
// threshold branch where the order carries a |ln delta| factor.
double moment_exponent(MomentKind kind, double q, int dim, bool& log_corrected);

// Order fit shared by the norm-scaling and expansion-residual verifications.
struct OrderFit {
    std::string which;
    double slope = 0.0;
    double slope_model = 0.0;
    double prefactor = 0.0;
    double log_power = 0.0;  // |ln delta| power divided out before the fit
    std::vector<double> deltas;
    std::vector<double> residuals;  // raw values before log correction
};

enum class NormEstimate { S1, S2, S11, S12 };

struct EpsRule {
    enum class Kind { Fixed, Coupled } kind = Kind::Fixed;
    double value = 0.0;  // fixed epsilon, or d in epsilon = d delta^{N-2}|ln delta|
    static EpsRule fixed(double eps) { return {Kind::Fixed, eps}; }
    static EpsRule coupled(double d) { return {Kind::Coupled, d}; }
};

// Lebesgue norms of the nonlinear compositions on the centered unit ball:
//   S1:  |f_0(PU) - f_0(U)|_{2N/(N+2)}
//   S2:  |f_0'(PU) - f_0'(U)|_{N/2}
//   S11: |f_eps(PU) - f_0(PU)|_{2N/(N+2)}
//   S12: |f_eps'(PU) - f_0'(PU)|_{N/2}
// fitted against delta. For S11/S12 with fixed epsilon the fit is of the
// ratio value / (eps ln|ln delta|), which should stay bounded.
OrderFit norm_estimate_scaling(NormEstimate which,
                               std::span<const double> deltas,
                               const EpsRule& eps_rule, int dim,
                               const QuadratureSettings& settings = {});

}  // namespace sublog
