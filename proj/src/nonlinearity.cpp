#include "sublog/nonlinearity.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sublog {

void NonlinearityParams::validate() const {
    if (dim < 3) throw std::invalid_argument("NonlinearityParams: dim must be >= 3");
    if (!(eps >= 0.0)) throw std::invalid_argument("NonlinearityParams: eps must be >= 0");
}

double log_e_plus_abs(double u) {
    const double au = std::abs(u);
    if (au > 1e300) return std::log(au) + std::log1p(M_E / au);
    return std::log(M_E + au);
}

double eval_f(double u, const NonlinearityParams& params) {
    params.validate();
    if (u == 0.0) return 0.0;
    const double au = std::abs(u);
    const double L = log_e_plus_abs(u);
    const double mag = std::pow(au, params.two_star() - 1.0) / std::pow(L, params.eps);
    return std::copysign(mag, u);
}

double eval_fprime(double u, const NonlinearityParams& params) {
    params.validate();
    if (u == 0.0) return 0.0;
    const double au = std::abs(u);
    const double L = log_e_plus_abs(u);
    const double damping = params.eps * au / ((M_E + au) * L);
    return std::pow(au, params.q()) / std::pow(L, params.eps) * (params.p() - damping);
}

double eval_fsecond(double u, const NonlinearityParams& params) {
    params.validate();
    const double p = params.p();
    if (u == 0.0) {
        if (params.dim > 6)
            throw std::domain_error("eval_fsecond: singular at u = 0 for dim > 6");
        return 0.0;
    }
    const double au = std::abs(u);
    const double L = log_e_plus_abs(u);
    const double Le = std::pow(L, params.eps);
    const double w = params.eps * au / ((M_E + au) * L);
    const double sgn = u > 0 ? 1.0 : -1.0;
    const double term1 = params.eps * std::pow(au, params.two_star() - 3.0) * au * sgn / Le *
                         (au - M_E * L) / ((M_E + au) * (M_E + au) * L * L);
    const double term2 = std::pow(au, params.two_star() - 4.0) * au * sgn / Le *
                         (p - 1.0 - w) * (p - w);
    return term1 + term2;
}

LogLogParts loglog_decompose(double u, double r, double delta) {
    if (!(u > 0.0)) throw std::domain_error("loglog_decompose: u must be > 0");
    if (!(r > 0.0)) throw std::invalid_argument("loglog_decompose: r must be > 0");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("loglog_decompose: delta must lie in (0,1)");
    const double L = -std::log(delta);  // |ln delta|
    LogLogParts parts;
    parts.lead = std::log(r * L);
    parts.shift = std::log1p(std::log(std::exp(1.0 - r * L) + u) / (r * L));
    return parts;
}

namespace {

double f0(double u, const NonlinearityParams& params) {
    NonlinearityParams p0 = params;
    p0.eps = 0.0;
    return eval_f(u, p0);
}

double fprime0(double u, const NonlinearityParams& params) {
    NonlinearityParams p0 = params;
    p0.eps = 0.0;
    return eval_fprime(u, p0);
}

}  // namespace

BoundReport verify_bound_suite(long long samples, double eps_max,
                               const NonlinearityParams& params,
                               std::uint64_t seed) {
    params.validate();
    if (samples < 1) throw std::invalid_argument("verify_bound_suite: samples must be >= 1");
    if (!(eps_max > 0.0 && eps_max <= 0.2))
        throw std::invalid_argument("verify_bound_suite: eps_max must lie in (0, 0.2]");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> decade(-6.0, 6.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // floating-point cushion on the explicit-constant inequalities
    const double slack = 1e-9;
    const double ts = params.two_star();

    BoundReport report;
    report.samples = samples;
    NonlinearityParams pe = params;

    for (long long k = 0; k < samples; ++k) {
        const double u = (unit(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, decade(rng));
        const double v = (unit(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, decade(rng));
        double eps = eps_max * unit(rng);
        if (eps == 0.0) eps = eps_max * 0.5;
        pe.eps = eps;

        const double au = std::abs(u);
        const double L = log_e_plus_abs(u);
        const double lnln = std::log(L);

        // (i) |f_eps(u) - f_0(u)| <= eps |u|^{2*-1} lnln(e+|u|), constant 1
        const double lhs_i = std::abs(eval_f(u, pe) - f0(u, params));
        const double rhs_i = eps * std::pow(au, ts - 1.0) * lnln;
        if (lhs_i > rhs_i * (1.0 + slack)) ++report.violations_i;

        // (ii) size: |f_eps'(u)| <= (2*-1)|u|^{2*-2}
        const double fpe = eval_fprime(u, pe);
        if (std::abs(fpe) > params.p() * std::pow(au, ts - 2.0) * (1.0 + slack))
            ++report.violations_ii_size;

        // (ii) difference: |f_eps'(u) - f_0'(u)| <= eps |u|^{2*-2}((2*-1)lnln + 1/L)
        const double lhs_ii = std::abs(fpe - fprime0(u, params));
        const double rhs_ii =
            eps * std::pow(au, ts - 2.0) * (params.p() * lnln + 1.0 / L);
        if (lhs_ii > rhs_ii * (1.0 + slack)) ++report.violations_ii_diff;

        // (iii) two-regime bound, unspecified constant: track the supremum ratio
        const double lhs_iii = std::abs(eval_fprime(u + v, pe) - fpe);
        double rhs_iii;
        if (params.dim <= 6) {
            rhs_iii = (std::pow(au, ts - 3.0) + std::pow(std::abs(v), ts - 3.0)) *
                      std::abs(v);
        } else {
            rhs_iii = std::pow(std::abs(v), ts - 2.0) +
                      eps * std::pow(au, ts - 2.0);
        }
        if (rhs_iii > 0.0 && lhs_iii / rhs_iii > report.empirical_C_iii) {
            report.empirical_C_iii = lhs_iii / rhs_iii;
            report.worst = {u, v, eps};
        }
    }
    return report;
}

}  // namespace sublog
