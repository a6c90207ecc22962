// The log-damped critical nonlinearity f_eps(u) = |u|^{2*-2} u / ln(e+|u|)^eps,
// its first two derivatives, the randomized verification of the pointwise
// mean-value bounds, and the ln ln decomposition with its slow limit.
#pragma once

#include <cstdint>

namespace sublog {

struct NonlinearityParams {
    int dim = 3;       // N >= 3
    double eps = 0.0;  // >= 0

    double two_star() const { return 2.0 * dim / (dim - 2.0); }
    double p() const { return (dim + 2.0) / (dim - 2.0); }  // 2* - 1
    double q() const { return 4.0 / (dim - 2.0); }          // 2* - 2
    void validate() const;
};

double eval_f(double u, const NonlinearityParams& params);
double eval_fprime(double u, const NonlinearityParams& params);
// Throws std::domain_error at u = 0 for dim > 6 (negative power of |u|).
double eval_fsecond(double u, const NonlinearityParams& params);

// ln(e + |u|), with an overflow-safe branch for very large |u|.
double log_e_plus_abs(double u);

// ln ln(e + delta^{-r} u) = lead + shift with
//   lead  = ln ln(delta^{-r})
//   shift = ln(1 + ln(e^{1 - r|ln delta|} + u) / (r |ln delta|)),
// and |ln delta| * shift -> (1/r) ln u as delta -> 0.
struct LogLogParts {
    double lead = 0.0;
    double shift = 0.0;
};
LogLogParts loglog_decompose(double u, double r, double delta);

// Randomized check of the pointwise bounds on f_eps - f_0, f_eps', and the
// two-regime modulus of continuity of f_eps'. Bounds with explicit constants
// are counted as violations; the constant-free bound reports its empirical
// supremum ratio instead.
struct BoundReport {
    long long samples = 0;
    long long violations_i = 0;        // |f_eps - f_0| <= eps |u|^{2*-1} lnln(e+|u|)
    long long violations_ii_size = 0;  // |f_eps'| <= (2*-1) |u|^{2*-2}
    long long violations_ii_diff = 0;  // explicit bound on |f_eps' - f_0'|
    double empirical_C_iii = 0.0;      // sup ratio of the (iii) bound
    struct Worst {
        double u = 0.0, v = 0.0, eps = 0.0;
    } worst;  // triple achieving empirical_C_iii
    long long violations() const {
        return violations_i + violations_ii_size + violations_ii_diff;
    }
};

BoundReport verify_bound_suite(long long samples, double eps_max,
                               const NonlinearityParams& params,
                               std::uint64_t seed);

}  // namespace sublog
