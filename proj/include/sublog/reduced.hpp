// The epsilon <-> delta rate dictionary, the limiting reduced map
// F(d, xi) = (A1 rho(xi) - A2 d, A3 grad rho(xi)), and its root
// (d0, xi0) = ((A1/A2) rho(xi*), xi*) at a non-degenerate critical point of
// the Robin function.
#pragma once

#include <Eigen/Dense>

#include "sublog/greenfn.hpp"
#include "sublog/quadrature.hpp"

namespace sublog {

// Endpoint e^{-1/(N-2)} of the interval on which delta^{N-2} |ln delta| is
// strictly increasing.
double delta_endpoint(int dim);

// Forward map epsilon = d delta^{N-2} |ln delta|; requires delta in (0, delta_N).
double epsilon_of_delta(double d, double delta, int dim);

// Closed rate delta = (d eps / |ln eps|)^{1/(N-2)}; requires eps in (0,1).
double delta_of_epsilon_rate(double d, double eps, int dim);

// Exact inverse of the forward map by monotone bisection on (0, delta_N).
double delta_of_epsilon_exact(double d, double eps, int dim);

// kappa_{eps,d} = delta^{N-2} |ln delta| / eps for the closed-rate delta;
// tends to d/(N-2).
double kappa_rate(double d, double eps, int dim);

struct ReducedConstants {
    int dim = 0;
    double A1 = 0.0;  // alpha_N * A
    double A2 = 0.0;  // 2 frakB / (N-2)
    double A3 = 0.0;  // alpha_N * B / 2
};

ReducedConstants reduced_constants(const StructuralConstants& sc);
ReducedConstants reduced_constants(int dim, const QuadratureSettings& settings = {});

// F(d, xi) as a vector of length N+1: (A1 rho - A2 d, A3 grad rho).
Eigen::VectorXd F_limit(double d, const Eigen::VectorXd& xi,
                        const DomainSpec& domain, const ReducedConstants& constants);

struct ReducedRoot {
    double d0 = 0.0;
    Eigen::VectorXd xi0;
    ReducedConstants constants;
    RobinEvaluation robin_at_xi0;
    bool nondegenerate = false;
};

// Locates xi0 = critical point of rho from x0 and evaluates d0 = (A1/A2) rho(xi0).
// Throws std::runtime_error when the critical point is degenerate.
ReducedRoot solve_reduced(const DomainSpec& domain, const Eigen::VectorXd& x0,
                          const ReducedConstants& constants);

struct BlowupPrediction {
    double delta_pred = 0.0;
    double umax_pred = 0.0;
};

// delta_pred = (d0 eps/|ln eps|)^{1/(N-2)}, umax_pred = alpha_N delta_pred^{-(N-2)/2}.
BlowupPrediction predicted_blowup(double eps, double d0, int dim);

}  // namespace sublog
