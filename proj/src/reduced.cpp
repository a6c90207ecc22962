#include "sublog/reduced.hpp"

#include <cmath>
#include <stdexcept>

#include "sublog/bubbles.hpp"

namespace sublog {

double delta_endpoint(int dim) {
    if (dim < 3) throw std::invalid_argument("delta_endpoint: dim must be >= 3");
    return std::exp(-1.0 / (dim - 2));
}

double epsilon_of_delta(double d, double delta, int dim) {
    if (!(d > 0.0)) throw std::invalid_argument("epsilon_of_delta: d must be > 0");
    if (!(delta > 0.0 && delta < delta_endpoint(dim)))
        throw std::invalid_argument(
            "epsilon_of_delta: delta outside the monotone interval (0, delta_N)");
    return d * std::pow(delta, dim - 2) * std::abs(std::log(delta));
}

double delta_of_epsilon_rate(double d, double eps, int dim) {
    if (!(d > 0.0)) throw std::invalid_argument("delta_of_epsilon_rate: d must be > 0");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("delta_of_epsilon_rate: eps must lie in (0, 1)");
    return std::pow(d * eps / std::abs(std::log(eps)), 1.0 / (dim - 2));
}

double delta_of_epsilon_exact(double d, double eps, int dim) {
    if (!(d > 0.0)) throw std::invalid_argument("delta_of_epsilon_exact: d must be > 0");
    const double dN = delta_endpoint(dim);
    const double eps_sup = d * std::pow(dN, dim - 2) * std::abs(std::log(dN));
    if (!(eps > 0.0 && eps < eps_sup))
        throw std::invalid_argument(
            "delta_of_epsilon_exact: eps outside the range of the monotone branch");
    double lo = 1e-300, hi = dN;
    for (int it = 0; it < 2000; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (d * std::pow(mid, dim - 2) * std::abs(std::log(mid)) < eps)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * hi) break;
    }
    return std::sqrt(lo * hi);
}

double kappa_rate(double d, double eps, int dim) {
    const double delta = delta_of_epsilon_rate(d, eps, dim);
    return std::pow(delta, dim - 2) * std::abs(std::log(delta)) / eps;
}

ReducedConstants reduced_constants(const StructuralConstants& sc) {
    ReducedConstants rc;
    rc.dim = sc.dim;
    const double a = bubble_alpha(sc.dim);
    rc.A1 = a * sc.A;
    rc.A2 = 2.0 * sc.frakB / (sc.dim - 2);
    rc.A3 = 0.5 * a * sc.B;
    if (!(rc.A1 > 0.0 && rc.A2 > 0.0 && rc.A3 > 0.0))
        throw std::runtime_error("reduced_constants: constants must be positive");
    return rc;
}

ReducedConstants reduced_constants(int dim, const QuadratureSettings& settings) {
    return reduced_constants(structural_constants(dim, settings));
}

Eigen::VectorXd F_limit(double d, const Eigen::VectorXd& xi,
                        const DomainSpec& domain, const ReducedConstants& constants) {
    if (!domain.contains(xi))
        throw std::invalid_argument("F_limit: xi outside the domain");
    RobinEvaluation ev = robin(domain, xi);
    Eigen::VectorXd out(domain.dim + 1);
    out[0] = constants.A1 * ev.rho - constants.A2 * d;
    out.tail(domain.dim) = constants.A3 * ev.grad;
    return out;
}

ReducedRoot solve_reduced(const DomainSpec& domain, const Eigen::VectorXd& x0,
                          const ReducedConstants& constants) {
    CriticalPoint cp = find_critical_point(domain, x0, 1e-10);
    if (!cp.nondegenerate)
        throw std::runtime_error(
            "solve_reduced: degenerate critical point of the Robin function");
    ReducedRoot root;
    root.xi0 = cp.xi;
    root.constants = constants;
    root.nondegenerate = cp.nondegenerate;
    root.robin_at_xi0 = robin(domain, cp.xi);
    root.d0 = constants.A1 / constants.A2 * root.robin_at_xi0.rho;
    return root;
}

BlowupPrediction predicted_blowup(double eps, double d0, int dim) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("predicted_blowup: eps must lie in (0, 1)");
    if (!(d0 > 0.0)) throw std::invalid_argument("predicted_blowup: d0 must be > 0");
    BlowupPrediction out;
    out.delta_pred = delta_of_epsilon_rate(d0, eps, dim);
    out.umax_pred = bubble_alpha(dim) * std::pow(out.delta_pred, -0.5 * (dim - 2));
    return out;
}

}  // namespace sublog
