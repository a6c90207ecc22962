// Green function regular part H, Robin function rho = H(x,x), and critical
// point location. Unit ball: method-of-images closed forms. Boxes: Dirichlet
// harmonic extension of |z-x|^{2-N} on a tensor grid by SOR.
#pragma once

#include <Eigen/Dense>

namespace sublog {

struct DomainSpec {
    enum class Kind { UnitBall, Box } kind = Kind::UnitBall;
    int dim = 3;
    Eigen::VectorXd sides;  // box side lengths
    int resolution = 33;    // grid nodes per axis (boxes)

    static DomainSpec unit_ball(int dim);
    static DomainSpec box(const Eigen::VectorXd& sides, int resolution);
    void validate() const;
    bool contains(const Eigen::VectorXd& x, double margin = 0.0) const;
};

// Regular part of the Green function of the unit ball:
//   H(x,y) = (1 + |x|^2 |y|^2 - 2 x.y)^{(2-N)/2}
double H_ball(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int dim);

// Gradient of H_ball in its second argument.
Eigen::VectorXd H_ball_grad_y(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                              int dim);

struct RobinEvaluation {
    Eigen::VectorXd x;
    double rho = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hessian;
    enum class Method { ClosedForm, Grid } method = Method::ClosedForm;
};

// Robin function with gradient and Hessian. Ball: closed form
// rho(x) = (1-|x|^2)^{2-N}. Box: one grid solve per evaluation point with
// central differences of step two grid cells.
RobinEvaluation robin(const DomainSpec& domain, const Eigen::VectorXd& x);

// Value only (single grid solve for boxes).
double robin_value(const DomainSpec& domain, const Eigen::VectorXd& x);

struct CriticalPoint {
    Eigen::VectorXd xi;
    Eigen::MatrixXd hessian;
    bool nondegenerate = false;
    int iterations = 0;
    double grad_norm = 0.0;
};

// Newton iteration on grad rho. Non-degeneracy:
// sigma_min(Hessian) >= 1e-6 (1 + ||Hessian||).
CriticalPoint find_critical_point(const DomainSpec& domain,
                                  const Eigen::VectorXd& x0, double tol = 1e-10);

// SOR solve of the box harmonic extension; exposed for convergence tests.
// Returns the interpolated value h(x) where Delta h = 0, h|_boundary(z) =
// |z - x0|^{2-N}; rho(x0) = box_harmonic_at(domain, x0, x0).
double box_harmonic_at(const DomainSpec& domain, const Eigen::VectorXd& x0,
                       const Eigen::VectorXd& eval_at);

}  // namespace sublog
