// Standard bubbles U_{delta,xi}, the N+1 kernel generators psi^j of the
// linearized operator, their Dirichlet projections onto the unit ball
// (closed forms when centered, Poisson-kernel extension otherwise), and the
// verification of the projection expansion lemma.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "sublog/quadrature.hpp"

namespace sublog {

struct BubbleParams {
    double delta = 1.0;
    Eigen::VectorXd xi;  // center; empty means origin
    int dim = 3;

    double alpha() const;
    Eigen::VectorXd center() const;
    void validate() const;
};

// alpha_N = [N(N-2)]^{(N-2)/4}
double bubble_alpha(int dim);

// Radial profiles at rho = |y|.
double U_profile(double rho, int dim);
double psi0_profile(double rho, int dim);
// psi^j(y) = psij_profile(|y|) * y_j for j = 1..N.
double psij_profile(double rho, int dim);

double eval_U(const Eigen::VectorXd& y, int dim);
double eval_U_scaled(const Eigen::VectorXd& x, const BubbleParams& bp);
double eval_psi(const Eigen::VectorXd& y, int j, int dim);
double eval_psi_scaled(const Eigen::VectorXd& x, const BubbleParams& bp, int j);

// int_{R^N} U_{delta,xi}^p psi^j_{delta,xi}, computed by radial quadrature in
// the concentration variable (angular factor exact). Identically zero.
double orthogonality_defect(const BubbleParams& bp, int j,
                            const QuadratureSettings& settings = {});

// Closed-form Dirichlet projection onto the centered unit ball.
// kernel = -1 selects PU, kernel = 0..N selects P psi^j.
class ClosedFormProjection {
  public:
    ClosedFormProjection(const BubbleParams& bp, int kernel);

    double operator()(const Eigen::VectorXd& x) const;
    // Harmonic part subtracted from the free-space function at x.
    double correction(const Eigen::VectorXd& x) const;
    // Radial evaluation; valid for PU and P psi^0 only.
    double radial(double r) const;

    int kernel() const { return kernel_; }
    const BubbleParams& params() const { return bp_; }

  private:
    BubbleParams bp_;
    int kernel_;
    double boundary_trace_;  // constant trace for kernel -1 and 0
};

// Throws std::invalid_argument when xi != 0 (closed form unavailable; use
// harmonic_extension_ball).
ClosedFormProjection project_ball_centered(const BubbleParams& bp, int kernel = -1);

// Product Gauss-Legendre rule on the unit sphere S^{N-1}, dims 3..5.
struct SphereRule {
    std::vector<Eigen::VectorXd> points;
    std::vector<double> weights;  // sum to omega_N
};
SphereRule sphere_rule(int dim, int order = 0);  // order 0 picks a default

// Poisson integral of boundary data g over the unit sphere, evaluated at an
// interior point |x| < 1.
double harmonic_extension_ball(
    const std::function<double(const Eigen::VectorXd&)>& g,
    const Eigen::VectorXd& x, const SphereRule& rule);
double harmonic_extension_ball(
    const std::function<double(const Eigen::VectorXd&)>& g,
    const Eigen::VectorXd& x, int dim);

// Residual order of the projection expansions on the centered unit ball.
// which is one of "e1", "e2", "e3". Requires >= 4 geometrically spaced deltas
// in (0, 0.3]. The fit drops the largest delta.
OrderFit expansion_residual(const std::string& which,
                            std::span<const double> deltas, int dim);

// Gram matrix <P psi^i, P psi^j> on the centered unit ball, computed from
// p U^{p-1} psi^i P psi^j by radial quadrature with exact angular moments.
Eigen::MatrixXd projected_kernel_gram(double delta, int dim,
                                      const QuadratureSettings& settings = {});

}  // namespace sublog
