#include "sublog/bubbles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sublog {

double bubble_alpha(int dim) {
    if (dim < 3) throw std::invalid_argument("bubble_alpha: dim must be >= 3");
    return std::pow(static_cast<double>(dim) * (dim - 2), 0.25 * (dim - 2));
}

double BubbleParams::alpha() const { return bubble_alpha(dim); }

Eigen::VectorXd BubbleParams::center() const {
    if (xi.size() == 0) return Eigen::VectorXd::Zero(dim);
    return xi;
}

void BubbleParams::validate() const {
    if (dim < 3) throw std::invalid_argument("BubbleParams: dim must be >= 3");
    if (!(delta > 0.0)) throw std::invalid_argument("BubbleParams: delta must be > 0");
    if (xi.size() != 0 && xi.size() != dim)
        throw std::invalid_argument("BubbleParams: xi dimension mismatch");
}

double U_profile(double rho, int dim) {
    return bubble_alpha(dim) * std::pow(1.0 + rho * rho, -0.5 * (dim - 2));
}

double psi0_profile(double rho, int dim) {
    return 0.5 * (dim - 2) * bubble_alpha(dim) * (rho * rho - 1.0) *
           std::pow(1.0 + rho * rho, -0.5 * dim);
}

double psij_profile(double rho, int dim) {
    return (dim - 2) * bubble_alpha(dim) * std::pow(1.0 + rho * rho, -0.5 * dim);
}

double eval_U(const Eigen::VectorXd& y, int dim) {
    return U_profile(y.norm(), dim);
}

double eval_U_scaled(const Eigen::VectorXd& x, const BubbleParams& bp) {
    bp.validate();
    const Eigen::VectorXd y = (x - bp.center()) / bp.delta;
    return std::pow(bp.delta, -0.5 * (bp.dim - 2)) * eval_U(y, bp.dim);
}

double eval_psi(const Eigen::VectorXd& y, int j, int dim) {
    if (j < 0 || j > dim) throw std::invalid_argument("eval_psi: kernel index out of range");
    if (j == 0) return psi0_profile(y.norm(), dim);
    return psij_profile(y.norm(), dim) * y[j - 1];
}

double eval_psi_scaled(const Eigen::VectorXd& x, const BubbleParams& bp, int j) {
    bp.validate();
    const Eigen::VectorXd y = (x - bp.center()) / bp.delta;
    return std::pow(bp.delta, -0.5 * (bp.dim - 2)) * eval_psi(y, j, bp.dim);
}

double orthogonality_defect(const BubbleParams& bp, int j,
                            const QuadratureSettings& settings) {
    bp.validate();
    if (j < 0 || j > bp.dim)
        throw std::invalid_argument("orthogonality_defect: kernel index out of range");
    const int N = bp.dim;
    const double p = (N + 2.0) / (N - 2.0);
    // After y = (x - xi)/delta the integral is delta-free; the angular factor
    // is omega_N for j = 0 and int_{S^{N-1}} theta_j = 0 for j >= 1.
    const double angular = (j == 0) ? omega_sphere(N) : 0.0;
    const double brk[] = {1.0};
    auto profile = [&](double s) {
        const double base = std::pow(U_profile(s, N), p) * std::pow(s, N - 1);
        return base * (j == 0 ? psi0_profile(s, N) : psij_profile(s, N) * s);
    };
    IntegralResult radial = radial_integral(profile, settings, brk);
    if (!radial.converged)
        throw std::runtime_error("orthogonality_defect: quadrature did not converge, error " +
                                 std::to_string(radial.error));
    return angular * radial.value;
}

ClosedFormProjection::ClosedFormProjection(const BubbleParams& bp, int kernel)
    : bp_(bp), kernel_(kernel) {
    bp_.validate();
    if (kernel < -1 || kernel > bp.dim)
        throw std::invalid_argument("ClosedFormProjection: kernel index out of range");
    if (bp_.center().norm() != 0.0)
        throw std::invalid_argument(
            "project_ball_centered: closed form requires xi = 0; use "
            "harmonic_extension_ball for off-center bubbles");
    const int N = bp_.dim;
    const double d = bp_.delta;
    const double a = bp_.alpha();
    const double dh = std::pow(d, 0.5 * (N - 2));
    if (kernel_ == -1) {
        boundary_trace_ = a * dh * std::pow(1.0 + d * d, -0.5 * (N - 2));
    } else if (kernel_ == 0) {
        boundary_trace_ = 0.5 * (N - 2) * a * dh * (1.0 - d * d) *
                          std::pow(1.0 + d * d, -0.5 * N);
    } else {
        // correction is (N-2) a d^{N/2} (1+d^2)^{-N/2} x_j; store the coefficient
        boundary_trace_ = (N - 2) * a * std::pow(d, 0.5 * N) *
                          std::pow(1.0 + d * d, -0.5 * N);
    }
}

double ClosedFormProjection::correction(const Eigen::VectorXd& x) const {
    if (kernel_ <= 0) return boundary_trace_;
    return boundary_trace_ * x[kernel_ - 1];
}

double ClosedFormProjection::operator()(const Eigen::VectorXd& x) const {
    if (kernel_ == -1) return eval_U_scaled(x, bp_) - boundary_trace_;
    return eval_psi_scaled(x, bp_, kernel_) - correction(x);
}

double ClosedFormProjection::radial(double r) const {
    if (kernel_ > 0)
        throw std::invalid_argument("ClosedFormProjection::radial: P psi^j is not radial");
    const double s = r / bp_.delta;
    const double scale = std::pow(bp_.delta, -0.5 * (bp_.dim - 2));
    const double free_part =
        (kernel_ == -1) ? U_profile(s, bp_.dim) : psi0_profile(s, bp_.dim);
    return scale * free_part - boundary_trace_;
}

ClosedFormProjection project_ball_centered(const BubbleParams& bp, int kernel) {
    return ClosedFormProjection(bp, kernel);
}

namespace {

// Gauss-Legendre nodes on (-1,1) by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

// Recursive product rule: S^{m} slice z = (cos t, sin t * w), w in S^{m-1},
// with surface weight sin^{m-1} t.
void build_sphere(int sphere_dim, int polar_n, int azimuth_n,
                  std::vector<Eigen::VectorXd>& pts, std::vector<double>& wts) {
    if (sphere_dim == 1) {
        pts.clear();
        wts.clear();
        for (int j = 0; j < azimuth_n; ++j) {
            const double phi = 2.0 * M_PI * j / azimuth_n;
            Eigen::VectorXd z(2);
            z << std::cos(phi), std::sin(phi);
            pts.push_back(z);
            wts.push_back(2.0 * M_PI / azimuth_n);
        }
        return;
    }
    std::vector<Eigen::VectorXd> sub_pts;
    std::vector<double> sub_wts;
    build_sphere(sphere_dim - 1, polar_n, azimuth_n, sub_pts, sub_wts);
    std::vector<double> gl_nodes, gl_weights;
    gauss_legendre(polar_n, gl_nodes, gl_weights);
    pts.clear();
    wts.clear();
    for (int i = 0; i < polar_n; ++i) {
        // t in (0, pi), node mapped from (-1,1)
        const double t = 0.5 * M_PI * (gl_nodes[i] + 1.0);
        const double wt = 0.5 * M_PI * gl_weights[i] *
                          std::pow(std::sin(t), sphere_dim - 1);
        for (std::size_t k = 0; k < sub_pts.size(); ++k) {
            Eigen::VectorXd z(sphere_dim + 1);
            z[0] = std::cos(t);
            z.tail(sphere_dim) = std::sin(t) * sub_pts[k];
            pts.push_back(z);
            wts.push_back(wt * sub_wts[k]);
        }
    }
}

}  // namespace

SphereRule sphere_rule(int dim, int order) {
    if (dim < 3 || dim > 5)
        throw std::invalid_argument("sphere_rule: supported dims are 3, 4, 5");
    int polar = order;
    if (polar <= 0) polar = (dim == 3) ? 64 : (dim == 4 ? 40 : 24);
    const int azimuth = 2 * polar;
    SphereRule rule;
    build_sphere(dim - 1, polar, azimuth, rule.points, rule.weights);
    return rule;
}

double harmonic_extension_ball(
    const std::function<double(const Eigen::VectorXd&)>& g,
    const Eigen::VectorXd& x, const SphereRule& rule) {
    const int dim = static_cast<int>(x.size());
    const double r2 = x.squaredNorm();
    if (!(r2 < 1.0))
        throw std::invalid_argument("harmonic_extension_ball: x must be interior");
    const double norm = omega_sphere(dim);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
        const double d = (x - rule.points[k]).norm();
        acc += rule.weights[k] * g(rule.points[k]) / std::pow(d, dim);
    }
    return (1.0 - r2) / norm * acc;
}

double harmonic_extension_ball(
    const std::function<double(const Eigen::VectorXd&)>& g,
    const Eigen::VectorXd& x, int dim) {
    return harmonic_extension_ball(g, x, sphere_rule(dim));
}

OrderFit expansion_residual(const std::string& which,
                            std::span<const double> deltas, int dim) {
    if (deltas.size() < 4)
        throw std::invalid_argument("expansion_residual: need at least 4 delta values");
    for (double d : deltas)
        if (!(d > 0.0 && d <= 0.3))
            throw std::invalid_argument("expansion_residual: deltas must lie in (0, 0.3]");
    int kernel;
    if (which == "e1") kernel = -1;
    else if (which == "e2") kernel = 0;
    else if (which == "e3") kernel = 1;
    else throw std::invalid_argument("expansion_residual: which must be e1, e2 or e3");

    const int N = dim;
    const double a = bubble_alpha(N);

    // sample grid: ray along e1 plus seeded random interior points
    std::vector<Eigen::VectorXd> grid;
    for (int i = 1; i <= 19; ++i) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
        x[0] = 0.05 * i;
        grid.push_back(x);
    }
    std::mt19937_64 rng(20240517u);
    std::uniform_real_distribution<double> coord(-0.6, 0.6);
    for (int k = 0; k < 40; ++k) {
        Eigen::VectorXd x(N);
        for (int c = 0; c < N; ++c) x[c] = coord(rng);
        if (x.norm() < 0.98) grid.push_back(x);
    }

    OrderFit fit;
    fit.which = which;
    for (double d : deltas) {
        BubbleParams bp{d, Eigen::VectorXd::Zero(N), N};
        ClosedFormProjection proj(bp, kernel);
        const double dh = std::pow(d, 0.5 * (N - 2));
        double sup = 0.0;
        for (const auto& x : grid) {
            double model;
            if (kernel == -1) {
                // H(x,0) = 1 on the unit ball
                model = proj(x) - eval_U_scaled(x, bp) + a * dh;
            } else if (kernel == 0) {
                model = proj(x) - eval_psi_scaled(x, bp, 0) + 0.5 * (N - 2) * a * dh;
            } else {
                // d_{xi_1} H(x, 0) = (N-2) x_1
                model = proj(x) - eval_psi_scaled(x, bp, 1) +
                        a * std::pow(d, 0.5 * N) * (N - 2) * x[0];
            }
            sup = std::max(sup, std::abs(model));
        }
        fit.deltas.push_back(d);
        fit.residuals.push_back(sup);
    }

    // model orders on the centered ball; e3's closed form beats the generic one
    fit.slope_model = (kernel == 1) ? 0.5 * (N + 4) : 0.5 * (N + 2);

    std::vector<double> lx, ly;
    std::size_t start = 1;  // drop the largest delta (pre-asymptotic)
    std::vector<std::size_t> order(fit.deltas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return fit.deltas[i] > fit.deltas[j];
    });
    for (std::size_t k = start; k < order.size(); ++k) {
        lx.push_back(std::log(fit.deltas[order[k]]));
        ly.push_back(std::log(fit.residuals[order[k]]));
    }
    fit.slope = fit_line(lx, ly).slope;

    // prefactor from the smallest delta at the model order
    const std::size_t last = order.back();
    fit.prefactor = fit.residuals[last] / std::pow(fit.deltas[last], fit.slope_model);
    return fit;
}

Eigen::MatrixXd projected_kernel_gram(double delta, int dim,
                                      const QuadratureSettings& settings) {
    const int N = dim;
    const double p = (N + 2.0) / (N - 2.0);
    BubbleParams bp{delta, Eigen::VectorXd::Zero(N), N};
    const double scale = std::pow(delta, -0.5 * (N - 2));
    const ClosedFormProjection proj0(bp, 0);
    const double cj = (N - 2) * bubble_alpha(N) * std::pow(delta, 0.5 * N) *
                      std::pow(1.0 + delta * delta, -0.5 * N);

    auto Ud = [&](double r) { return scale * U_profile(r / delta, N); };
    auto psi0d = [&](double r) { return scale * psi0_profile(r / delta, N); };
    // psi^j_{delta,0}(x) = Sj(r) x_j
    auto Sj = [&](double r) { return scale * psij_profile(r / delta, N) / delta; };

    const double brk[] = {delta};
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(N + 1, N + 1);

    auto integrate_radial = [&](const Integrand& f) {
        IntegralResult res = integrate(f, 0.0, 1.0, settings, brk);
        if (!res.converged)
            throw std::runtime_error("projected_kernel_gram: quadrature did not converge");
        return res.value;
    };

    // <P psi^0, P psi^0> = p int U^{p-1} psi^0 (psi^0 - c0)
    gram(0, 0) = omega_sphere(N) *
                 integrate_radial([&](double r) {
                     const double up = std::pow(Ud(r), p - 1.0);
                     return p * up * psi0d(r) * proj0.radial(r) * std::pow(r, N - 1);
                 });
    // <P psi^j, P psi^j> = p int U^{p-1} Sj (Sj - cj) x_j^2; angular factor omega/N
    const double diag_j = omega_sphere(N) / N *
                          integrate_radial([&](double r) {
                              const double up = std::pow(Ud(r), p - 1.0);
                              return p * up * Sj(r) * (Sj(r) - cj) *
                                     std::pow(r, N + 1);
                          });
    for (int j = 1; j <= N; ++j) gram(j, j) = diag_j;
    // off-diagonal entries carry odd angular moments and vanish identically
    return gram;
}

}  // namespace sublog
