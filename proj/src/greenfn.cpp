#include "sublog/greenfn.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sublog {

DomainSpec DomainSpec::unit_ball(int dim) {
    DomainSpec d;
    d.kind = Kind::UnitBall;
    d.dim = dim;
    d.validate();
    return d;
}

DomainSpec DomainSpec::box(const Eigen::VectorXd& sides, int resolution) {
    DomainSpec d;
    d.kind = Kind::Box;
    d.dim = static_cast<int>(sides.size());
    d.sides = sides;
    d.resolution = resolution;
    d.validate();
    return d;
}

void DomainSpec::validate() const {
    if (dim < 3) throw std::invalid_argument("DomainSpec: dim must be >= 3");
    if (kind == Kind::Box) {
        if (sides.size() != dim) throw std::invalid_argument("DomainSpec: sides/dim mismatch");
        if (sides.minCoeff() <= 0.0) throw std::invalid_argument("DomainSpec: sides must be > 0");
        if (resolution < 17) throw std::invalid_argument("DomainSpec: resolution must be >= 17");
    }
}

bool DomainSpec::contains(const Eigen::VectorXd& x, double margin) const {
    if (x.size() != dim) return false;
    if (kind == Kind::UnitBall) return x.norm() < 1.0 - margin;
    for (int a = 0; a < dim; ++a)
        if (x[a] < margin * sides[a] || x[a] > (1.0 - margin) * sides[a]) return false;
    return true;
}

double H_ball(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int dim) {
    if (!(x.norm() < 1.0) || !(y.norm() < 1.0))
        throw std::invalid_argument("H_ball: arguments must be interior to the unit ball");
    const double s = 1.0 + x.squaredNorm() * y.squaredNorm() - 2.0 * x.dot(y);
    return std::pow(s, 0.5 * (2 - dim));
}

Eigen::VectorXd H_ball_grad_y(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                              int dim) {
    const double s = 1.0 + x.squaredNorm() * y.squaredNorm() - 2.0 * x.dot(y);
    const Eigen::VectorXd ds = 2.0 * x.squaredNorm() * y - 2.0 * x;
    return 0.5 * (2 - dim) * std::pow(s, -0.5 * dim) * ds;
}

namespace {

// SOR solve of Delta h = 0 on a tensor grid with Dirichlet data
// g(z) = |z - x0|^{2-N} on the box boundary; multilinear value at eval_at.
class BoxSolver {
  public:
    BoxSolver(const DomainSpec& domain) : domain_(domain) {
        domain_.validate();
        const int N = domain_.dim;
        res_ = domain_.resolution;
        h_.resize(N);
        for (int a = 0; a < N; ++a) h_[a] = domain_.sides[a] / (res_ - 1);
        stride_.resize(N);
        total_ = 1;
        for (int a = 0; a < N; ++a) {
            stride_[a] = total_;
            total_ *= res_;
        }
    }

    double solve_at(const Eigen::VectorXd& x0, const Eigen::VectorXd& eval_at) {
        const int N = domain_.dim;
        std::vector<double> u(total_, 0.0);
        std::vector<char> boundary(total_, 0);
        double gmax = 0.0;

        std::vector<int> idx(N, 0);
        for (long long flat = 0; flat < total_; ++flat) {
            bool bd = false;
            for (int a = 0; a < N; ++a)
                if (idx[a] == 0 || idx[a] == res_ - 1) bd = true;
            if (bd) {
                Eigen::VectorXd z(N);
                for (int a = 0; a < N; ++a) z[a] = idx[a] * h_[a];
                const double g = std::pow((z - x0).norm(), 2.0 - N);
                u[flat] = g;
                boundary[flat] = 1;
                gmax = std::max(gmax, std::abs(g));
            }
            for (int a = 0; a < N; ++a) {
                if (++idx[a] < res_) break;
                idx[a] = 0;
            }
        }

        // interior initial guess: mean boundary level
        double gmean = 0.0;
        long long nb = 0;
        for (long long f = 0; f < total_; ++f)
            if (boundary[f]) {
                gmean += u[f];
                ++nb;
            }
        gmean /= nb;
        for (long long f = 0; f < total_; ++f)
            if (!boundary[f]) u[f] = gmean;

        std::vector<double> inv_h2(N);
        double diag = 0.0, rho_num = 0.0, rho_den = 0.0;
        for (int a = 0; a < N; ++a) {
            inv_h2[a] = 1.0 / (h_[a] * h_[a]);
            diag += 2.0 * inv_h2[a];
            rho_num += std::cos(M_PI * h_[a] / domain_.sides[a]) * inv_h2[a];
            rho_den += inv_h2[a];
        }
        const double rho_jacobi = rho_num / rho_den;
        const double omega = 2.0 / (1.0 + std::sqrt(1.0 - rho_jacobi * rho_jacobi));

        const double tol = 1e-10 * std::max(1.0, gmax);
        const long long max_sweeps = 40LL * res_ + 2000;
        double max_res = 0.0;
        for (long long sweep = 0; sweep < max_sweeps; ++sweep) {
            max_res = 0.0;
            std::fill(idx.begin(), idx.end(), 0);
            for (long long flat = 0; flat < total_; ++flat) {
                if (!boundary[flat]) {
                    double r = -diag * u[flat];
                    for (int a = 0; a < N; ++a)
                        r += inv_h2[a] * (u[flat + stride_[a]] + u[flat - stride_[a]]);
                    max_res = std::max(max_res, std::abs(r));
                    u[flat] += omega * r / diag;
                }
                for (int a = 0; a < N; ++a) {
                    if (++idx[a] < res_) break;
                    idx[a] = 0;
                }
            }
            if (max_res <= tol) break;
        }
        if (max_res > tol)
            throw std::runtime_error("box robin solve: SOR did not reach residual " +
                                     std::to_string(tol));

        // multilinear interpolation at eval_at
        std::vector<int> base(N);
        std::vector<double> frac(N);
        for (int a = 0; a < N; ++a) {
            double t = eval_at[a] / h_[a];
            int i = static_cast<int>(std::floor(t));
            i = std::min(std::max(i, 0), res_ - 2);
            base[a] = i;
            frac[a] = t - i;
        }
        double value = 0.0;
        const int corners = 1 << N;
        for (int c = 0; c < corners; ++c) {
            double w = 1.0;
            long long flat = 0;
            for (int a = 0; a < N; ++a) {
                const int bit = (c >> a) & 1;
                w *= bit ? frac[a] : (1.0 - frac[a]);
                flat += static_cast<long long>(base[a] + bit) * stride_[a];
            }
            value += w * u[flat];
        }
        return value;
    }

    double cell(int axis) const { return h_[axis]; }

  private:
    DomainSpec domain_;
    int res_ = 0;
    long long total_ = 0;
    std::vector<double> h_;
    std::vector<long long> stride_;
};

void require_interior(const DomainSpec& domain, const Eigen::VectorXd& x) {
    double margin = 0.0;
    if (domain.kind == DomainSpec::Kind::Box)
        margin = 1.0 / (domain.resolution - 1);
    if (!domain.contains(x, margin))
        throw std::invalid_argument("robin: point too close to the boundary or outside");
}

}  // namespace

double box_harmonic_at(const DomainSpec& domain, const Eigen::VectorXd& x0,
                       const Eigen::VectorXd& eval_at) {
    BoxSolver solver(domain);
    return solver.solve_at(x0, eval_at);
}

double robin_value(const DomainSpec& domain, const Eigen::VectorXd& x) {
    domain.validate();
    require_interior(domain, x);
    if (domain.kind == DomainSpec::Kind::UnitBall)
        return std::pow(1.0 - x.squaredNorm(), 2.0 - domain.dim);
    return box_harmonic_at(domain, x, x);
}

RobinEvaluation robin(const DomainSpec& domain, const Eigen::VectorXd& x) {
    domain.validate();
    require_interior(domain, x);
    const int N = domain.dim;
    RobinEvaluation ev;
    ev.x = x;

    if (domain.kind == DomainSpec::Kind::UnitBall) {
        const double s = x.squaredNorm();
        const double base = 1.0 - s;
        ev.rho = std::pow(base, 2.0 - N);
        ev.grad = 2.0 * (N - 2) * std::pow(base, 1.0 - N) * x;
        ev.hessian = 2.0 * (N - 2) * std::pow(base, 1.0 - N) *
                         Eigen::MatrixXd::Identity(N, N) +
                     4.0 * (N - 2) * (N - 1) * std::pow(base, -static_cast<double>(N)) *
                         x * x.transpose();
        ev.method = RobinEvaluation::Method::ClosedForm;
        return ev;
    }

    // grid evaluation: rho at x and at the 2-cell FD stencil points
    ev.method = RobinEvaluation::Method::Grid;
    BoxSolver probe(domain);
    std::vector<double> hfd(N);
    for (int a = 0; a < N; ++a) hfd[a] = 2.0 * probe.cell(a);

    auto value = [&](const Eigen::VectorXd& p) { return box_harmonic_at(domain, p, p); };
    const double center = value(x);
    ev.rho = center;
    ev.grad = Eigen::VectorXd::Zero(N);
    ev.hessian = Eigen::MatrixXd::Zero(N, N);

    std::vector<double> plus(N), minus(N);
    for (int a = 0; a < N; ++a) {
        Eigen::VectorXd xp = x, xm = x;
        xp[a] += hfd[a];
        xm[a] -= hfd[a];
        plus[a] = value(xp);
        minus[a] = value(xm);
        ev.grad[a] = (plus[a] - minus[a]) / (2.0 * hfd[a]);
        ev.hessian(a, a) = (plus[a] - 2.0 * center + minus[a]) / (hfd[a] * hfd[a]);
    }
    for (int a = 0; a < N; ++a) {
        for (int b = a + 1; b < N; ++b) {
            Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[a] += hfd[a]; xpp[b] += hfd[b];
            xpm[a] += hfd[a]; xpm[b] -= hfd[b];
            xmp[a] -= hfd[a]; xmp[b] += hfd[b];
            xmm[a] -= hfd[a]; xmm[b] -= hfd[b];
            const double cross = (value(xpp) - value(xpm) - value(xmp) + value(xmm)) /
                                 (4.0 * hfd[a] * hfd[b]);
            ev.hessian(a, b) = cross;
            ev.hessian(b, a) = cross;
        }
    }
    return ev;
}

CriticalPoint find_critical_point(const DomainSpec& domain,
                                  const Eigen::VectorXd& x0, double tol) {
    domain.validate();
    const int N = domain.dim;
    Eigen::VectorXd x = x0;
    CriticalPoint out;

    for (int it = 0; it < 60; ++it) {
        RobinEvaluation ev = robin(domain, x);
        out.iterations = it;
        out.grad_norm = ev.grad.norm();
        out.hessian = ev.hessian;
        if (out.grad_norm <= tol) {
            out.xi = x;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(ev.hessian);
            const double smin = svd.singularValues().minCoeff();
            const double smax = svd.singularValues().maxCoeff();
            out.nondegenerate = smin >= 1e-6 * (1.0 + smax);
            return out;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(ev.hessian);
        if (!lu.isInvertible())
            throw std::runtime_error("find_critical_point: singular Hessian");
        Eigen::VectorXd step = lu.solve(-ev.grad);
        Eigen::VectorXd xn = x + step;
        // halve steps that leave the domain interior
        int guard = 0;
        double interior_margin =
            domain.kind == DomainSpec::Kind::Box ? 1.5 / (domain.resolution - 1) : 1e-6;
        while (!domain.contains(xn, interior_margin) && guard++ < 50) xn = 0.5 * (x + xn);
        if (!domain.contains(xn, interior_margin))
            throw std::runtime_error("find_critical_point: iterate left the domain");
        x = xn;
    }
    throw std::runtime_error("find_critical_point: no convergence within 60 iterations");
}

}  // namespace sublog
