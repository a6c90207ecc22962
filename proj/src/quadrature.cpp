#include "sublog/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace sublog {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    const double fc = f(center);
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[j] = f(center - dx);
        fv[14 - j] = f(center + dx);
    }

    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        resk += kWgk[j] * (fv[j] + fv[14 - j]);
        if (j % 2 == 1) resg += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[14 - j] - reskh));
    resasc *= std::abs(half);

    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return {a, b, resk * half, err};
}

}  // namespace

IntegralResult integrate(const Integrand& f, double a, double b,
                         const QuadratureSettings& settings,
                         std::span<const double> breakpoints) {
    if (!(b > a)) throw std::invalid_argument("integrate: empty interval");
    if (settings.abs_tol <= 0 || settings.rel_tol <= 0 ||
        settings.max_subdivisions < 10)
        throw std::invalid_argument("integrate: invalid quadrature settings");

    std::vector<double> knots{a};
    for (double p : breakpoints)
        if (p > a && p < b) knots.push_back(p);
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());

    std::priority_queue<Segment> queue;
    double value = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        Segment s = gk15(f, knots[i], knots[i + 1]);
        value += s.value;
        error += s.error;
        queue.push(s);
    }

    int splits = static_cast<int>(knots.size()) - 2;
    IntegralResult out;
    while (true) {
        const double tol = std::max(settings.abs_tol,
                                    settings.rel_tol * std::abs(value));
        if (error <= tol) {
            out = {value, error, true, splits};
            return out;
        }
        if (splits >= settings.max_subdivisions) break;
        Segment worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval at roundoff width
        queue.pop();
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++splits;
    }
    out = {value, error,
           error <= std::max(settings.abs_tol, settings.rel_tol * std::abs(value)),
           splits};
    return out;
}

IntegralResult integrate_to_infinity(const Integrand& f, double a,
                                     const QuadratureSettings& settings,
                                     std::span<const double> breakpoints) {
    auto mapped = [&f, a](double t) {
        const double om = 1.0 - t;
        const double r = a + t / om;
        return f(r) / (om * om);
    };
    std::vector<double> tknots;
    for (double p : breakpoints)
        if (p > a) tknots.push_back((p - a) / (1.0 + p - a));
    // keep the compactified endpoint strictly inside (0,1)
    return integrate(mapped, 0.0, 1.0 - 1e-14, settings, tknots);
}

IntegralResult radial_integral(const Integrand& f,
                               const QuadratureSettings& settings,
                               std::span<const double> breakpoints) {
    return integrate_to_infinity(f, 0.0, settings, breakpoints);
}

double omega_sphere(int dim) {
    if (dim < 1) throw std::invalid_argument("omega_sphere: dim must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need >= 2 points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        ss += r * r;
    }
    if (n > 2) fit.slope_stderr = std::sqrt(ss / ((n - 2) * sxx));
    return fit;
}

}  // namespace sublog
