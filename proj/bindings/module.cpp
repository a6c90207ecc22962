// Python bindings for the main operations.
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sublog/bubbles.hpp"
#include "sublog/greenfn.hpp"
#include "sublog/nonlinearity.hpp"
#include "sublog/quadrature.hpp"
#include "sublog/radial_pde.hpp"
#include "sublog/reduced.hpp"

namespace py = pybind11;
using namespace sublog;

PYBIND11_MODULE(_core, m) {
    m.doc() = "log-damped critical bubble laboratory";

    py::class_<NonlinearityParams>(m, "NonlinearityParams")
        .def(py::init([](int dim, double eps) {
                 NonlinearityParams p{dim, eps};
                 p.validate();
                 return p;
             }),
             py::arg("dim"), py::arg("eps"))
        .def_readonly("dim", &NonlinearityParams::dim)
        .def_readonly("eps", &NonlinearityParams::eps)
        .def_property_readonly("two_star", &NonlinearityParams::two_star)
        .def_property_readonly("p", &NonlinearityParams::p);

    m.def("eval_f", &eval_f, py::arg("u"), py::arg("params"));
    m.def("eval_fprime", &eval_fprime, py::arg("u"), py::arg("params"));
    m.def("eval_fsecond", &eval_fsecond, py::arg("u"), py::arg("params"));
    m.def("loglog_decompose",
          [](double u, double r, double delta) {
              LogLogParts parts = loglog_decompose(u, r, delta);
              return std::make_pair(parts.lead, parts.shift);
          },
          py::arg("u"), py::arg("r"), py::arg("delta"));
    m.def("verify_bound_suite",
          [](long long samples, double eps_max, int dim, std::uint64_t seed) {
              BoundReport rep = verify_bound_suite(samples, eps_max, {dim, 0.0}, seed);
              py::dict out;
              out["samples"] = rep.samples;
              out["violations"] = rep.violations();
              out["violations_i"] = rep.violations_i;
              out["violations_ii_size"] = rep.violations_ii_size;
              out["violations_ii_diff"] = rep.violations_ii_diff;
              out["empirical_C"] = rep.empirical_C_iii;
              out["worst"] = py::make_tuple(rep.worst.u, rep.worst.v, rep.worst.eps);
              return out;
          },
          py::arg("samples"), py::arg("eps_max"), py::arg("dim"), py::arg("seed"));

    m.def("bubble_alpha", &bubble_alpha, py::arg("dim"));
    m.def("eval_U", &eval_U, py::arg("y"), py::arg("dim"));
    m.def("eval_U_scaled",
          [](const Eigen::VectorXd& x, double delta, const Eigen::VectorXd& xi, int dim) {
              return eval_U_scaled(x, {delta, xi, dim});
          },
          py::arg("x"), py::arg("delta"), py::arg("xi"), py::arg("dim"));
    m.def("eval_psi", &eval_psi, py::arg("y"), py::arg("j"), py::arg("dim"));
    m.def("eval_psi_scaled",
          [](const Eigen::VectorXd& x, double delta, const Eigen::VectorXd& xi, int dim,
             int j) { return eval_psi_scaled(x, {delta, xi, dim}, j); },
          py::arg("x"), py::arg("delta"), py::arg("xi"), py::arg("dim"), py::arg("j"));
    m.def("orthogonality_defect",
          [](double delta, int dim, int j) {
              return orthogonality_defect({delta, Eigen::VectorXd::Zero(dim), dim}, j);
          },
          py::arg("delta"), py::arg("dim"), py::arg("j"));
    m.def("project_ball_centered_value",
          [](const Eigen::VectorXd& x, double delta, int dim, int kernel) {
              ClosedFormProjection proj({delta, Eigen::VectorXd::Zero(dim), dim}, kernel);
              return proj(x);
          },
          py::arg("x"), py::arg("delta"), py::arg("dim"), py::arg("kernel") = -1);
    m.def("harmonic_extension_ball",
          [](const std::function<double(const Eigen::VectorXd&)>& g,
             const Eigen::VectorXd& x) {
              return harmonic_extension_ball(g, x, static_cast<int>(x.size()));
          },
          py::arg("g"), py::arg("x"));

    m.def("H_ball", &H_ball, py::arg("x"), py::arg("y"), py::arg("dim"));
    m.def("robin_ball",
          [](const Eigen::VectorXd& x) {
              RobinEvaluation ev = robin(DomainSpec::unit_ball(static_cast<int>(x.size())), x);
              return py::make_tuple(ev.rho, ev.grad, ev.hessian);
          },
          py::arg("x"));
    m.def("robin_box",
          [](const Eigen::VectorXd& x, const Eigen::VectorXd& sides, int resolution) {
              return robin_value(DomainSpec::box(sides, resolution), x);
          },
          py::arg("x"), py::arg("sides"), py::arg("resolution") = 33);

    m.def("structural_constants",
          [](int dim) {
              StructuralConstants sc = structural_constants(dim);
              py::dict out;
              out["N"] = sc.dim;
              out["A"] = sc.A;
              out["B"] = sc.B;
              out["frakB"] = sc.frakB;
              out["frakB_closed"] = sc.frakB_closed;
              out["sobolev_mass"] = sc.sobolev_mass;
              out["grad_mass"] = sc.grad_mass;
              return out;
          },
          py::arg("dim"));
    m.def("bubble_moment",
          [](const std::string& kind, double q, double delta, int dim) {
              MomentKind k = kind == "U"      ? MomentKind::U
                             : kind == "psi0" ? MomentKind::Psi0
                                              : MomentKind::PsiJ;
              return bubble_moment(k, q, delta, dim);
          },
          py::arg("kind"), py::arg("q"), py::arg("delta"), py::arg("dim"));

    m.def("delta_endpoint", &delta_endpoint, py::arg("dim"));
    m.def("epsilon_of_delta", &epsilon_of_delta, py::arg("d"), py::arg("delta"),
          py::arg("dim"));
    m.def("delta_of_epsilon_rate", &delta_of_epsilon_rate, py::arg("d"), py::arg("eps"),
          py::arg("dim"));
    m.def("delta_of_epsilon_exact", &delta_of_epsilon_exact, py::arg("d"),
          py::arg("eps"), py::arg("dim"));
    m.def("kappa_rate", &kappa_rate, py::arg("d"), py::arg("eps"), py::arg("dim"));
    m.def("reduced_constants",
          [](int dim) {
              ReducedConstants rc = reduced_constants(dim);
              return py::make_tuple(rc.A1, rc.A2, rc.A3);
          },
          py::arg("dim"));
    m.def("solve_reduced_ball",
          [](int dim) {
              ReducedRoot root = solve_reduced(DomainSpec::unit_ball(dim),
                                               Eigen::VectorXd::Constant(dim, 0.1),
                                               reduced_constants(dim));
              return py::make_tuple(root.d0, root.xi0);
          },
          py::arg("dim"));
    m.def("predicted_blowup",
          [](double eps, double d0, int dim) {
              BlowupPrediction bp = predicted_blowup(eps, d0, dim);
              return py::make_tuple(bp.delta_pred, bp.umax_pred);
          },
          py::arg("eps"), py::arg("d0"), py::arg("dim"));

    m.def("continuation_sweep",
          [](int dim, double d0, double eps_start, double ratio, double eps_min) {
              ContinuationSchedule schedule =
                  ContinuationSchedule::geometric(eps_start, ratio, eps_min);
              std::vector<RadialSolution> sweep = continuation_sweep(schedule, dim, d0);
              py::list out;
              for (const auto& sol : sweep) {
                  const double dnum = extract_concentration(sol);
                  py::dict row;
                  row["epsilon"] = sol.epsilon;
                  row["delta_num"] = dnum;
                  row["u0"] = sol.u[0];
                  row["correction_energy"] = correction_energy(sol, dnum);
                  row["newton_iterations"] = sol.newton_iterations;
                  row["converged"] = sol.converged;
                  out.append(row);
              }
              return out;
          },
          py::arg("dim"), py::arg("d0"), py::arg("eps_start") = 0.5,
          py::arg("ratio") = 0.5, py::arg("eps_min") = 7e-6);
}
