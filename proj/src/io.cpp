#include "sublog/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sublog {

using nlohmann::json;

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(row);
    }
    return out;
}

}  // namespace

json to_json(const BoundReport& report) {
    return json{{"samples", report.samples},
                {"violations", report.violations()},
                {"violations_i", report.violations_i},
                {"violations_ii_size", report.violations_ii_size},
                {"violations_ii_diff", report.violations_ii_diff},
                {"empirical_C", report.empirical_C_iii},
                {"worst_case", json{{"u", report.worst.u},
                                    {"v", report.worst.v},
                                    {"eps", report.worst.eps}}}};
}

json to_json(const OrderFit& fit) {
    return json{{"which", fit.which},
                {"slopes", json{{"fitted", fit.slope}, {"model", fit.slope_model}}},
                {"prefactor", fit.prefactor},
                {"log_power", fit.log_power},
                {"deltas", fit.deltas},
                {"residuals", fit.residuals}};
}

json to_json(const StructuralConstants& sc) {
    return json{{"N", sc.dim},
                {"A", sc.A},
                {"B", sc.B},
                {"frakB", sc.frakB},
                {"frakB_closed", sc.frakB_closed},
                {"sobolev_mass", sc.sobolev_mass},
                {"grad_mass", sc.grad_mass}};
}

json to_json(const RobinEvaluation& ev) {
    return json{{"x", vector_to_json(ev.x)},
                {"rho", ev.rho},
                {"grad", vector_to_json(ev.grad)},
                {"hessian", matrix_to_json(ev.hessian)},
                {"method",
                 ev.method == RobinEvaluation::Method::ClosedForm ? "closed_form"
                                                                  : "grid"}};
}

json to_json(const ReducedConstants& rc) {
    return json{{"N", rc.dim}, {"A1", rc.A1}, {"A2", rc.A2}, {"A3", rc.A3}};
}

json to_json(const ReducedRoot& root) {
    return json{{"xi0", vector_to_json(root.xi0)},
                {"d0", root.d0},
                {"constants", to_json(root.constants)},
                {"robin_at_xi0", to_json(root.robin_at_xi0)},
                {"nondegenerate", root.nondegenerate}};
}

json to_json(const RateFit& fit) {
    return json{{"slope", fit.slope},
                {"slope_halfwidth", fit.slope_halfwidth},
                {"d_hat", fit.d_hat},
                {"d_hat_halfwidth", fit.d_hat_halfwidth},
                {"points", fit.points}};
}

DomainSpec domain_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("domain: expected object with a 'kind' field");
    const std::string kind = j.at("kind").get<std::string>();
    const int N = j.value("N", 3);
    if (kind == "ball" || kind == "unit_ball") return DomainSpec::unit_ball(N);
    if (kind == "box") {
        Eigen::VectorXd sides = Eigen::VectorXd::Ones(N);
        if (j.contains("sides")) {
            const auto& arr = j.at("sides");
            if (!arr.is_array() || static_cast<int>(arr.size()) != N)
                throw std::invalid_argument("domain: sides must be an array of length N");
            for (int a = 0; a < N; ++a) sides[a] = arr[a].get<double>();
        }
        return DomainSpec::box(sides, j.value("resolution", 33));
    }
    throw std::invalid_argument("domain: kind must be 'ball' or 'box'");
}

json to_json(const DomainSpec& domain) {
    json out{{"kind", domain.kind == DomainSpec::Kind::UnitBall ? "ball" : "box"},
             {"N", domain.dim}};
    if (domain.kind == DomainSpec::Kind::Box) {
        out["sides"] = std::vector<double>(domain.sides.data(),
                                           domain.sides.data() + domain.sides.size());
        out["resolution"] = domain.resolution;
    }
    return out;
}

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_float(row[i]);
        }
        out << '\n';
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open " + path);
    out << j.dump(2) << '\n';
}

}  // namespace sublog
