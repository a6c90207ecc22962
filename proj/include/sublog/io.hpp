// JSON and CSV serialization of the report structures and domain descriptors.
#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "sublog/greenfn.hpp"
#include "sublog/nonlinearity.hpp"
#include "sublog/quadrature.hpp"
#include "sublog/radial_pde.hpp"
#include "sublog/reduced.hpp"

namespace sublog {

nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const OrderFit& fit);
nlohmann::json to_json(const StructuralConstants& sc);
nlohmann::json to_json(const RobinEvaluation& ev);
nlohmann::json to_json(const ReducedConstants& rc);
nlohmann::json to_json(const ReducedRoot& root);
nlohmann::json to_json(const RateFit& fit);

// Domain descriptor: {"kind": "ball"|"box", "N": int, "sides"?: [..],
// "resolution"?: int}.
DomainSpec domain_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DomainSpec& domain);

// Floats rendered with 17 significant digits, '.' decimal point.
std::string format_float(double v);

// CSV table writer: header row then rows of 17-digit floats.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace sublog
