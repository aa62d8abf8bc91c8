#pragma once

#include <json.hpp>

#include "solverkit/bicgstab.hpp"
#include "solverkit/perfmodel.hpp"
#include "solverkit/reorder.hpp"

namespace solverkit {

// JSON views of the result types. Every object carries a versioned "schema"
// field so downstream tooling can detect layout changes.

nlohmann::json to_json(const ReorderPlan& plan);
ReorderPlan plan_from_json(const nlohmann::json& j);

// Solver metadata and residual history; the solution vector itself is large
// and only attached when the caller asks for it.
nlohmann::json to_json(const SolveResult& result, bool include_solution = false);

nlohmann::json to_json(const PerfEstimate& est);
nlohmann::json to_json(const std::vector<DsePoint>& points);

} // namespace solverkit
