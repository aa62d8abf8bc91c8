#include "solverkit/json_io.hpp"

#include "solverkit/error.hpp"

namespace solverkit {

using nlohmann::json;

json to_json(const ReorderPlan& plan) {
    return json{{"schema", "solverkit.plan/1"},
                {"method", to_string(plan.method)},
                {"seed", plan.seed},
                {"n_rows", plan.n_rows()},
                {"n_colors", plan.n_colors()},
                {"color_offsets", plan.color_offsets},
                {"permutation", plan.permutation}};
}

ReorderPlan plan_from_json(const json& j) {
    if (!j.is_object() || j.value("schema", "") != "solverkit.plan/1")
        throw StructureError("not a solverkit.plan/1 document");
    ReorderPlan plan;
    const std::string method = j.at("method").get<std::string>();
    if (method == "none") plan.method = ReorderMethod::none;
    else if (method == "level_scheduling") plan.method = ReorderMethod::level_scheduling;
    else if (method == "graph_coloring") plan.method = ReorderMethod::graph_coloring;
    else throw StructureError("unknown reorder method '" + method + "'");
    plan.seed = j.value("seed", std::uint64_t{0});
    plan.permutation = j.at("permutation").get<std::vector<index_t>>();
    plan.color_offsets = j.at("color_offsets").get<std::vector<std::size_t>>();
    plan.inverse_permutation.assign(plan.permutation.size(), 0);
    for (std::size_t i = 0; i < plan.permutation.size(); ++i) {
        if (plan.permutation[i] >= plan.permutation.size())
            throw StructureError("permutation entry out of range");
        plan.inverse_permutation[plan.permutation[i]] = static_cast<index_t>(i);
    }
    plan.validate();
    return plan;
}

json to_json(const SolveResult& result, bool include_solution) {
    json j{{"schema", "solverkit.solve/1"},
           {"status", to_string(result.status)},
           {"converged", result.converged},
           {"iterations", result.iterations},
           {"initial_residual_norm", result.initial_residual_norm},
           {"final_residual_norm", result.final_residual_norm},
           {"threshold", result.threshold},
           {"residual_history", result.residual_history},
           {"setup_ms", result.setup_ms},
           {"solve_ms", result.solve_ms},
           {"n_colors", result.n_colors}};
    if (include_solution) j["solution"] = result.x;
    return j;
}

namespace {

json to_json(const KernelCycles& k) {
    return json{{"total", k.total}, {"per_color", k.per_color}};
}

json config_json(const PerfConfig& cfg) {
    return json{{"n_multipliers", cfg.n_multipliers},
                {"ext_bandwidth_gbps", cfg.ext_bandwidth_gbps},
                {"n_internal_ports", cfg.n_internal_ports},
                {"clock_mhz", cfg.clock_mhz},
                {"value_bytes", cfg.value_bytes},
                {"fp_add_latency", cfg.fp_add_latency},
                {"fp_mul_latency", cfg.fp_mul_latency},
                {"reduction_tree_depth", cfg.reduction_tree_depth},
                {"stream_setup_cycles", cfg.stream_setup_cycles},
                {"write_overhead_cycles", cfg.write_overhead_cycles},
                {"ilu0_unit_delay_cycles", cfg.ilu0_unit_delay_cycles}};
}

} // namespace

json to_json(const PerfEstimate& est) {
    return json{{"schema", "solverkit.model/1"},
                {"iterations", est.iterations},
                {"total_cycles", est.total_cycles},
                {"spmv_cycles", est.spmv_cycles},
                {"ilu0_cycles", est.ilu0_cycles},
                {"vector_cycles", est.vector_cycles},
                {"wall_time_ms", est.wall_time_ms},
                {"flops", est.flops},
                {"gflops", est.gflops},
                {"spmv_single", to_json(est.spmv_single)},
                {"ilu0_single", to_json(est.ilu0_single)}};
}

json to_json(const std::vector<DsePoint>& points) {
    json rows = json::array();
    for (const auto& p : points) {
        json row = {{"config", config_json(p.config)},
                    {"bottleneck", to_string(p.bottleneck)},
                    {"total_cycles", p.estimate.total_cycles},
                    {"spmv_cycles", p.estimate.spmv_cycles},
                    {"ilu0_cycles", p.estimate.ilu0_cycles},
                    {"vector_cycles", p.estimate.vector_cycles},
                    {"wall_time_ms", p.estimate.wall_time_ms},
                    {"gflops", p.estimate.gflops}};
        rows.push_back(std::move(row));
    }
    return json{{"schema", "solverkit.dse/1"}, {"points", rows}};
}

} // namespace solverkit
