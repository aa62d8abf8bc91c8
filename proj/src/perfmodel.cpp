#include "solverkit/perfmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "solverkit/error.hpp"

namespace solverkit {

namespace {

std::size_t ceil_log2(std::size_t x) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < x) ++k;
    return k;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

double bytes_per_cycle(const PerfConfig& cfg) {
    return cfg.ext_bandwidth_gbps * 1e9 / (cfg.clock_mhz * 1e6);
}

std::uint64_t pipeline_flush(const PerfConfig& cfg) {
    return cfg.fp_mul_latency + cfg.reduction_tree_depth * cfg.fp_add_latency;
}

// Earliest cycle with `entries` whole entries of `entry_bytes` delivered at
// `rate` bytes/cycle.
std::uint64_t arrival_cycle(std::uint64_t entries, std::size_t entry_bytes, double rate) {
    const double bytes = static_cast<double>(entries) * static_cast<double>(entry_bytes);
    return static_cast<std::uint64_t>(std::ceil(bytes / rate));
}

// Streaming cycles for dense kernels: n values per operand array, all arrays
// sharing the external link evenly.
std::uint64_t dense_drain(std::uint64_t n, std::size_t n_arrays, const PerfConfig& cfg) {
    const std::vector<std::size_t> widths(n_arrays, cfg.value_bytes);
    return stream_drain_cycles(n, cfg.n_multipliers, widths,
                               bytes_per_cycle(cfg) / static_cast<double>(n_arrays));
}

} // namespace

void PerfConfig::validate() const {
    if (n_multipliers == 0) throw Error("n_multipliers must be positive");
    if (!(ext_bandwidth_gbps > 0.0)) throw Error("ext_bandwidth_gbps must be positive");
    if (n_internal_ports == 0) throw Error("n_internal_ports must be positive");
    if (!(clock_mhz > 0.0)) throw Error("clock_mhz must be positive");
    if (value_bytes != 4 && value_bytes != 8)
        throw Error("value_bytes must be 4 or 8, got " + std::to_string(value_bytes));
    if (fp_add_latency == 0 || fp_mul_latency == 0)
        throw Error("floating point latencies must be positive");
    if (reduction_tree_depth == 0) throw Error("reduction_tree_depth must be positive");
}

MatrixMeta MatrixMeta::from_partitions(const PartitionSet& parts) {
    MatrixMeta meta;
    for (const auto& s : parts.sizes) {
        meta.colors.push_back({s.n_rows, s.n_nonzeros, s.n_vector_indices});
        meta.n_rows += s.n_rows;
        meta.n_nonzeros += s.n_nonzeros;
    }
    return meta;
}

MatrixMeta MatrixMeta::single_color(std::size_t n_rows, std::size_t n_nonzeros,
                                    std::size_t n_vector_indices) {
    MatrixMeta meta;
    meta.n_rows = n_rows;
    meta.n_nonzeros = n_nonzeros;
    meta.colors.push_back({n_rows, n_nonzeros, n_vector_indices});
    return meta;
}

void MatrixMeta::validate() const {
    std::size_t rows = 0, nnz = 0;
    for (const auto& c : colors) {
        rows += c.n_rows;
        nnz += c.n_nonzeros;
        if (c.n_vector_indices > n_rows)
            throw Error("a color references more vector entries than the vector holds");
    }
    if (rows != n_rows || nnz != n_nonzeros)
        throw Error("per-color sums do not match the matrix totals");
}

MatrixMeta meta_for_matrix(const CsrMatrix& a_permuted, const ReorderPlan& plan) {
    return MatrixMeta::from_partitions(build_partitions(a_permuted, plan));
}

IluMeta meta_for_factors(const IluFactors& f, const ReorderPlan& plan) {
    plan.validate();
    if (plan.n_rows() != f.n) throw DimensionError("plan does not match factors");
    IluMeta meta;
    meta.l = MatrixMeta::from_partitions(build_partitions(f.l, plan));

    // The backward sweep visits colors last to first, and u_reversed stores
    // row i at position n-1-i, so its per-color footprints are collected
    // directly rather than through build_partitions.
    meta.u.n_rows = f.n;
    meta.u.n_nonzeros = f.u_reversed.nnz();
    for (std::size_t c = plan.n_colors(); c-- > 0;) {
        ColorMeta cm;
        cm.n_rows = plan.color_offsets[c + 1] - plan.color_offsets[c];
        std::vector<index_t> cols;
        for (std::size_t i = plan.color_offsets[c]; i < plan.color_offsets[c + 1]; ++i) {
            const std::size_t k = f.n - 1 - i;
            for (std::size_t v = f.u_reversed.row_pointers[k];
                 v < f.u_reversed.row_pointers[k + 1]; ++v)
                cols.push_back(f.u_reversed.col_indices[v]);
        }
        cm.n_nonzeros = cols.size();
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        cm.n_vector_indices = cols.size();
        meta.u.colors.push_back(cm);
    }
    meta.l.validate();
    meta.u.validate();
    return meta;
}

std::uint64_t stream_drain_cycles(std::uint64_t n_entries, std::size_t n_multipliers,
                                  const std::vector<std::size_t>& bytes_per_entry,
                                  double rate_bytes_per_cycle) {
    if (n_entries == 0) return 0;
    if (n_multipliers == 0) throw Error("n_multipliers must be positive");
    if (!(rate_bytes_per_cycle > 0.0)) throw Error("stream rate must be positive");

    // Lines leave at most one per cycle, and never before every array has
    // delivered all entries up to the line's end. Jumping line to line is
    // exact: between drains the FIFOs only fill.
    std::uint64_t t = 0;
    std::uint64_t drained = 0;
    while (drained < n_entries) {
        const std::uint64_t line = std::min<std::uint64_t>(n_multipliers, n_entries - drained);
        const std::uint64_t needed = drained + line;
        std::uint64_t earliest = 1;
        for (std::size_t w : bytes_per_entry)
            earliest = std::max(earliest, arrival_cycle(needed, w, rate_bytes_per_cycle));
        t = std::max(t + 1, earliest);
        drained = needed;
    }
    return t;
}

KernelCycles model_spmv(const MatrixMeta& meta, const PerfConfig& cfg) {
    cfg.validate();
    meta.validate();
    KernelCycles out;
    const std::vector<std::size_t> widths{cfg.value_bytes, 4, 4};
    const double rate = bytes_per_cycle(cfg) / 3.0;
    for (const auto& c : meta.colors) {
        std::uint64_t cycles = cfg.write_overhead_cycles;
        if (c.n_nonzeros > 0 || c.n_vector_indices > 0) {
            cycles += ceil_div(c.n_vector_indices, cfg.n_internal_ports);
            cycles += 3 * cfg.stream_setup_cycles;
            cycles += stream_drain_cycles(c.n_nonzeros, cfg.n_multipliers, widths, rate);
            cycles += pipeline_flush(cfg);
        }
        out.per_color.push_back(cycles);
        out.total += cycles;
    }
    return out;
}

KernelCycles model_ilu0(const IluMeta& meta, const PerfConfig& cfg) {
    cfg.validate();
    meta.l.validate();
    meta.u.validate();
    KernelCycles out;
    const std::vector<std::size_t> widths{cfg.value_bytes, 4, 4};
    const double rate = bytes_per_cycle(cfg) / 3.0;
    const auto sweep_color = [&](const ColorMeta& c) {
        std::uint64_t cycles = ceil_div(c.n_rows, cfg.n_internal_ports); // rhs slice
        cycles += ceil_div(c.n_vector_indices, cfg.n_internal_ports);
        if (c.n_nonzeros > 0) {
            cycles += 3 * cfg.stream_setup_cycles;
            cycles += stream_drain_cycles(c.n_nonzeros, cfg.n_multipliers, widths, rate);
            cycles += pipeline_flush(cfg);
        }
        cycles += cfg.ilu0_unit_delay_cycles;
        cycles += ceil_div(c.n_rows, cfg.n_internal_ports); // results to on-chip RAM
        return cycles;
    };
    for (const auto& c : meta.l.colors) {
        const std::uint64_t cycles = sweep_color(c);
        out.per_color.push_back(cycles);
        out.total += cycles;
    }
    for (const auto& c : meta.u.colors) {
        const std::uint64_t cycles = sweep_color(c);
        out.per_color.push_back(cycles);
        out.total += cycles;
    }
    return out;
}

std::uint64_t reduction_tail_cycles(const PerfConfig& cfg) {
    return cfg.reduction_tree_depth * cfg.fp_add_latency +
           cfg.fp_add_latency * ceil_log2(std::max<std::size_t>(cfg.fp_add_latency, 2));
}

std::uint64_t model_axpy(std::size_t n, const PerfConfig& cfg) {
    cfg.validate();
    return dense_drain(n, 2, cfg) + cfg.fp_mul_latency + cfg.fp_add_latency +
           cfg.write_overhead_cycles;
}

std::uint64_t model_dot(std::size_t n, const PerfConfig& cfg) {
    cfg.validate();
    return dense_drain(n, 2, cfg) + cfg.fp_mul_latency + reduction_tail_cycles(cfg);
}

std::uint64_t model_norm(std::size_t n, const PerfConfig& cfg) {
    cfg.validate();
    return dense_drain(n, 1, cfg) + cfg.fp_mul_latency + reduction_tail_cycles(cfg) +
           cfg.fp_mul_latency + cfg.fp_add_latency;
}

std::uint64_t model_vector_ops(std::size_t n, const VectorOpMix& mix, const PerfConfig& cfg) {
    return mix.n_dot * model_dot(n, cfg) + mix.n_axpy * model_axpy(n, cfg) +
           mix.n_norm * model_norm(n, cfg);
}

PerfEstimate model_solver(const MatrixMeta& a_meta, const IluMeta& f_meta,
                          double iterations, const PerfConfig& cfg) {
    cfg.validate();
    a_meta.validate();
    const double halves_exact = iterations * 2.0;
    const auto halves = static_cast<std::int64_t>(std::llround(halves_exact));
    if (halves < 0 || std::abs(halves_exact - static_cast<double>(halves)) > 1e-9)
        throw Error("iterations must be a non-negative multiple of 0.5");
    const std::uint64_t f = static_cast<std::uint64_t>(halves) / 2;
    const std::uint64_t h = static_cast<std::uint64_t>(halves) % 2;

    PerfEstimate est;
    est.iterations = iterations;
    est.spmv_single = model_spmv(a_meta, cfg);
    est.ilu0_single = model_ilu0(f_meta, cfg);

    const std::uint64_t n_spmv = 1 + 2 * f + h;
    const std::uint64_t n_ilu0 = 2 * f + h;
    const VectorOpMix mix{4 * f + 2 * h, 1 + 6 * f + 4 * h, 1 + 2 * f + h};

    est.spmv_cycles = n_spmv * est.spmv_single.total;
    est.ilu0_cycles = n_ilu0 * est.ilu0_single.total;
    est.vector_cycles = model_vector_ops(a_meta.n_rows, mix, cfg);
    est.total_cycles = est.spmv_cycles + est.ilu0_cycles + est.vector_cycles;
    est.wall_time_ms = static_cast<double>(est.total_cycles) / (cfg.clock_mhz * 1e3);

    const std::uint64_t n = a_meta.n_rows;
    const std::uint64_t flops_spmv = 2 * a_meta.n_nonzeros;
    const std::uint64_t flops_ilu0 =
        2 * (f_meta.l.n_nonzeros + f_meta.u.n_nonzeros) + n;
    est.flops = n_spmv * flops_spmv + n_ilu0 * flops_ilu0 + mix.n_dot * 2 * n +
                mix.n_axpy * 2 * n + mix.n_norm * (2 * n + 1);
    est.gflops = est.wall_time_ms > 0.0
                     ? static_cast<double>(est.flops) / (est.wall_time_ms * 1e6)
                     : 0.0;
    return est;
}

const char* to_string(Bottleneck b) {
    switch (b) {
    case Bottleneck::bandwidth: return "bandwidth";
    case Bottleneck::internal_ports: return "internal_ports";
    case Bottleneck::multipliers: return "multipliers";
    case Bottleneck::balanced: return "balanced";
    }
    return "?";
}

std::vector<DsePoint> dse_sweep(const MatrixMeta& a_meta, const IluMeta& f_meta,
                                double iterations, const PerfConfig& base,
                                const DseGrid& grid) {
    if (grid.multipliers.empty() || grid.bandwidths_gbps.empty() ||
        grid.internal_ports.empty())
        throw Error("sweep grid must have at least one value on every axis");

    std::vector<DsePoint> points;
    points.reserve(grid.multipliers.size() * grid.bandwidths_gbps.size() *
                   grid.internal_ports.size());
    for (std::size_t m : grid.multipliers)
        for (double bw : grid.bandwidths_gbps)
            for (std::size_t ports : grid.internal_ports) {
                DsePoint pt;
                pt.config = base;
                pt.config.n_multipliers = m;
                pt.config.ext_bandwidth_gbps = bw;
                pt.config.n_internal_ports = ports;
                pt.estimate = model_solver(a_meta, f_meta, iterations, pt.config);

                const auto total_with = [&](auto mutate) {
                    PerfConfig c = pt.config;
                    mutate(c);
                    return model_solver(a_meta, f_meta, iterations, c).total_cycles;
                };
                const std::uint64_t base_total = pt.estimate.total_cycles;
                const std::uint64_t bw2 =
                    total_with([](PerfConfig& c) { c.ext_bandwidth_gbps *= 2.0; });
                const std::uint64_t ports2 =
                    total_with([](PerfConfig& c) { c.n_internal_ports *= 2; });
                const std::uint64_t mult2 =
                    total_with([](PerfConfig& c) { c.n_multipliers *= 2; });
                const std::uint64_t save_bw = base_total - std::min(bw2, base_total);
                const std::uint64_t save_ports = base_total - std::min(ports2, base_total);
                const std::uint64_t save_mult = base_total - std::min(mult2, base_total);

                if (save_bw == 0 && save_ports == 0 && save_mult == 0)
                    pt.bottleneck = Bottleneck::balanced;
                else if (save_bw >= save_ports && save_bw >= save_mult)
                    pt.bottleneck = Bottleneck::bandwidth;
                else if (save_ports >= save_mult)
                    pt.bottleneck = Bottleneck::internal_ports;
                else
                    pt.bottleneck = Bottleneck::multipliers;
                points.push_back(std::move(pt));
            }
    return points;
}

void write_dse_csv(std::ostream& out, const std::vector<DsePoint>& points) {
    out << "n_multipliers,ext_bandwidth_gbps,n_internal_ports,total_cycles,"
           "spmv_cycles,ilu0_cycles,vector_cycles,wall_time_ms,gflops,bottleneck\n";
    char buf[256];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%zu,%g,%zu,%llu,%llu,%llu,%llu,%.6g,%.6g,%s\n",
                      p.config.n_multipliers, p.config.ext_bandwidth_gbps,
                      p.config.n_internal_ports,
                      static_cast<unsigned long long>(p.estimate.total_cycles),
                      static_cast<unsigned long long>(p.estimate.spmv_cycles),
                      static_cast<unsigned long long>(p.estimate.ilu0_cycles),
                      static_cast<unsigned long long>(p.estimate.vector_cycles),
                      p.estimate.wall_time_ms, p.estimate.gflops, to_string(p.bottleneck));
        out << buf;
    }
}

} // namespace solverkit
