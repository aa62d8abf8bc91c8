#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "solverkit/precond.hpp"
#include "solverkit/reorder.hpp"
#include "solverkit/sparstition.hpp"

namespace solverkit {

// Parameters of the modeled streaming data path. One pipeline retires up to
// n_multipliers nonzeros per cycle, fed by three co-streamed arrays (values,
// column indices, row offsets) that share the external link evenly. Vector
// slices and results move through n_internal_ports on-chip ports, one value
// per port per cycle. Latencies and per-color constants below are calibration
// choices, fixed so estimates are reproducible.
struct PerfConfig {
    std::size_t n_multipliers = 8;
    double ext_bandwidth_gbps = 50.0;
    std::size_t n_internal_ports = 2;
    double clock_mhz = 280.0;
    std::size_t value_bytes = 8; // 8 = double precision streams, 4 = single

    std::size_t fp_add_latency = 8;
    std::size_t fp_mul_latency = 6;
    // The accumulator tree is instantiated once at the widest supported lane
    // count, so its depth is a property of the unit, not of how many lanes a
    // configuration enables. Keeping it fixed also keeps cycle counts
    // non-increasing in n_multipliers.
    std::size_t reduction_tree_depth = 6; // 64-lane tree
    // fixed per-color costs, in cycles
    std::size_t stream_setup_cycles = 64;  // per matrix stream
    std::size_t write_overhead_cycles = 32;
    std::size_t ilu0_unit_delay_cycles = 16; // subtract/divide stage drain

    void validate() const;
};

// Per-color streaming footprint: row count, nonzeros, and how many distinct
// vector entries the color's rows touch (the slice a partition transfers).
struct ColorMeta {
    std::size_t n_rows = 0;
    std::size_t n_nonzeros = 0;
    std::size_t n_vector_indices = 0;
};

struct MatrixMeta {
    std::size_t n_rows = 0;
    std::size_t n_nonzeros = 0;
    std::vector<ColorMeta> colors; // in processing order

    static MatrixMeta from_partitions(const PartitionSet& parts);
    static MatrixMeta single_color(std::size_t n_rows, std::size_t n_nonzeros,
                                   std::size_t n_vector_indices);
    void validate() const; // per-color sums must match the totals
};

// Footprints of the two triangular sweeps. u.colors is listed in the order
// the backward sweep runs them (reverse plan order).
struct IluMeta {
    MatrixMeta l;
    MatrixMeta u;
};

MatrixMeta meta_for_matrix(const CsrMatrix& a_permuted, const ReorderPlan& plan);
IluMeta meta_for_factors(const IluFactors& f, const ReorderPlan& plan);

// Cycle at which the last line leaves the stream FIFOs. Each of the
// co-streamed arrays receives `rate` bytes per cycle (fractionally); a line
// of up to n_multipliers entries drains once every array has delivered the
// whole line, at most one line per cycle. Exposed for tests.
std::uint64_t stream_drain_cycles(std::uint64_t n_entries, std::size_t n_multipliers,
                                  const std::vector<std::size_t>& bytes_per_entry,
                                  double rate_bytes_per_cycle);

struct KernelCycles {
    std::uint64_t total = 0;
    std::vector<std::uint64_t> per_color;
};

// One matrix-vector product:
//   per color: ceil(n_vector_indices / n_internal_ports)   vector slice in
//            + 3 * stream_setup_cycles                     stream warm-up
//            + stream_drain_cycles(nnz)                    values/cols/offsets
//            + fp_mul_latency + reduction_tree_depth * fp_add_latency
//            + write_overhead_cycles                       result flush
// A color with no nonzeros and no vector slice costs write_overhead_cycles.
KernelCycles model_spmv(const MatrixMeta& meta, const PerfConfig& cfg);

// One preconditioner application (forward then backward sweep):
//   per color and sweep: ceil(n_rows / ports)              rhs slice in
//            + ceil(n_vector_indices / ports)              solved entries in
//            + [3*setup + drain(nnz) + flush]   if nnz > 0
//            + ilu0_unit_delay_cycles
//            + ceil(n_rows / ports)                        result to on-chip RAM
KernelCycles model_ilu0(const IluMeta& meta, const PerfConfig& cfg);

// Dense kernels stream their operands through the same link (two arrays for
// dot/axpy, one for norm), drain n_multipliers lanes per cycle, and pay:
//   axpy: + fp_mul + fp_add + write_overhead_cycles
//   dot:  + fp_mul + reduction_tail_cycles
//   norm: one stream, + fp_mul + reduction_tail_cycles + (fp_mul + fp_add)
// where reduction_tail_cycles = reduction_tree_depth * fp_add       (tree)
//                             + fp_add * ceil_log2(fp_add)          (collapse
// of the in-flight partial sums behind the tree's final adder).
std::uint64_t model_dot(std::size_t n, const PerfConfig& cfg);
std::uint64_t model_axpy(std::size_t n, const PerfConfig& cfg);
std::uint64_t model_norm(std::size_t n, const PerfConfig& cfg);
std::uint64_t reduction_tail_cycles(const PerfConfig& cfg);

struct VectorOpMix {
    std::uint64_t n_dot = 0;
    std::uint64_t n_axpy = 0;
    std::uint64_t n_norm = 0;
};

std::uint64_t model_vector_ops(std::size_t n, const VectorOpMix& mix, const PerfConfig& cfg);

struct PerfEstimate {
    std::uint64_t total_cycles = 0;
    std::uint64_t spmv_cycles = 0;   // all products
    std::uint64_t ilu0_cycles = 0;   // all preconditioner applications
    std::uint64_t vector_cycles = 0; // all dense kernels
    double wall_time_ms = 0.0;
    std::uint64_t flops = 0;
    double gflops = 0.0;
    double iterations = 0.0;
    KernelCycles spmv_single; // one product, with per-color breakdown
    KernelCycles ilu0_single; // one application, with per-color breakdown
};

// Whole-solve estimate for the given iteration count (multiples of 0.5).
// A run of f full and h in {0,1} half iterations performs
//   1 + 2f + h   products        (one to form the initial residual)
//   2f + h       preconditioner applications
//   4f + 2h      dots, 1 + 6f + 4h axpys, 1 + 2f + h norms
// and the estimate is the exact sum of the per-kernel models.
PerfEstimate model_solver(const MatrixMeta& a_meta, const IluMeta& f_meta,
                          double iterations, const PerfConfig& cfg);

enum class Bottleneck { bandwidth, internal_ports, multipliers, balanced };
const char* to_string(Bottleneck b);

struct DseGrid {
    std::vector<std::size_t> multipliers;
    std::vector<double> bandwidths_gbps;
    std::vector<std::size_t> internal_ports;
};

struct DsePoint {
    PerfConfig config;
    PerfEstimate estimate;
    Bottleneck bottleneck = Bottleneck::balanced;
};

// Evaluates every grid combination (multipliers outermost, ports innermost).
// The bottleneck label names the axis whose doubling saves the most cycles;
// ties fall to bandwidth, then ports, then multipliers; "balanced" means
// doubling nothing helps.
std::vector<DsePoint> dse_sweep(const MatrixMeta& a_meta, const IluMeta& f_meta,
                                double iterations, const PerfConfig& base,
                                const DseGrid& grid);

void write_dse_csv(std::ostream& out, const std::vector<DsePoint>& points);

} // namespace solverkit
