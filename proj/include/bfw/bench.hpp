#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bfw/graph_gen.hpp"
#include "bfw/scheduler.hpp"

namespace bfw {

// Throughput in 10^9 useful relaxation flops per second: the triple loop
// performs n^3 add+min pairs regardless of blocking, so 2*n^3 / (t * 1e9).
// Throws std::domain_error for non-positive seconds.
double gflops(int64_t n, double seconds);

struct BenchConfig {
  int n = 0;
  SolveConfig solve;
};

struct BenchRecord {
  // configuration echo
  int n = 0;
  SolveConfig solve;
  GraphSpec graph;
  // measurements
  std::vector<double> rep_seconds;  // one entry per timed repetition
  double mean_seconds = 0;
  double gflops_mean = 0;
  bool oracle_checked = false;  // first run compared against fw_classic
  // environment echo
  std::string hostname;
  std::string isa;  // widest SIMD extension the binary targets
  int logical_cpus = 0;
  int physical_cores = 0;
};

// Runs every config `reps` times after one untimed warm-up (the warm-up
// result feeds the oracle spot-check when n <= verify_cap).  The same
// generated instance (per n and element kind) is shared across configs.
// Solve errors propagate annotated with the failing config; an oracle
// mismatch throws std::runtime_error.
std::vector<BenchRecord> run_bench(const std::vector<BenchConfig>& configs,
                                   const GraphSpec& base, int reps = 8,
                                   int verify_cap = 1024, std::ostream* progress = nullptr);

// The stock desk-scale sweep: n in {512, 1024, 2048}, both element kinds,
// bs in {32, 64, 128}, threads in {1, physical, logical} (deduplicated),
// every tier, barrier mode.
std::vector<BenchConfig> default_sweep();

struct ImprovementRow {
  KernelTier tier{};
  bool present = false;
  double gflops_mean = 0;
  double step_ratio = 0;        // vs previous present rung, 0 when undefined
  double cumulative_ratio = 0;  // vs first present rung
};

// Consecutive-rung speedups over `ladder`, matching each rung to the first
// record with that tier.  Missing rungs stay marked and break the step chain.
std::vector<ImprovementRow> improvement_table(std::span<const BenchRecord> records,
                                              std::span<const KernelTier> ladder);

// Stable machine-readable dump, one row per record, fixed column order.
void emit_csv(std::span<const BenchRecord> records, std::ostream& out);
void emit_csv(std::span<const BenchRecord> records, const std::string& path);  // IoError

// Human-oriented summary grouped by (n, elem kind, mode, sync): one row per
// (threads, bs), one column per tier, best cell per row starred.
std::string render_table(std::span<const BenchRecord> records);

std::string csv_header();

}  // namespace bfw
