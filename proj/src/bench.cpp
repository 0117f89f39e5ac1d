#include "bfw/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bfw/reference.hpp"

namespace bfw {

double gflops(int64_t n, double seconds) {
  if (n < 1) throw std::domain_error("gflops: n must be >= 1");
  if (!(seconds > 0.0)) throw std::domain_error("gflops: seconds must be positive");
  const double nn = static_cast<double>(n);
  return 2.0 * nn * nn * nn / (seconds * 1e9);
}

namespace {

std::string host_name() {
  char buf[256] = {0};
  if (gethostname(buf, sizeof(buf) - 1) != 0) return "unknown";
  return buf;
}

std::string config_label(const BenchConfig& c) {
  std::ostringstream os;
  os << "n=" << c.n << " bs=" << c.solve.bs << " threads=" << c.solve.threads
     << " tier=" << to_string(c.solve.tier) << " mode=" << to_string(c.solve.mode)
     << " sync=" << to_string(c.solve.sync) << " kind=" << to_string(c.solve.elem_kind)
     << " affinity=" << to_string(c.solve.affinity);
  return os.str();
}

template <typename T>
struct KindCaches {
  std::map<int, DistanceMatrix<T>> instances;
  std::map<int, ClosureResult<T>> oracles;

  const DistanceMatrix<T>& instance(const GraphSpec& base, int n) {
    auto it = instances.find(n);
    if (it == instances.end()) {
      GraphSpec s = base;
      s.n = n;
      it = instances.emplace(n, generate_graph<T>(s)).first;
    }
    return it->second;
  }
  const ClosureResult<T>& oracle(const GraphSpec& base, int n) {
    auto it = oracles.find(n);
    if (it == oracles.end())
      it = oracles.emplace(n, fw_classic(instance(base, n))).first;
    return it->second;
  }
};

// The intermediate matrix is layout-dependent: a tile pass may credit an
// improvement to an earlier k than the classic order does (the pivot tile is
// already closed when panels consume it), so P cannot be compared against the
// reference bit for bit.  What must hold is semantic: every pair reconstructs
// to a real path whose cost prices out to the closed distance.
template <typename T>
void check_paths_price_out(const DistanceMatrix<T>& original, const DistanceMatrix<T>& closed,
                           const IntermediateMatrix& p, const std::string& label) {
  const int n = closed.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::vector<int> path = reconstruct_path(p, closed, i, j);
      if (i == j || closed(i, j) == kInf<T>) continue;
      const T cost = path_cost(original, std::span<const int>(path));
      const T tol = static_cast<T>(path.size()) * std::numeric_limits<T>::epsilon() * T(8) *
                    std::max(T(1), std::abs(closed(i, j)));
      if (std::abs(cost - closed(i, j)) > tol)
        throw std::runtime_error("path for (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") costs " + std::to_string(cost) + ", distance says " +
                                 std::to_string(closed(i, j)) + " [" + label + "]");
    }
}

template <typename T>
BenchRecord run_one(const BenchConfig& cfg, const GraphSpec& base, int reps, int verify_cap,
                    KindCaches<T>& caches) {
  const DistanceMatrix<T>& input = caches.instance(base, cfg.n);

  BenchRecord rec;
  rec.n = cfg.n;
  rec.solve = cfg.solve;
  rec.graph = base;
  rec.graph.n = cfg.n;
  rec.hostname = host_name();
  rec.isa = kernel_isa_info();
  rec.logical_cpus = logical_cpu_count();
  rec.physical_cores = physical_core_count();

  // Untimed warm-up doubles as the correctness spot-check.
  SolveResult<T> warm = solve(input, cfg.solve);
  if (cfg.n <= verify_cap) {
    const ClosureResult<T>& want = caches.oracle(base, cfg.n);
    if (!bitwise_equal(warm.distances, want.distances)) {
      auto [i, j] = first_difference(warm.distances, want.distances);
      throw std::runtime_error("oracle mismatch for " + config_label(cfg) + " at cell (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
    }
    if (cfg.solve.track_paths)
      check_paths_price_out(input, warm.distances, warm.intermediates.value(),
                            config_label(cfg));
    rec.oracle_checked = true;
  }

  rec.rep_seconds.reserve(reps);
  double total = 0;
  for (int rep = 0; rep < reps; ++rep) {
    SolveResult<T> out = solve(input, cfg.solve);
    rec.rep_seconds.push_back(out.stats.compute_seconds);
    total += out.stats.compute_seconds;
  }
  rec.mean_seconds = total / reps;
  rec.gflops_mean = gflops(cfg.n, rec.mean_seconds);
  return rec;
}

}  // namespace

std::vector<BenchRecord> run_bench(const std::vector<BenchConfig>& configs,
                                   const GraphSpec& base, int reps, int verify_cap,
                                   std::ostream* progress) {
  if (reps < 1) throw ValidationError("reps: must be >= 1");
  if (verify_cap < 0) throw ValidationError("verify_cap: must be >= 0");
  KindCaches<float> f32;
  KindCaches<double> f64;
  std::vector<BenchRecord> out;
  out.reserve(configs.size());
  for (const BenchConfig& cfg : configs) {
    if (cfg.n < 1) throw ValidationError("n: must be >= 1 in bench config");
    try {
      BenchRecord rec = cfg.solve.elem_kind == ElemKind::kF32
                            ? run_one<float>(cfg, base, reps, verify_cap, f32)
                            : run_one<double>(cfg, base, reps, verify_cap, f64);
      if (progress)
        *progress << config_label(cfg) << "  mean=" << rec.mean_seconds
                  << "s  gflops=" << rec.gflops_mean
                  << (rec.oracle_checked ? "  [verified]" : "") << "\n";
      out.push_back(std::move(rec));
    } catch (const BlockSizeError&) {
      throw;  // already names n and bs; must keep its type (exit-code mapping)
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string(e.what()) + " [" + config_label(cfg) + "]");
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(std::string(e.what()) + " [" + config_label(cfg) + "]");
    }
  }
  return out;
}

std::vector<BenchConfig> default_sweep() {
  const std::vector<int> ns = {512, 1024, 2048};
  const std::vector<int> bss = {32, 64, 128};
  std::vector<int> threads = {1, physical_core_count(), logical_cpu_count()};
  std::sort(threads.begin(), threads.end());
  threads.erase(std::unique(threads.begin(), threads.end()), threads.end());

  std::vector<BenchConfig> out;
  for (int n : ns)
    for (ElemKind kind : {ElemKind::kF32, ElemKind::kF64})
      for (int bs : bss)
        for (int t : threads)
          for (KernelTier tier : kTierLadder) {
            BenchConfig c;
            c.n = n;
            c.solve.bs = bs;
            c.solve.threads = t;
            c.solve.tier = tier;
            c.solve.elem_kind = kind;
            c.solve.mode = SolveMode::kBarrier;
            out.push_back(c);
          }
  return out;
}

std::vector<ImprovementRow> improvement_table(std::span<const BenchRecord> records,
                                              std::span<const KernelTier> ladder) {
  std::vector<ImprovementRow> rows;
  rows.reserve(ladder.size());
  double prev = 0, first = 0;
  for (KernelTier tier : ladder) {
    ImprovementRow row;
    row.tier = tier;
    for (const BenchRecord& r : records) {
      if (r.solve.tier == tier) {
        row.present = true;
        row.gflops_mean = r.gflops_mean;
        break;
      }
    }
    if (row.present) {
      if (prev > 0) row.step_ratio = row.gflops_mean / prev;
      if (first == 0) first = row.gflops_mean;
      row.cumulative_ratio = row.gflops_mean / first;
      prev = row.gflops_mean;
    } else {
      prev = 0;  // a gap breaks the consecutive-step chain
    }
    rows.push_back(row);
  }
  return rows;
}

std::string csv_header() {
  return "n,bs,threads,tier,mode,sync,affinity,elem_kind,track_paths,seed,null_fraction,"
         "weight_min,weight_max,reps,mean_seconds,gflops,oracle_checked,hostname,isa,"
         "logical_cpus,physical_cores,rep_seconds";
}

void emit_csv(std::span<const BenchRecord> records, std::ostream& out) {
  out << csv_header() << "\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
  };
  for (const BenchRecord& r : records) {
    out << r.n << ',' << r.solve.bs << ',' << r.solve.threads << ',' << to_string(r.solve.tier)
        << ',' << to_string(r.solve.mode) << ',' << to_string(r.solve.sync) << ','
        << to_string(r.solve.affinity) << ',' << to_string(r.solve.elem_kind) << ','
        << (r.solve.track_paths ? 1 : 0) << ',' << r.graph.seed << ','
        << fmt(r.graph.null_fraction) << ',' << fmt(r.graph.weight_min) << ','
        << fmt(r.graph.weight_max) << ',' << r.rep_seconds.size() << ','
        << fmt(r.mean_seconds) << ',' << fmt(r.gflops_mean) << ','
        << (r.oracle_checked ? 1 : 0) << ',' << r.hostname << ',' << r.isa << ','
        << r.logical_cpus << ',' << r.physical_cores << ',';
    for (size_t i = 0; i < r.rep_seconds.size(); ++i) {
      if (i) out << ';';
      out << fmt(r.rep_seconds[i]);
    }
    out << "\n";
  }
}

void emit_csv(std::span<const BenchRecord> records, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  emit_csv(records, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string render_table(std::span<const BenchRecord> records) {
  // group key -> (threads, bs) -> tier -> gflops
  std::map<std::string, std::map<std::pair<int, int>, std::map<int, double>>> groups;
  for (const BenchRecord& r : records) {
    std::ostringstream key;
    key << "n=" << r.n << " " << to_string(r.solve.elem_kind) << " mode="
        << to_string(r.solve.mode);
    if (r.solve.mode == SolveMode::kDepDriven) key << "/" << to_string(r.solve.sync);
    groups[key.str()][{r.solve.threads, r.solve.bs}][static_cast<int>(r.solve.tier)] =
        r.gflops_mean;
  }
  std::ostringstream os;
  char buf[64];
  for (const auto& [label, rows] : groups) {
    os << label << "  (GFLOP/s, * = best in row)\n";
    os << "  threads    bs";
    for (KernelTier t : kTierLadder) {
      std::snprintf(buf, sizeof(buf), "  %18s", to_string(t));
      os << buf;
    }
    os << "\n";
    for (const auto& [tb, cells] : rows) {
      std::snprintf(buf, sizeof(buf), "  %7d  %4d", tb.first, tb.second);
      os << buf;
      double best = 0;
      for (const auto& [tier, g] : cells) best = std::max(best, g);
      for (KernelTier t : kTierLadder) {
        auto it = cells.find(static_cast<int>(t));
        if (it == cells.end()) {
          std::snprintf(buf, sizeof(buf), "  %18s", "-");
        } else {
          std::snprintf(buf, sizeof(buf), "  %16.2f%c", it->second,
                        it->second == best ? '*' : ' ');
        }
        os << buf;
      }
      os << "\n";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace bfw
