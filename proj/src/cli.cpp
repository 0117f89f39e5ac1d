#include "bfw/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bfw/bench.hpp"
#include "bfw/graph_gen.hpp"
#include "bfw/io.hpp"
#include "bfw/reference.hpp"
#include "bfw/scheduler.hpp"

namespace bfw {

namespace {

struct GenArgs {
  GraphSpec spec;
  std::string kind = "f32";
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  AnyDistanceMatrix m = generate_graph(a.spec, parse_elem_kind(a.kind));
  write_matrix(a.out, m);
  const int n = matrix_n(m);
  size_t inf_cells = 0;
  std::visit(
      [&](const auto& x) {
        using T = typename std::decay_t<decltype(x)>::value_type;
        for (int i = 0; i < x.n(); ++i)
          for (int j = 0; j < x.n(); ++j)
            if (x(i, j) == kInf<T>) ++inf_cells;
      },
      m);
  const double frac =
      static_cast<double>(inf_cells) / (static_cast<double>(n) * n - n);  // off-diagonal
  std::printf("generated n=%d kind=%s seed=%llu infinite_fraction=%.4f -> %s\n", n,
              a.kind.c_str(), static_cast<unsigned long long>(a.spec.seed), frac,
              a.out.c_str());
  return 0;
}

struct SolveArgs {
  std::string in;
  std::string out;
  std::string paths_out;
  SolveConfig cfg;
  std::string tier = "unrolled";
  std::string mode = "barrier";
  std::string sync = "semaphore";
  std::string affinity = "none";
};

int cmd_solve(SolveArgs& a) {
  a.cfg.tier = parse_kernel_tier(a.tier);
  a.cfg.mode = parse_solve_mode(a.mode);
  a.cfg.sync = parse_sync_kind(a.sync);
  a.cfg.affinity = parse_affinity_policy(a.affinity);
  a.cfg.track_paths = !a.paths_out.empty();
  if (a.cfg.threads == 0) a.cfg.threads = logical_cpu_count();

  AnyDistanceMatrix input = read_matrix(a.in);
  a.cfg.elem_kind = elem_kind(input);
  AnySolveResult result = solve(input, a.cfg);

  std::visit(
      [&](auto& r) {
        write_matrix(a.out, r.distances);
        if (!a.paths_out.empty()) write_paths(a.paths_out, *r.intermediates);
        std::printf("n=%d bs=%d threads=%d tier=%s mode=%s%s%s time=%.6fs gflops=%.3f\n",
                    r.distances.n(), a.cfg.bs, a.cfg.threads, to_string(a.cfg.tier),
                    to_string(a.cfg.mode),
                    a.cfg.mode == SolveMode::kDepDriven ? "/" : "",
                    a.cfg.mode == SolveMode::kDepDriven ? to_string(a.cfg.sync) : "",
                    r.stats.compute_seconds,
                    gflops(r.distances.n(), r.stats.compute_seconds));
      },
      result);
  return 0;
}

struct VerifyArgs {
  std::string original;
  std::string closed;
  std::string paths;
};

template <typename T>
int verify_kind(const DistanceMatrix<T>& original, const DistanceMatrix<T>& closed,
                const std::string& paths_file) {
  if (original.n() != closed.n()) {
    std::fprintf(stderr, "error: dimension mismatch: original n=%d, closed n=%d\n",
                 original.n(), closed.n());
    return 2;
  }
  ClosureResult<T> want = fw_classic(original);
  if (!bitwise_equal(want.distances, closed)) {
    auto [i, j] = first_difference(want.distances, closed);
    std::printf("MISMATCH at cell (%d,%d): expected %.9g, file has %.9g\n", i, j,
                static_cast<double>(want.distances(i, j)),
                static_cast<double>(closed(i, j)));
    return 1;
  }
  if (!paths_file.empty()) {
    IntermediateMatrix p = read_paths(paths_file);
    if (p.n() != original.n()) {
      std::fprintf(stderr, "error: dimension mismatch: paths n=%d, matrix n=%d\n", p.n(),
                   original.n());
      return 2;
    }
    const int n = original.n();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        std::vector<int> path;
        try {
          path = reconstruct_path(p, closed, i, j);
        } catch (const CorruptPathMatrix& e) {
          std::printf("PATH MISMATCH at (%d,%d): %s\n", i, j, e.what());
          return 1;
        }
        if (closed(i, j) == kInf<T>) {
          if (!path.empty() && i != j) {
            std::printf("PATH MISMATCH at (%d,%d): path given for unreachable pair\n", i, j);
            return 1;
          }
          continue;
        }
        T cost;
        try {
          cost = path_cost(original, std::span<const int>(path));
        } catch (const InvalidPath& e) {
          std::printf("PATH MISMATCH at (%d,%d): %s\n", i, j, e.what());
          return 1;
        }
        const double want_d = static_cast<double>(closed(i, j));
        const double got_d = static_cast<double>(cost);
        if (std::abs(got_d - want_d) > 1e-6 * std::max(1.0, std::abs(want_d))) {
          std::printf("PATH MISMATCH at (%d,%d): path costs %.9g, distance is %.9g\n", i, j,
                      got_d, want_d);
          return 1;
        }
      }
    }
  }
  std::printf("verification passed (n=%d%s)\n", original.n(),
              paths_file.empty() ? "" : ", paths checked");
  return 0;
}

int cmd_verify(const VerifyArgs& a) {
  AnyDistanceMatrix original = read_matrix(a.original);
  AnyDistanceMatrix closed = read_matrix(a.closed);
  if (elem_kind(original) != elem_kind(closed)) {
    std::fprintf(stderr, "error: element-kind mismatch: original is %s, closed is %s\n",
                 to_string(elem_kind(original)), to_string(elem_kind(closed)));
    return 2;
  }
  if (elem_kind(original) == ElemKind::kF32)
    return verify_kind(std::get<DistanceMatrix<float>>(original),
                       std::get<DistanceMatrix<float>>(closed), a.paths);
  return verify_kind(std::get<DistanceMatrix<double>>(original),
                     std::get<DistanceMatrix<double>>(closed), a.paths);
}

struct BenchArgs {
  std::vector<int> ns;
  std::vector<int> bss;
  std::vector<int> threads;
  std::vector<std::string> tiers;
  std::vector<std::string> modes;
  std::vector<std::string> syncs;
  std::vector<std::string> kinds;
  std::string affinity = "none";
  std::string sweep_file;
  std::string csv;
  int reps = 8;
  int verify_cap = 1024;
  bool track_paths = false;
  GraphSpec graph;
};

std::vector<BenchConfig> sweep_from_file(const std::string& path, AffinityPolicy affinity,
                                         bool track_paths) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sweep file '" + path + "'");
  std::vector<BenchConfig> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tier, mode, sync, kind;
    BenchConfig c;
    if (!(ls >> c.n)) continue;  // blank/comment line
    if (!(ls >> c.solve.bs >> c.solve.threads >> tier >> mode >> sync >> kind))
      throw ValidationError("sweep file line " + std::to_string(lineno) +
                            ": want 'n bs threads tier mode sync kind'");
    c.solve.tier = parse_kernel_tier(tier);
    c.solve.mode = parse_solve_mode(mode);
    c.solve.sync = parse_sync_kind(sync);
    c.solve.elem_kind = parse_elem_kind(kind);
    c.solve.affinity = affinity;
    c.solve.track_paths = track_paths;
    out.push_back(c);
  }
  return out;
}

int cmd_bench(const BenchArgs& a) {
  const AffinityPolicy affinity = parse_affinity_policy(a.affinity);
  std::vector<BenchConfig> configs;
  if (!a.sweep_file.empty()) {
    configs = sweep_from_file(a.sweep_file, affinity, a.track_paths);
  } else {
    std::vector<int> ns = a.ns.empty() ? std::vector<int>{512, 1024, 2048} : a.ns;
    std::vector<int> bss = a.bss.empty() ? std::vector<int>{32, 64, 128} : a.bss;
    std::vector<int> threads = a.threads;
    if (threads.empty()) {
      threads = {1, physical_core_count(), logical_cpu_count()};
      std::sort(threads.begin(), threads.end());
      threads.erase(std::unique(threads.begin(), threads.end()), threads.end());
    }
    std::vector<KernelTier> tiers;
    if (a.tiers.empty())
      tiers.assign(kTierLadder.begin(), kTierLadder.end());
    else
      for (const auto& s : a.tiers) tiers.push_back(parse_kernel_tier(s));
    std::vector<SolveMode> modes;
    if (a.modes.empty())
      modes = {SolveMode::kBarrier};
    else
      for (const auto& s : a.modes) modes.push_back(parse_solve_mode(s));
    std::vector<SyncKind> syncs;
    if (a.syncs.empty())
      syncs = {SyncKind::kSemaphore};
    else
      for (const auto& s : a.syncs) syncs.push_back(parse_sync_kind(s));
    std::vector<ElemKind> kinds;
    if (a.kinds.empty())
      kinds = {ElemKind::kF32, ElemKind::kF64};
    else
      for (const auto& s : a.kinds) kinds.push_back(parse_elem_kind(s));

    for (int n : ns)
      for (ElemKind kind : kinds)
        for (int bs : bss) {
          if (n % bs != 0) {
            std::fprintf(stderr, "note: skipping bs=%d for n=%d (not a divisor)\n", bs, n);
            continue;
          }
          for (int t : threads)
            for (KernelTier tier : tiers)
              for (SolveMode mode : modes) {
                // sync is meaningless under Barrier; emit one row, not |syncs|.
                const auto& mode_syncs =
                    mode == SolveMode::kBarrier ? std::vector<SyncKind>{syncs.front()} : syncs;
                for (SyncKind sync : mode_syncs) {
                  BenchConfig c;
                  c.n = n;
                  c.solve.bs = bs;
                  c.solve.threads = t;
                  c.solve.tier = tier;
                  c.solve.mode = mode;
                  c.solve.sync = sync;
                  c.solve.elem_kind = kind;
                  c.solve.affinity = affinity;
                  c.solve.track_paths = a.track_paths;
                  configs.push_back(c);
                }
              }
        }
  }
  if (configs.empty()) throw ValidationError("bench: sweep is empty");

  std::vector<BenchRecord> records =
      run_bench(configs, a.graph, a.reps, a.verify_cap, &std::cout);
  std::cout << "\n" << render_table(records);
  if (!a.csv.empty()) {
    emit_csv(std::span<const BenchRecord>(records), a.csv);
    std::cout << "wrote " << records.size() << " rows to " << a.csv << "\n";
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"blocked Floyd-Warshall all-pairs shortest paths"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* c_gen = app.add_subcommand("gen", "generate a random distance matrix");
  c_gen->add_option("--n", gen.spec.n, "vertex count")->required();
  c_gen->add_option("--null-fraction", gen.spec.null_fraction,
                    "probability an edge is absent (default 0.30)");
  c_gen->add_option("--wmin", gen.spec.weight_min, "minimum edge weight (default 1)");
  c_gen->add_option("--wmax", gen.spec.weight_max, "maximum edge weight (default 100)");
  c_gen->add_option("--seed", gen.spec.seed, "PRNG seed (default 1)");
  c_gen->add_option("--kind", gen.kind, "element kind: f32|f64 (default f32)");
  c_gen->add_option("--out,-o", gen.out, "output matrix file")->required();

  SolveArgs sol;
  CLI::App* c_solve = app.add_subcommand("solve", "compute the all-pairs closure");
  c_solve->add_option("input", sol.in, "input matrix file")->required();
  c_solve->add_option("--out,-o", sol.out, "output matrix file")->required();
  c_solve->add_option("--bs", sol.cfg.bs, "block size (default 64)");
  c_solve->add_option("--threads,-t", sol.cfg.threads,
                      "worker threads (default: logical cores)")
      ->default_val(0);
  c_solve->add_option("--tier", sol.tier,
                      "kernel tier: baseline|vectorized|vectorized-aligned|branch-hinted|"
                      "unrolled (default unrolled)");
  c_solve->add_option("--mode", sol.mode, "schedule: barrier|dep-driven (default barrier)");
  c_solve->add_option("--sync", sol.sync,
                      "dep-driven sync: semaphore|condvar (default semaphore)");
  c_solve->add_option("--affinity", sol.affinity,
                      "pinning: none|scatter|compact (default none)");
  c_solve->add_option("--paths", sol.paths_out, "also write the intermediate matrix here");

  VerifyArgs ver;
  CLI::App* c_verify = app.add_subcommand("verify", "check a closure against the oracle");
  c_verify->add_option("original", ver.original, "original matrix file")->required();
  c_verify->add_option("closed", ver.closed, "closed matrix file")->required();
  c_verify->add_option("--paths", ver.paths, "intermediate matrix file to validate");

  BenchArgs ben;
  CLI::App* c_bench = app.add_subcommand("bench", "run a measurement sweep");
  c_bench->add_option("--n", ben.ns, "vertex counts (default 512 1024 2048)");
  c_bench->add_option("--bs", ben.bss, "block sizes (default 32 64 128)");
  c_bench->add_option("--threads,-t", ben.threads,
                      "thread counts (default 1, physical, logical)");
  c_bench->add_option("--tier", ben.tiers, "kernel tiers (default: all)");
  c_bench->add_option("--mode", ben.modes, "modes (default barrier)");
  c_bench->add_option("--sync", ben.syncs, "sync kinds for dep-driven (default semaphore)");
  c_bench->add_option("--kind", ben.kinds, "element kinds (default f32 f64)");
  c_bench->add_option("--affinity", ben.affinity, "pinning policy (default none)");
  c_bench->add_option("--sweep-file", ben.sweep_file,
                      "explicit sweep: lines of 'n bs threads tier mode sync kind'");
  c_bench->add_option("--reps", ben.reps, "timed repetitions per config (default 8)");
  c_bench->add_option("--verify-cap", ben.verify_cap,
                      "oracle spot-check only when n <= cap (default 1024)");
  c_bench->add_option("--csv", ben.csv, "write records to this CSV file");
  c_bench->add_option("--seed", ben.graph.seed, "instance seed (default 1)");
  c_bench->add_option("--null-fraction", ben.graph.null_fraction,
                      "absent-edge probability (default 0.30)");
  c_bench->add_option("--wmin", ben.graph.weight_min, "minimum edge weight");
  c_bench->add_option("--wmax", ben.graph.weight_max, "maximum edge weight");
  c_bench->add_flag("--track-paths", ben.track_paths, "maintain the intermediate matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help/version exit clean, everything else is usage
  }

  try {
    if (c_gen->parsed()) return cmd_gen(gen);
    if (c_solve->parsed()) return cmd_solve(sol);
    if (c_verify->parsed()) return cmd_verify(ver);
    if (c_bench->parsed()) return cmd_bench(ben);
    std::fprintf(stderr, "error: no subcommand\n");
    return 2;
  } catch (const BlockSizeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const ThreadPoolError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace bfw
