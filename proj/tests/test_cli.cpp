#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "bfw/cli.hpp"
#include "bfw/io.hpp"
#include "bfw/matrix.hpp"
#include "doctest.h"
#include "support/util.hpp"

using testutil::slurp;
using testutil::TempFile;

namespace {

int run(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"bfw"};
  owned.insert(owned.end(), args);
  std::vector<const char*> argv;
  for (const auto& s : owned) argv.push_back(s.c_str());
  return bfw::cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run({}) == 2);                      // a subcommand is required
  CHECK(run({"frobnicate"}) == 2);          // unknown subcommand
  CHECK(run({"gen", "--n", "8"}) == 2);     // missing --out
  CHECK(run({"--help"}) == 0);
  CHECK(run({"solve", "--help"}) == 0);
}

TEST_CASE("gen validates its spec, then writes a loadable file") {
  TempFile out("gen");
  CHECK(run({"gen", "--n", "0", "--out", out.path}) == 2);
  CHECK(run({"gen", "--n", "16", "--null-fraction", "1.5", "--out", out.path}) == 2);
  CHECK(run({"gen", "--n", "16", "--wmin", "9", "--wmax", "4", "--out", out.path}) == 2);

  CHECK(run({"gen", "--n", "16", "--seed", "7", "--kind", "f64", "--out", out.path}) == 0);
  auto m = bfw::read_matrix(out.path);
  CHECK(bfw::elem_kind(m) == bfw::ElemKind::kF64);
  CHECK(bfw::matrix_n(m) == 16);
}

TEST_CASE("solve: block size and input errors map to distinct exit codes") {
  TempFile in("sbad"), out("sbad_out");
  REQUIRE(run({"gen", "--n", "64", "--out", in.path}) == 0);
  CHECK(run({"solve", in.path, "--out", out.path, "--bs", "48"}) == 3);
  CHECK(run({"solve", in.path, "--out", out.path, "--tier", "turbo"}) == 2);
  CHECK(run({"solve", testutil::temp_path("missing"), "--out", out.path}) == 4);
}

TEST_CASE("gen -> solve -> verify pipeline, with paths") {
  TempFile in("pipe_in"), out("pipe_out"), paths("pipe_p");
  REQUIRE(run({"gen", "--n", "64", "--seed", "3", "--out", in.path}) == 0);
  REQUIRE(run({"solve", in.path, "--out", out.path, "--bs", "16", "--threads", "2", "--paths",
               paths.path}) == 0);
  CHECK(run({"verify", in.path, out.path}) == 0);
  CHECK(run({"verify", in.path, out.path, "--paths", paths.path}) == 0);
}

TEST_CASE("verify flags a single perturbed cell") {
  TempFile in("pert_in"), out("pert_out");
  REQUIRE(run({"gen", "--n", "64", "--seed", "5", "--out", in.path}) == 0);
  REQUIRE(run({"solve", in.path, "--out", out.path, "--bs", "32"}) == 0);
  REQUIRE(run({"verify", in.path, out.path}) == 0);

  auto closed = bfw::read_matrix_as<float>(out.path);
  closed(3, 7) = closed(3, 7) == bfw::kInf<float> ? 5.0f : closed(3, 7) + 1.0f;
  bfw::write_matrix(out.path, closed);
  CHECK(run({"verify", in.path, out.path}) == 1);
}

TEST_CASE("verify rejects mismatched inputs as usage errors") {
  TempFile a("va"), b("vb"), c("vc");
  REQUIRE(run({"gen", "--n", "32", "--out", a.path}) == 0);
  REQUIRE(run({"gen", "--n", "64", "--out", b.path}) == 0);
  REQUIRE(run({"gen", "--n", "32", "--kind", "f64", "--out", c.path}) == 0);
  CHECK(run({"verify", a.path, b.path}) == 2);   // dimension mismatch
  CHECK(run({"verify", a.path, c.path}) == 2);   // element-kind mismatch
  CHECK(run({"verify", a.path, testutil::temp_path("gone")}) == 4);
}

TEST_CASE("solve output bytes are identical across modes and sync flavors") {
  TempFile in("det_in");
  REQUIRE(run({"gen", "--n", "64", "--seed", "11", "--out", in.path}) == 0);

  struct Variant {
    const char* mode;
    const char* sync;
  };
  std::vector<std::vector<char>> outputs, paths;
  for (Variant v : {Variant{"barrier", "semaphore"},
                    {"dep-driven", "semaphore"},
                    {"dep-driven", "condvar"}}) {
    TempFile out("det_out"), p("det_p");
    REQUIRE(run({"solve", in.path, "--out", out.path, "--bs", "16", "--threads", "4", "--mode",
                 v.mode, "--sync", v.sync, "--paths", p.path}) == 0);
    outputs.push_back(slurp(out.path));
    paths.push_back(slurp(p.path));
  }
  CHECK(outputs[0] == outputs[1]);
  CHECK(outputs[1] == outputs[2]);
  CHECK(paths[0] == paths[1]);
  CHECK(paths[1] == paths[2]);
  CHECK(outputs[0].size() == 20 + 64 * 64 * sizeof(float));
}

TEST_CASE("bench: tiny sweep, csv written, skips non-dividing block sizes") {
  TempFile csv("bench_csv");
  CHECK(run({"bench", "--n", "32", "--bs", "8", "--bs", "20", "--threads", "1", "--tier",
             "baseline", "--tier", "unrolled", "--kind", "f32", "--reps", "1", "--csv",
             csv.path}) == 0);
  const auto text = slurp(csv.path);
  const std::string s(text.begin(), text.end());
  int lines = 0;
  for (char ch : s)
    if (ch == '\n') ++lines;
  CHECK(lines == 3);  // header + 2 tiers (bs=20 skipped: 32 % 20 != 0)
}

TEST_CASE("bench: explicit sweep file") {
  TempFile sweep("sweep"), csv("sweep_csv");
  {
    std::ofstream f(sweep.path);
    f << "# n bs threads tier mode sync kind\n";
    f << "32 8 1 vectorized barrier semaphore f32\n";
    f << "\n";
    f << "32 8 2 unrolled dep-driven condvar f64  # inline comment\n";
  }
  CHECK(run({"bench", "--sweep-file", sweep.path, "--reps", "1", "--csv", csv.path}) == 0);
  const auto text = slurp(csv.path);
  const std::string s(text.begin(), text.end());
  CHECK(s.find("32,8,1,vectorized,barrier,semaphore,none,f32") != std::string::npos);
  CHECK(s.find("32,8,2,unrolled,dep-driven,condvar,none,f64") != std::string::npos);

  std::ofstream(sweep.path) << "32 8\n";  // malformed line
  CHECK(run({"bench", "--sweep-file", sweep.path, "--reps", "1"}) == 2);
  CHECK(run({"bench", "--sweep-file", testutil::temp_path("nosweep")}) == 4);
}
