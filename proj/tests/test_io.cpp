#include <filesystem>
#include <fstream>

#include "bfw/errors.hpp"
#include "bfw/io.hpp"
#include "doctest.h"
#include "support/oracles.hpp"
#include "support/util.hpp"

using bfw::DistanceMatrix;
using testutil::TempFile;

TEST_CASE_TEMPLATE("matrix files round-trip bitwise", T, float, double) {
  auto m = testutil::random_real_matrix<T>(8, 0.4, 1, 100, 21);  // keeps some +inf cells
  m(1, 0) = T(-0.0);
  TempFile f("roundtrip");
  bfw::write_matrix(f.path, m);
  auto back = bfw::read_matrix_as<T>(f.path);
  CHECK(bfw::bitwise_equal(m, back));

  // untyped read lands on the same alternative
  auto any = bfw::read_matrix(f.path);
  CHECK(bfw::elem_kind(any) == m.kind());
  CHECK(bfw::bitwise_equal(std::get<DistanceMatrix<T>>(any), m));
}

TEST_CASE("path matrices round-trip") {
  bfw::IntermediateMatrix p(5);
  p(0, 3) = 2;
  p(4, 1) = 0;
  TempFile f("paths");
  bfw::write_paths(f.path, p);
  CHECK(bfw::read_paths(f.path) == p);
}

TEST_CASE("missing and empty files") {
  CHECK_THROWS_AS(bfw::read_matrix(testutil::temp_path("nonexistent")), bfw::IoError);
  TempFile f("empty");
  std::ofstream(f.path, std::ios::binary).close();
  CHECK_THROWS_AS(bfw::read_matrix(f.path), bfw::MalformedInput);
}

TEST_CASE("bad magic and bad header fields") {
  TempFile f("magic");
  {
    std::ofstream out(f.path, std::ios::binary);
    out.write("NOPE\x01\x00\x00\x00\x00\x00\x00\x00", 12);
    out.write("\x08\x00\x00\x00\x00\x00\x00\x00", 8);
  }
  CHECK_THROWS_AS(bfw::read_matrix(f.path), bfw::MalformedInput);

  // valid file, then corrupt the version field in place
  auto m = testutil::random_real_matrix<float>(4, 0.3, 1, 10, 1);
  bfw::write_matrix(f.path, m);
  {
    std::fstream io(f.path, std::ios::binary | std::ios::in | std::ios::out);
    io.seekp(4);
    io.write("\x09\x00\x00\x00", 4);
  }
  CHECK_THROWS_AS(bfw::read_matrix(f.path), bfw::MalformedInput);

  // and an unknown payload kind
  bfw::write_matrix(f.path, m);
  {
    std::fstream io(f.path, std::ios::binary | std::ios::in | std::ios::out);
    io.seekp(8);
    io.write("\x07\x00\x00\x00", 4);
  }
  CHECK_THROWS_AS(bfw::read_matrix(f.path), bfw::MalformedInput);
}

TEST_CASE("truncated payload is reported as truncation, with byte counts") {
  auto m = testutil::random_real_matrix<float>(4, 0.3, 1, 10, 2);
  TempFile f("trunc");
  bfw::write_matrix(f.path, m);
  // header (20) + 3 of 4 rows
  std::filesystem::resize_file(f.path, 20 + 3 * 4 * sizeof(float));
  CHECK_THROWS_AS(bfw::read_matrix(f.path), bfw::TruncatedInput);
  try {
    bfw::read_matrix(f.path);
  } catch (const bfw::TruncatedInput& e) {
    const std::string msg = e.what();
    CHECK(msg.find("64") != std::string::npos);  // expected payload bytes
    CHECK(msg.find("48") != std::string::npos);  // actual payload bytes
  }
}

TEST_CASE("element-kind mismatches are their own error") {
  TempFile f("kind");
  bfw::write_matrix(f.path, testutil::random_real_matrix<float>(4, 0.3, 1, 10, 3));
  CHECK_THROWS_AS(bfw::read_matrix_as<double>(f.path), bfw::ElemKindMismatch);
  CHECK_THROWS_AS(bfw::read_paths(f.path), bfw::ElemKindMismatch);

  bfw::IntermediateMatrix p(4);
  bfw::write_paths(f.path, p);
  CHECK_THROWS_AS(bfw::read_matrix(f.path), bfw::ElemKindMismatch);
  CHECK_THROWS_AS(bfw::read_matrix_as<float>(f.path), bfw::ElemKindMismatch);
}

TEST_CASE("implausible n in the header is rejected before allocation") {
  TempFile f("hugen");
  {
    std::ofstream out(f.path, std::ios::binary);
    out.write("BFW1", 4);
    out.write("\x01\x00\x00\x00", 4);                  // version 1
    out.write("\x00\x00\x00\x00", 4);                  // kind f32
    out.write("\x00\x00\x00\x00\x01\x00\x00\x00", 8);  // n = 2^32
  }
  CHECK_THROWS_AS(bfw::read_matrix(f.path), bfw::MalformedInput);
}
