#pragma once

#include <string>

#include "bfw/matrix.hpp"

namespace bfw {

// On-disk layout (little-endian throughout):
//   bytes 0..3   magic "BFW1"
//   u32          format version (currently 1)
//   u32          payload kind: 0 = f32, 1 = f64, 2 = i32 intermediate matrix
//   u64          n
//   n*n elements raw row-major
//
// Throws MalformedInput (bad magic/version/kind/header), TruncatedInput
// (payload shorter than n*n), IoError (filesystem trouble).

void write_matrix(const std::string& path, const AnyDistanceMatrix& m);
template <typename T>
void write_matrix(const std::string& path, const DistanceMatrix<T>& m);

AnyDistanceMatrix read_matrix(const std::string& path);

// Same, but insists on the stored kind; throws ElemKindMismatch otherwise.
template <typename T>
DistanceMatrix<T> read_matrix_as(const std::string& path);

void write_paths(const std::string& path, const IntermediateMatrix& p);
IntermediateMatrix read_paths(const std::string& path);

extern template void write_matrix<float>(const std::string&, const DistanceMatrix<float>&);
extern template void write_matrix<double>(const std::string&, const DistanceMatrix<double>&);
extern template DistanceMatrix<float> read_matrix_as<float>(const std::string&);
extern template DistanceMatrix<double> read_matrix_as<double>(const std::string&);

}  // namespace bfw
