#include "bfw/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace bfw {

namespace {

constexpr char kMagic[4] = {'B', 'F', 'W', '1'};
constexpr uint32_t kVersion = 1;
constexpr uint32_t kKindF32 = 0;
constexpr uint32_t kKindF64 = 1;
constexpr uint32_t kKindPaths = 2;

#pragma pack(push, 1)
struct Header {
  char magic[4];
  uint32_t version;
  uint32_t kind;
  uint64_t n;
};
#pragma pack(pop)
static_assert(sizeof(Header) == 20);

// The format is defined little-endian; this code targets little-endian hosts
// and writes/reads payloads verbatim.
static_assert(std::endian::native == std::endian::little,
              "matrix file I/O assumes a little-endian host");

void write_file(const std::string& path, uint32_t kind, uint64_t n, const void* payload,
                size_t payload_bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  Header h{};
  std::memcpy(h.magic, kMagic, 4);
  h.version = kVersion;
  h.kind = kind;
  h.n = n;
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  out.write(static_cast<const char*>(payload), static_cast<std::streamsize>(payload_bytes));
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

struct RawFile {
  Header header;
  std::unique_ptr<char[]> payload;
  size_t payload_bytes;
};

RawFile read_file(const std::string& path, size_t elem_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  RawFile f{};
  in.read(reinterpret_cast<char*>(&f.header), sizeof(Header));
  if (in.gcount() != sizeof(Header))
    throw MalformedInput("'" + path + "': file too short for a matrix header");
  if (std::memcmp(f.header.magic, kMagic, 4) != 0)
    throw MalformedInput("'" + path + "': bad magic, not a matrix file");
  if (f.header.version != kVersion)
    throw MalformedInput("'" + path + "': unsupported format version " +
                         std::to_string(f.header.version));
  if (f.header.kind > kKindPaths)
    throw MalformedInput("'" + path + "': unknown element kind " +
                         std::to_string(f.header.kind));
  if (f.header.n == 0 || f.header.n > (uint64_t(1) << 20))
    throw MalformedInput("'" + path + "': implausible dimension " +
                         std::to_string(f.header.n));
  f.payload_bytes = static_cast<size_t>(f.header.n) * f.header.n * elem_size;
  f.payload = std::make_unique<char[]>(f.payload_bytes);
  in.read(f.payload.get(), static_cast<std::streamsize>(f.payload_bytes));
  if (static_cast<size_t>(in.gcount()) != f.payload_bytes)
    throw TruncatedInput("'" + path + "': payload ends after " +
                         std::to_string(in.gcount()) + " of " +
                         std::to_string(f.payload_bytes) + " bytes");
  return f;
}

uint32_t peek_kind(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  Header h{};
  in.read(reinterpret_cast<char*>(&h), sizeof(Header));
  if (in.gcount() != sizeof(Header))
    throw MalformedInput("'" + path + "': file too short for a matrix header");
  if (std::memcmp(h.magic, kMagic, 4) != 0)
    throw MalformedInput("'" + path + "': bad magic, not a matrix file");
  return h.kind;
}

}  // namespace

template <typename T>
void write_matrix(const std::string& path, const DistanceMatrix<T>& m) {
  const uint32_t kind = std::is_same_v<T, float> ? kKindF32 : kKindF64;
  write_file(path, kind, static_cast<uint64_t>(m.n()), m.data(), m.size() * sizeof(T));
}

template void write_matrix<float>(const std::string&, const DistanceMatrix<float>&);
template void write_matrix<double>(const std::string&, const DistanceMatrix<double>&);

void write_matrix(const std::string& path, const AnyDistanceMatrix& m) {
  std::visit([&](const auto& x) { write_matrix(path, x); }, m);
}

template <typename T>
DistanceMatrix<T> read_matrix_as(const std::string& path) {
  const uint32_t want = std::is_same_v<T, float> ? kKindF32 : kKindF64;
  const uint32_t got = peek_kind(path);
  if (got != want)
    throw ElemKindMismatch("'" + path + "': stored kind " + std::to_string(got) +
                           ", requested " + std::to_string(want));
  RawFile f = read_file(path, sizeof(T));
  DistanceMatrix<T> m(static_cast<int>(f.header.n));
  std::memcpy(m.data(), f.payload.get(), f.payload_bytes);
  return m;
}

template DistanceMatrix<float> read_matrix_as<float>(const std::string&);
template DistanceMatrix<double> read_matrix_as<double>(const std::string&);

AnyDistanceMatrix read_matrix(const std::string& path) {
  const uint32_t kind = peek_kind(path);
  switch (kind) {
    case kKindF32:
      return read_matrix_as<float>(path);
    case kKindF64:
      return read_matrix_as<double>(path);
    case kKindPaths:
      throw ElemKindMismatch("'" + path + "': holds an intermediate matrix, not distances");
    default:
      throw MalformedInput("'" + path + "': unknown element kind " + std::to_string(kind));
  }
}

void write_paths(const std::string& path, const IntermediateMatrix& p) {
  write_file(path, kKindPaths, static_cast<uint64_t>(p.n()), p.data(),
             p.size() * sizeof(int32_t));
}

IntermediateMatrix read_paths(const std::string& path) {
  const uint32_t kind = peek_kind(path);
  if (kind != kKindPaths)
    throw ElemKindMismatch("'" + path + "': holds distances, not an intermediate matrix");
  RawFile f = read_file(path, sizeof(int32_t));
  IntermediateMatrix p(static_cast<int>(f.header.n));
  std::memcpy(p.data(), f.payload.get(), f.payload_bytes);
  return p;
}

}  // namespace bfw
