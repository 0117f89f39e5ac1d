#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace testutil {

inline std::string temp_path(const std::string& tag) {
  static std::atomic<int> counter{0};
  const std::string name = "bfw_test_" + std::to_string(::getpid()) + "_" + tag + "_" +
                           std::to_string(counter.fetch_add(1));
  return (std::filesystem::temp_directory_path() / name).string();
}

// Self-cleaning temp file path.
struct TempFile {
  std::string path;
  explicit TempFile(const std::string& tag) : path(temp_path(tag)) {}
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  operator const std::string&() const { return path; }
  const char* c_str() const { return path.c_str(); }
};

inline std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil
