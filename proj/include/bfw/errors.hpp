#pragma once

#include <stdexcept>
#include <string>

namespace bfw {

// Invalid user-supplied parameter (generator spec, config field, flag value).
// The message names the offending field.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Requested block size does not divide the matrix dimension.
class BlockSizeError : public std::invalid_argument {
 public:
  BlockSizeError(int n, int bs)
      : std::invalid_argument("block size " + std::to_string(bs) +
                              " does not divide matrix dimension " + std::to_string(n)) {}
};

// Base for matrix file I/O failures.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// File is not a matrix file at all (bad magic, bad header, empty file).
class MalformedInput : public IoError {
 public:
  explicit MalformedInput(const std::string& msg) : IoError(msg) {}
};

// Header was fine but the payload ends early.
class TruncatedInput : public IoError {
 public:
  explicit TruncatedInput(const std::string& msg) : IoError(msg) {}
};

// Stored element kind differs from the one the caller asked for.
class ElemKindMismatch : public IoError {
 public:
  explicit ElemKindMismatch(const std::string& msg) : IoError(msg) {}
};

// Path expansion ran into an inconsistent intermediate matrix.
class CorruptPathMatrix : public std::runtime_error {
 public:
  explicit CorruptPathMatrix(const std::string& msg) : std::runtime_error(msg) {}
};

// A hop in a proposed path is not an edge of the original matrix.
class InvalidPath : public std::runtime_error {
 public:
  explicit InvalidPath(const std::string& msg) : std::runtime_error(msg) {}
};

// Dependency bookkeeping went out of balance (scheduler bug, not user error).
class ProtocolViolation : public std::logic_error {
 public:
  explicit ProtocolViolation(const std::string& msg) : std::logic_error(msg) {}
};

// Could not bring up the requested worker threads.
class ThreadPoolError : public std::runtime_error {
 public:
  explicit ThreadPoolError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bfw
