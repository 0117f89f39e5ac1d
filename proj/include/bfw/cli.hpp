#pragma once

namespace bfw {

// Full command-line entry point (gen / solve / verify / bench).  Returns the
// process exit code: 0 success, 1 verification mismatch, 2 usage error,
// 3 configuration error, 4 I/O error.  Reentrant, so tests can invoke it
// in-process.
int cli_main(int argc, const char* const* argv);

}  // namespace bfw
