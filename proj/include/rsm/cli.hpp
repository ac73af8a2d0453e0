#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rsm {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

namespace cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kCapacity = 3,
  kVerificationFailed = 4,
};

// Full command line including the program name in args[0]. Reports go to
// `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Hex SHA-256 of a byte string and of a file's contents.
std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);

}  // namespace cli
}  // namespace rsm
