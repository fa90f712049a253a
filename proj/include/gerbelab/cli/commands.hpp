#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gerbelab/cli/report.hpp"
#include "gerbelab/error.hpp"

namespace gerbelab::cli {

/// Shared flags; unset values fall back to per-command defaults.
struct Options {
  std::uint64_t seed = 1;
  std::optional<double> tolerance;
  std::optional<int> grid;
  std::optional<int> truncation;
  bool machine_readable = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitViolation = 3;

/// 2 for malformed or inconsistent input, 3 for a violated mathematical
/// invariant.
int exit_code(Errc code);

Report cmd_cohomology(const std::string& echo, const Options& opt, const std::string& system_path,
                      std::optional<int> degree);

Report cmd_obstruction(const std::string& echo, const Options& opt, const std::string& transition_path,
                       const std::string& extension_path, const std::optional<std::string>& lifts_path);

enum class SchwingerMode { Trace, Residue, Identity, Jacobi, Defect, Curvature };

std::optional<SchwingerMode> parse_schwinger_mode(const std::string& name);

struct SchwingerArgs {
  SchwingerMode mode = SchwingerMode::Trace;
  std::vector<std::string> loop_paths;
  /// Shape of the seeded random loops that fill in missing files.
  int size = 2;
  int band = 3;
  bool skew_hermitian = false;
  /// Evaluate the trace below the band instead of failing.
  bool allow_small = false;
};

Report cmd_schwinger(const std::string& echo, const Options& opt, const SchwingerArgs& args);

Report cmd_chern(const std::string& echo, const Options& opt, const std::string& bundle_path);

/// Seeded invariant suites of every module at small sizes. `module` is
/// "all" or one of nerve, cech, lifting, schwinger, connection.
Report cmd_verify(const std::string& echo, const Options& opt, const std::string& module);

}  // namespace gerbelab::cli
