#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "foldcycle/error.hpp"
#include "foldcycle/unfold.hpp"

namespace foldcycle::app {

const std::vector<std::string>& commands();

struct RunOptions {
  std::filesystem::path config;
  std::string command;
  std::optional<double> b;
  std::optional<double> epsilon;
  std::optional<ShiftConvention> shift;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  bool dump_normalized = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitMismatch = 3;

int exit_code(ErrorCategory c);

/// Executes one command, writes `<name>.<command>.json` (plus CSV/SVG where
/// the command produces them) into the output directory and returns the exit
/// code. Diagnostics go to `err`.
int run(const RunOptions& opts, std::ostream& err);

}  // namespace foldcycle::app
