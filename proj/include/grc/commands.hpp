#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace grc {

// Captured output of one command run, so tests can exercise commands
// in-process exactly as the executable would.
struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// Exit codes shared by all commands:
//   0  clean (non-entropy-ejecting / dissipation-free)
//   1  entropy-ejecting or dissipative result
//   2  usage, parse, or simulation error
//   3  an internal cap was exceeded

struct ClassifyOptions {
  std::string path;
  std::string op;
  bool json = false;
};
CommandResult run_classify(const ClassifyOptions& options);

struct AnalyzeOptions {
  std::string path;
  std::string circuit;
  std::string dist;
  bool json = false;
  std::optional<double> temperature;  // kelvin; appends heat output
};
CommandResult run_analyze(const AnalyzeOptions& options);

struct PreconditionsOptions {
  std::string path;
  std::string op;
  // Listing cap: flag value, else the GRC_ENUM_LIMIT environment variable,
  // else one million.
  std::optional<std::uint64_t> limit;
  bool json = false;
};
CommandResult run_preconditions(const PreconditionsOptions& options);

struct AdiabaticOptions {
  std::string source;  // model file, or the built-in "fig7"
  std::optional<std::string> net;    // required when a file has several nets
  std::optional<std::string> input;  // "A=1,B=0"
  bool all_inputs = false;
  bool json = false;
};
CommandResult run_adiabatic(const AdiabaticOptions& options);

}  // namespace grc
