#ifndef JUMPMET_CLI_HPP
#define JUMPMET_CLI_HPP

#include <cstdint>
#include <string>

#include "jumpmet/atomjump.hpp"
#include "jumpmet/fisher.hpp"
#include "jumpmet/qops.hpp"

namespace jumpmet::cli {

// Exit codes: 0 success, 1 validation error, 2 capacity/truncation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitCapacity = 2;

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;
  bool log_spaced = false;
};

struct RunConfig {
  std::string command;  // fisher-scan, fisher-scaling, markov-test,
                        // atom-stats, atom-uncertainty, traj-run
  ModelSpec model;
  AtomParams atom;
  GridSpec grid;
  std::string output_path;
  std::string jumps_path;  // optional per-jump dump for traj-run
  std::string format = "csv";
  std::uint64_t seed = 0;
  int n_steps = 1;
  long shots = 1000;
  double dt = 1e-3;
  double dphi = kDefaultDphi;
  int threads = 0;  // 0 = auto / JUMPMET_THREADS
};

// Loads a model stanza: {"kind": ..., "phi": ..., "params": {...}} for the
// builtins, or {"dim": d, "kraus": [[[re,im],...],...], "phi": f,
// "params": {...}} for a custom instrument (which must pass the
// completeness check at 1e-12).
ModelSpec parse_model_file(const std::string& path);
ModelSpec parse_model_json_text(const std::string& text);

// Executes one command, writes its artifact files, and prints a one-line
// summary to stdout. Returns the exit code; error text goes to stderr.
int run(const RunConfig& config);

}  // namespace jumpmet::cli

#endif
