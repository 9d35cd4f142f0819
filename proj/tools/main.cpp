#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "jumpmet/cli.hpp"

namespace {

using jumpmet::cli::RunConfig;
using nlohmann::json;

// Config-file values fill the RunConfig first; command-line flags then
// override field by field.
void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw jumpmet::ValidationError("config file \"" + path +
                                   "\" does not exist");
  }
  std::ostringstream text;
  text << is.rdbuf();
  json j;
  try {
    j = json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw jumpmet::ValidationError(std::string("config file is not valid "
                                               "JSON: ") +
                                   e.what());
  }
  if (j.contains("command")) cfg.command = j.at("command").get<std::string>();
  if (j.contains("model")) {
    cfg.model = jumpmet::cli::parse_model_json_text(j.at("model").dump());
  }
  if (j.contains("atom")) {
    const auto& a = j.at("atom");
    cfg.atom.gamma = a.value("gamma", cfg.atom.gamma);
    cfg.atom.phi = a.value("phi", cfg.atom.phi);
    cfg.atom.t_obs = a.value("t_obs", cfg.atom.t_obs);
    cfg.atom.n_max = a.value("n_max", cfg.atom.n_max);
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    cfg.grid.min = g.value("min", cfg.grid.min);
    cfg.grid.max = g.value("max", cfg.grid.max);
    cfg.grid.steps = g.value("steps", cfg.grid.steps);
    cfg.grid.log_spaced = g.value("log", cfg.grid.log_spaced);
  }
  if (j.contains("out")) cfg.output_path = j.at("out").get<std::string>();
  if (j.contains("jumps_out")) {
    cfg.jumps_path = j.at("jumps_out").get<std::string>();
  }
  if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("n_steps")) cfg.n_steps = j.at("n_steps").get<int>();
  if (j.contains("shots")) cfg.shots = j.at("shots").get<long>();
  if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
  if (j.contains("dphi")) cfg.dphi = j.at("dphi").get<double>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
}

struct FlagState {
  std::string model_file;
  std::string kind;
  double phi = 0.0;
  double a_param = 1.0;
  double b_param = 0.0;
  double gamma = 1.0;
  double t_obs = 0.0;
  int n_max = 2000;
};

void add_common_options(CLI::App* cmd, RunConfig& cfg, FlagState& flags) {
  cmd->add_option("--model-file", flags.model_file,
                  "JSON model stanza (builtin kind or custom Kraus set)");
  cmd->add_option("--kind", flags.kind,
                  "builtin model kind: commuting-flip, reset, atom-feedback");
  cmd->add_option("--phi", flags.phi, "parameter phi (radians)");
  cmd->add_option("--A", flags.a_param, "reset-model survival amplitude A");
  cmd->add_option("--b", flags.b_param, "initial ground-state population b");
  cmd->add_option("--gamma", flags.gamma, "atom decay rate Gamma");
  cmd->add_option("--t-obs", flags.t_obs, "observation time T");
  cmd->add_option("--n-max", flags.n_max, "photon-number truncation");
  cmd->add_option("--dt", cfg.dt, "trajectory/Kraus time step");
  cmd->add_option("--n-steps", cfg.n_steps, "measurement sequence length N");
  cmd->add_option("--shots", cfg.shots, "number of trajectories");
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--dphi", cfg.dphi, "finite-difference step in phi");
  cmd->add_option("--grid-min", cfg.grid.min, "grid start");
  cmd->add_option("--grid-max", cfg.grid.max, "grid end");
  cmd->add_option("--grid-steps", cfg.grid.steps, "grid point count");
  cmd->add_flag("--grid-log", "log-spaced grid");
  cmd->add_option("--out", cfg.output_path, "output file path");
  cmd->add_option("--jumps-out", cfg.jumps_path, "per-jump dump path");
  cmd->add_option("--format", cfg.format, "output format: csv or json");
  cmd->add_option("--threads", cfg.threads,
                  "worker cap (0 = auto / JUMPMET_THREADS)");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  FlagState flags;

  try {
    // The config file is applied before flag parsing so flags override it.
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config") {
        apply_config_file(argv[i + 1], cfg);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return jumpmet::cli::kExitValidation;
  }

  CLI::App app{"Sequential quantum measurement statistics: Fisher "
               "information scans, Markovianity tests, photon counting, and "
               "seeded quantum-jump sampling"};
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration");

  const char* names[] = {"fisher-scan",  "fisher-scaling",   "markov-test",
                         "atom-stats",   "atom-uncertainty", "traj-run"};
  for (const char* name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration");
    add_common_options(sub, cfg, flags);
    sub->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : jumpmet::cli::kExitValidation;
  }

  auto parsed = app.get_subcommands();
  CLI::App* sub = parsed.empty() ? nullptr : parsed.front();

  try {
    if (!flags.model_file.empty()) {
      cfg.model = jumpmet::cli::parse_model_file(flags.model_file);
      cfg.atom.phi = cfg.model.phi;
    }
    if (!flags.kind.empty()) {
      cfg.model.kind = jumpmet::model_kind_from_string(flags.kind);
    }
    if (sub != nullptr) {
      if (sub->count("--phi")) {
        cfg.model.phi = flags.phi;
        cfg.atom.phi = flags.phi;
      }
      if (sub->count("--A")) cfg.model.params["A"] = flags.a_param;
      if (sub->count("--b")) cfg.model.params["b"] = flags.b_param;
      if (sub->count("--gamma")) cfg.atom.gamma = flags.gamma;
      if (sub->count("--t-obs")) cfg.atom.t_obs = flags.t_obs;
      if (sub->count("--n-max")) cfg.atom.n_max = flags.n_max;
      if (sub->count("--grid-log")) cfg.grid.log_spaced = true;
    }
    if (cfg.model.kind == jumpmet::ModelKind::AtomFeedback) {
      cfg.model.params["Gamma"] = cfg.atom.gamma;
      cfg.model.params["dt"] = cfg.dt;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return jumpmet::cli::kExitValidation;
  }

  if (cfg.command.empty()) {
    std::cerr << "error: no command given (see --help)\n";
    return jumpmet::cli::kExitValidation;
  }
  return jumpmet::cli::run(cfg);
}
