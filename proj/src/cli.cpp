#include "jumpmet/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "jumpmet/io.hpp"
#include "jumpmet/seqmeas.hpp"
#include "jumpmet/trajectory.hpp"

namespace jumpmet::cli {

namespace {

using nlohmann::json;

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw ValidationError("cannot open output path \"" + path + "\"");
  }
  return os;
}

ModelSpec model_from_json(const json& j) {
  ModelSpec spec;
  if (j.contains("kraus")) {
    spec.kind = ModelKind::Custom;
    int dim = j.value("dim", 0);
    if (dim < 1) throw ValidationError("custom model field dim must be >= 1");
    for (const auto& jm : j.at("kraus")) {
      Mat m(dim, dim);
      if (static_cast<int>(jm.size()) != dim) {
        throw ValidationError("custom Kraus matrix row count != dim");
      }
      for (int r = 0; r < dim; ++r) {
        const auto& row = jm.at(static_cast<std::size_t>(r));
        if (static_cast<int>(row.size()) != dim) {
          throw ValidationError("custom Kraus matrix column count != dim");
        }
        for (int c = 0; c < dim; ++c) {
          const auto& e = row.at(static_cast<std::size_t>(c));
          m(r, c) = std::complex<double>(e.at(0).get<double>(),
                                         e.at(1).get<double>());
        }
      }
      spec.custom_matrices.push_back(std::move(m));
    }
  } else if (j.contains("kind")) {
    spec.kind = model_kind_from_string(j.at("kind").get<std::string>());
  } else {
    throw ValidationError("model file needs either field kind or field kraus");
  }
  spec.phi = j.value("phi", 0.0);
  if (j.contains("params")) {
    for (const auto& [key, value] : j.at("params").items()) {
      spec.params[key] = value.get<double>();
    }
  }
  // Flat parameter keys are accepted as a convenience.
  for (const char* key : {"A", "b", "Gamma", "dt"}) {
    if (j.contains(key)) spec.params[key] = j.at(key).get<double>();
  }
  // Building validates ranges and, for custom sets, completeness.
  build_model(spec);
  return spec;
}

}  // namespace

ModelSpec parse_model_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model file is not valid JSON: ") +
                          e.what());
  }
  return model_from_json(j);
}

ModelSpec parse_model_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("model file \"" + path + "\" does not exist");
  std::ostringstream text;
  text << is.rdbuf();
  return parse_model_json_text(text.str());
}

namespace {

std::vector<double> grid_values(const GridSpec& grid) {
  if (grid.steps < 1) throw ValidationError("grid steps must be >= 1");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(grid.steps));
  if (grid.steps == 1) {
    values.push_back(grid.min);
    return values;
  }
  if (grid.log_spaced) {
    if (!(grid.min > 0.0 && grid.max > 0.0)) {
      throw ValidationError("log-spaced grid needs positive endpoints");
    }
    double lo = std::log(grid.min), hi = std::log(grid.max);
    for (int i = 0; i < grid.steps; ++i) {
      values.push_back(std::exp(lo + (hi - lo) * i / (grid.steps - 1)));
    }
  } else {
    for (int i = 0; i < grid.steps; ++i) {
      values.push_back(grid.min + (grid.max - grid.min) * i / (grid.steps - 1));
    }
  }
  return values;
}

void write_scan(const RunConfig& cfg, const std::string& axis_name,
                const std::vector<std::pair<double, double>>& rows,
                const std::string& value_name) {
  auto os = open_output(cfg.output_path);
  if (cfg.format == "json") {
    json j = json::array();
    for (const auto& [a, v] : rows) {
      j.push_back({{axis_name, a}, {value_name, v}});
    }
    os << j.dump(2) << "\n";
  } else {
    write_pairs_csv(os, axis_name, value_name, rows);
  }
}

int run_fisher_scan(const RunConfig& cfg) {
  DensityMatrix rho0 = default_initial_state(cfg.model);
  std::vector<std::pair<double, double>> rows;
  double f_max = 0.0;
  for (double phi : grid_values(cfg.grid)) {
    double f = fisher_information(cfg.model.with_phi(phi), rho0, cfg.n_steps,
                                  cfg.dphi);
    f_max = std::max(f_max, f);
    rows.emplace_back(phi, f);
  }
  write_scan(cfg, "axis_value", rows, "fisher");
  std::cout << "fisher-scan: " << rows.size() << " points, N = " << cfg.n_steps
            << ", max F = " << g17(f_max) << "\n";
  return kExitOk;
}

int run_fisher_scaling(const RunConfig& cfg) {
  DensityMatrix rho0 = default_initial_state(cfg.model);
  int n_min = static_cast<int>(std::lround(cfg.grid.min));
  int n_max = static_cast<int>(std::lround(cfg.grid.max));
  if (n_min < 1 || n_max < n_min) {
    throw ValidationError("fisher-scaling needs 1 <= n-min <= n-max");
  }
  FisherScan scan;
  scan.axis = ScanAxis::NSteps;
  scan.model = cfg.model;
  scan.derivative_step = cfg.dphi;
  for (int n = n_min; n <= n_max; ++n) {
    scan.points.emplace_back(double(n),
                             fisher_information(cfg.model, rho0, n, cfg.dphi));
  }
  ScalingFit fit = fit_quadratic_scaling(scan);

  auto os = open_output(cfg.output_path);
  json j = {{"a", fit.a},           {"b", fit.b},
            {"c", fit.c},           {"r_squared", fit.r_squared},
            {"n_min", fit.n_min},   {"n_max", fit.n_max}};
  os << j.dump(2) << "\n";
  std::cout << "fisher-scaling: fit a = " << g17(fit.a) << ", b = "
            << g17(fit.b) << ", c = " << g17(fit.c)
            << ", r^2 = " << g17(fit.r_squared) << "\n";
  return kExitOk;
}

int run_markov_test(const RunConfig& cfg) {
  KrausSet k = build_model(cfg.model);
  MarkovGapResult result = markov_gap(k, default_initial_state(cfg.model));
  auto os = open_output(cfg.output_path);
  json skipped = json::array();
  for (const auto& s : result.skipped) {
    std::string bits;
    for (int b : s) bits += b ? '1' : '0';
    skipped.push_back(bits);
  }
  json j = {{"gap", result.gap}, {"skipped", skipped}};
  os << j.dump(2) << "\n";
  std::cout << "markov-test: max gap = " << g17(result.gap) << "\n";
  return kExitOk;
}

json atom_summary(const RunConfig& cfg, const PhotonStatistics& stats) {
  json summary = {{"nbar", stats.nbar},
                  {"variance", stats.variance},
                  {"truncation_mass", stats.truncation_mass}};
  try {
    summary["delta_phi_sq"] = phase_uncertainty(cfg.atom, cfg.dphi);
  } catch (const DomainError&) {
    summary["delta_phi_sq"] = nullptr;
  }
  return summary;
}

int run_atom_stats(const RunConfig& cfg) {
  PhotonStatistics stats = photon_statistics(cfg.atom);
  if (stats.truncation_mass > 1e-6) {
    std::cerr << "warning: truncation mass " << g17(stats.truncation_mass)
              << " exceeds 1e-6; consider a larger n-max\n";
  }
  json summary = atom_summary(cfg, stats);
  if (cfg.format == "json") {
    auto os = open_output(cfg.output_path);
    os << summary.dump(2) << "\n";
  } else {
    auto os = open_output(cfg.output_path);
    os << "n,p_n\n";
    for (std::size_t n = 0; n < stats.p.size(); ++n) {
      os << n << "," << g17(stats.p[n]) << "\n";
    }
    auto js = open_output(cfg.output_path + ".summary.json");
    js << summary.dump(2) << "\n";
  }
  std::cout << "atom-stats: nbar = " << g17(stats.nbar) << ", variance = "
            << g17(stats.variance) << ", truncation mass = "
            << g17(stats.truncation_mass) << "\n";
  return kExitOk;
}

int run_atom_uncertainty(const RunConfig& cfg) {
  std::vector<std::pair<double, double>> rows;
  for (double t : grid_values(cfg.grid)) {
    AtomParams p = cfg.atom;
    p.t_obs = t;
    rows.emplace_back(t, phase_uncertainty(p, cfg.dphi));
  }
  write_scan(cfg, "t_obs", rows, "delta_phi_sq");
  std::cout << "atom-uncertainty: " << rows.size()
            << " points, final (dphi)^2 = " << g17(rows.back().second) << "\n";
  return kExitOk;
}

int run_traj(const RunConfig& cfg) {
  std::vector<TrajectoryRecord> records;
  if (cfg.model.kind == ModelKind::AtomFeedback) {
    records = simulate_atom_batch(cfg.atom, cfg.dt, cfg.seed, cfg.shots,
                                  cfg.threads);
  } else {
    KrausSet k = build_model(cfg.model);
    records = simulate_chain_batch(k, default_initial_state(cfg.model),
                                   cfg.n_steps, cfg.seed, cfg.shots,
                                   cfg.threads);
  }

  {
    auto os = open_output(cfg.output_path);
    os << "seed,n_photons\n";
    for (const auto& rec : records) {
      os << rec.seed << "," << rec.n_photons << "\n";
    }
  }
  if (!cfg.jumps_path.empty()) {
    auto os = open_output(cfg.jumps_path);
    os << "seed,jump_index,time\n";
    for (const auto& rec : records) {
      for (std::size_t i = 0; i < rec.jump_times.size(); ++i) {
        os << rec.seed << "," << i << "," << g17(rec.jump_times[i]) << "\n";
      }
    }
  }
  CountHistogram h = histogram_counts(records);
  std::cout << "traj-run: " << h.shots << " shots, mean count = "
            << g17([&] {
                 double m = 0.0;
                 for (const auto& [n, c] : h.bins) m += double(n) * double(c);
                 return m / double(h.shots);
               }())
            << "\n";
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    if (config.output_path.empty()) {
      throw ValidationError("an output path is required (--out)");
    }
    if (config.command == "fisher-scan") return run_fisher_scan(config);
    if (config.command == "fisher-scaling") return run_fisher_scaling(config);
    if (config.command == "markov-test") return run_markov_test(config);
    if (config.command == "atom-stats") return run_atom_stats(config);
    if (config.command == "atom-uncertainty") {
      return run_atom_uncertainty(config);
    }
    if (config.command == "traj-run") return run_traj(config);
    throw ValidationError("unknown command \"" + config.command + "\"");
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace jumpmet::cli
