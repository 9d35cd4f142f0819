#include "jumpmet/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace jumpmet {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t SplitMix64::next() {
  state += 0x9E3779B97F4A7C15ull;
  return mix64(state);
}

double SplitMix64::uniform() {
  return double(next() >> 11) * 0x1.0p-53;
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ull);
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("JUMPMET_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::map<int, double> CountHistogram::empirical_p() const {
  std::map<int, double> p;
  for (const auto& [n, count] : bins) {
    p[n] = double(count) / double(shots);
  }
  return p;
}

TrajectoryRecord simulate_kraus_chain(const KrausSet& k,
                                      const DensityMatrix& rho0, int n,
                                      std::uint64_t seed) {
  if (n < 0) throw ValidationError("step count must be >= 0");
  SplitMix64 rng(seed);

  // Trajectories stay pure; a mixed initial state contributes through one
  // draw over its eigenvectors.
  Eigen::SelfAdjointEigenSolver<Mat> es(rho0.matrix());
  Vec psi;
  {
    double u = rng.uniform();
    double cum = 0.0;
    Eigen::Index pick = es.eigenvalues().size() - 1;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      cum += std::max(0.0, es.eigenvalues()(i));
      if (u < cum) {
        pick = i;
        break;
      }
    }
    psi = es.eigenvectors().col(pick);
  }

  TrajectoryRecord rec;
  rec.seed = seed;
  rec.outcomes.reserve(static_cast<std::size_t>(n));

  std::vector<Vec> branches(k.outcomes.size());
  std::vector<double> weights(k.outcomes.size());
  for (int step = 0; step < n; ++step) {
    double total = 0.0;
    for (std::size_t x = 0; x < k.outcomes.size(); ++x) {
      branches[x] = k.outcomes[x].matrix * psi;
      weights[x] = branches[x].squaredNorm();
      total += weights[x];
    }
    double u = rng.uniform() * total;
    std::size_t pick = k.outcomes.size() - 1;
    double cum = 0.0;
    for (std::size_t x = 0; x < k.outcomes.size(); ++x) {
      cum += weights[x];
      if (u < cum) {
        pick = x;
        break;
      }
    }
    int label = k.outcomes[pick].label;
    rec.outcomes.push_back(label);
    if (label == 1) ++rec.n_photons;
    psi = branches[pick] / std::sqrt(weights[pick]);
  }
  rec.final_state = psi;
  return rec;
}

namespace {

// Survival table of the no-jump process, indexed by steps since the last
// reset: survival[m] = prob of no jump for m consecutive steps.
std::vector<double> atom_survival_table(const AtomParams& params, double dt,
                                        long n_steps) {
  double gdt = params.gamma * dt;
  double s2 = std::sin(params.phi) * std::sin(params.phi);
  double c2 = std::cos(params.phi) * std::cos(params.phi);
  std::vector<double> survival(static_cast<std::size_t>(n_steps) + 1);
  survival[0] = 1.0;
  double decay = 1.0;  // e^{-m Gamma dt}
  for (long m = 0; m < n_steps; ++m) {
    double p_jump = gdt * s2 * decay / (c2 + s2 * decay);
    survival[static_cast<std::size_t>(m) + 1] =
        survival[static_cast<std::size_t>(m)] * (1.0 - p_jump);
    decay *= std::exp(-gdt);
  }
  return survival;
}

TrajectoryRecord atom_trajectory_from_table(
    const AtomParams& params, double dt, long n_steps,
    const std::vector<double>& survival, std::uint64_t seed) {
  SplitMix64 rng(seed);
  TrajectoryRecord rec;
  rec.seed = seed;

  long pos = 0;  // absolute step index
  long since_reset = n_steps;
  while (pos < n_steps) {
    long remaining = n_steps - pos;
    double u = rng.uniform();
    if (u < survival[static_cast<std::size_t>(remaining)]) {
      since_reset = remaining;
      break;
    }
    // Invert the survival CDF: jump at the relative step j with
    // survival[j+1] <= u < survival[j]. One draw per inter-jump interval
    // is distributed identically to per-step Bernoulli draws.
    long lo = 0, hi = remaining;  // survival[lo] > u >= survival[hi]
    while (hi - lo > 1) {
      long mid = (lo + hi) / 2;
      if (u < survival[static_cast<std::size_t>(mid)]) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    long j = lo;  // zero-based no-jump steps before this jump
    rec.jump_times.push_back((double(pos + j) + 0.5) * dt);
    ++rec.n_photons;
    pos += j + 1;
    since_reset = 0;
  }

  double c = std::cos(params.phi), s = std::sin(params.phi);
  Vec psi(2);
  psi << c, std::complex<double>(0.0, -1.0) * s *
               std::exp(-0.5 * params.gamma * dt * double(since_reset));
  rec.final_state = psi / psi.norm();
  return rec;
}

}  // namespace

TrajectoryRecord simulate_atom_trajectory(const AtomParams& params, double dt,
                                          std::uint64_t seed) {
  params.validate();
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (params.gamma * dt > 1e-2) {
    std::ostringstream os;
    os << "Gamma*dt = " << params.gamma * dt
       << " exceeds 1e-2; the first-order step is invalid";
    throw ValidationError(os.str());
  }
  long n_steps = std::lround(params.t_obs / dt);
  auto survival = atom_survival_table(params, dt, n_steps);
  return atom_trajectory_from_table(params, dt, n_steps, survival, seed);
}

CountHistogram histogram_counts(const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) {
    throw ValidationError("histogram needs at least one record");
  }
  CountHistogram h;
  h.shots = static_cast<long>(records.size());
  for (const auto& rec : records) {
    ++h.bins[rec.n_photons];
  }
  return h;
}

namespace {

template <typename PerIndex>
void run_batch(long shots, int threads, PerIndex&& body) {
  int workers = std::min<long>(worker_count(threads), std::max(1L, shots));
  if (workers <= 1) {
    for (long i = 0; i < shots; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (long i = w; i < shots; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<TrajectoryRecord> simulate_chain_batch(const KrausSet& k,
                                                   const DensityMatrix& rho0,
                                                   int n,
                                                   std::uint64_t master_seed,
                                                   long shots, int threads) {
  std::vector<TrajectoryRecord> records(static_cast<std::size_t>(shots));
  run_batch(shots, threads, [&](long i) {
    records[static_cast<std::size_t>(i)] = simulate_kraus_chain(
        k, rho0, n, stream_seed(master_seed, static_cast<std::uint64_t>(i)));
  });
  return records;
}

std::vector<TrajectoryRecord> simulate_atom_batch(const AtomParams& params,
                                                  double dt,
                                                  std::uint64_t master_seed,
                                                  long shots, int threads) {
  params.validate();
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (params.gamma * dt > 1e-2) {
    throw ValidationError("Gamma*dt exceeds 1e-2");
  }
  long n_steps = std::lround(params.t_obs / dt);
  auto survival = atom_survival_table(params, dt, n_steps);
  std::vector<TrajectoryRecord> records(static_cast<std::size_t>(shots));
  run_batch(shots, threads, [&](long i) {
    records[static_cast<std::size_t>(i)] = atom_trajectory_from_table(
        params, dt, n_steps, survival,
        stream_seed(master_seed, static_cast<std::uint64_t>(i)));
  });
  return records;
}

}  // namespace jumpmet
