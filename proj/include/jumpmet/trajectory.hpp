#ifndef JUMPMET_TRAJECTORY_HPP
#define JUMPMET_TRAJECTORY_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "jumpmet/atomjump.hpp"
#include "jumpmet/qops.hpp"

namespace jumpmet {

// All stochastic draws come from SplitMix64 streams. A batch with master
// seed S gives trajectory i the stream seeded by
// mix64(S + (i+1) * 0x9E3779B97F4A7C15), where mix64 is the SplitMix64
// finalizer, so records are reproducible bit-for-bit regardless of how the
// batch is scheduled across threads.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index);

// Worker count for batch runs: explicit request, else the JUMPMET_THREADS
// environment variable, else hardware concurrency. 0 means auto.
int worker_count(int requested = 0);

struct TrajectoryRecord {
  std::uint64_t seed = 0;          // stream seed of this trajectory
  std::vector<int> outcomes;       // discrete Kraus-chain mode
  std::vector<double> jump_times;  // continuous atom mode, step midpoints
  Vec final_state;                 // normalized pure state
  int n_photons = 0;               // count of outcome-1 events / jumps
};

struct CountHistogram {
  long shots = 0;
  std::map<int, long> bins;

  std::map<int, double> empirical_p() const;
};

// One n-step run of the Kraus instrument. At each step the outcome is
// drawn with probability tr(Kx rho Kx^dag) of the normalized conditioned
// state; trajectories stay pure, so a mixed initial state is handled by
// drawing one of its eigenvectors first.
TrajectoryRecord simulate_kraus_chain(const KrausSet& k,
                                      const DensityMatrix& rho0, int n,
                                      std::uint64_t seed);

// Quantum-jump run of the discretized atom model with per-step jump
// probability tr(K1 rho K1^dag). Jump times land on step midpoints
// (i + 0.5) * dt; every jump resets the state to cos|0> - i sin|1>.
// ValidationError when Gamma * dt > 1e-2.
TrajectoryRecord simulate_atom_trajectory(const AtomParams& params, double dt,
                                          std::uint64_t seed);

// ValidationError on an empty record list.
CountHistogram histogram_counts(const std::vector<TrajectoryRecord>& records);

// Parallel batches; the result is identical to running the seeds
// sequentially.
std::vector<TrajectoryRecord> simulate_chain_batch(const KrausSet& k,
                                                   const DensityMatrix& rho0,
                                                   int n,
                                                   std::uint64_t master_seed,
                                                   long shots, int threads = 0);
std::vector<TrajectoryRecord> simulate_atom_batch(const AtomParams& params,
                                                  double dt,
                                                  std::uint64_t master_seed,
                                                  long shots, int threads = 0);

}  // namespace jumpmet

#endif
