#ifndef JUMPMET_SEQMEAS_HPP
#define JUMPMET_SEQMEAS_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "jumpmet/qops.hpp"

namespace jumpmet {

// Outcome labels in measurement order, x1 first.
using OutcomeString = std::vector<int>;

// Hard cap on exact enumeration depth (2^24 branches).
inline constexpr int kMaxEnumerationSteps = 24;

// All 2^n outcome-string probabilities for an n-step measurement sequence.
// Strings are indexed with x1 as the most significant bit, so index order
// equals lexicographic string order.
struct SequenceDistribution {
  int n_steps = 0;
  std::vector<double> probs;

  double prob(const OutcomeString& x) const;
  static std::size_t index_of(const OutcomeString& x);
  static OutcomeString string_at(std::size_t index, int n_steps);
  static std::string bits_text(std::size_t index, int n_steps);
};

// tr(K_{xN}...K_{x1} rho K^dag_{x1}...K^dag_{xN}); the empty string gives 1.
double sequence_probability(const KrausSet& k, const DensityMatrix& rho0,
                            const OutcomeString& x);

// Depth-first branch propagation of unnormalized conditioned matrices.
// Probabilities are exact traces; tiny negatives (>= -1e-14) clamp to 0.
// CapacityError above kMaxEnumerationSteps (use the trajectory sampler).
SequenceDistribution enumerate_distribution(const KrausSet& k,
                                            const DensityMatrix& rho0, int n);

// One application of the averaged map T(rho) = sum_x Kx rho Kx^dag.
// Renormalized by its trace when the Kraus set carries a completeness
// defect (the discretized atom model).
DensityMatrix ensemble_step(const KrausSet& k, const DensityMatrix& rho);

struct MarkovGapResult {
  double gap = 0.0;
  // Conditioning strings whose probability fell below the 1e-12 floor.
  std::vector<OutcomeString> skipped;
};

// Max over (x1,x2,x3) of |P(x3|x2,x1) - P(x3|x2)|, with the one-step
// conditional built from the averaged map. ValidationError when every
// conditioning history is below the floor (degenerate model).
MarkovGapResult markov_gap(const KrausSet& k, const DensityMatrix& rho0);

// CSV dump, header "bits,probability", 17 significant digits.
void write_distribution_csv(std::ostream& os, const SequenceDistribution& d);

}  // namespace jumpmet

#endif
