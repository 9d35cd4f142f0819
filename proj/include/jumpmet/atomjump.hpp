#ifndef JUMPMET_ATOMJUMP_HPP
#define JUMPMET_ATOMJUMP_HPP

#include <vector>

#include "jumpmet/errors.hpp"

namespace jumpmet {

// Feedback-driven two-level atom observed over (0, T). The atom starts in
// the reset state cos(phi)|0> - i sin(phi)|1> and is pushed back into it
// after every photon detection.
struct AtomParams {
  double gamma = 1.0;   // spontaneous emission rate
  double phi = 0.0;     // feedback rotation angle, in [0, pi]
  double t_obs = 0.0;   // observation time T
  int n_max = 2000;     // photon-number truncation

  void validate() const;  // ValidationError naming the offending field
};

struct PhotonStatistics {
  std::vector<double> p;        // p_0 .. p_{n_max}
  double nbar = 0.0;
  double variance = 0.0;
  double truncation_mass = 0.0;  // 1 - sum p_n
};

// cos^2(phi) + e^{-Gamma T} sin^2(phi).
double no_emission_probability(const AtomParams& params);

// Density for the first photon at time t: Gamma sin^2(phi) e^{-Gamma t}.
double first_emission_density(double t, const AtomParams& params);

// Exact-n photon probability. Evaluated through the Poisson-weight
// recurrence t_m = e^{-GT} (GT)^m / m!, which is overflow-free up to large
// n and algebraically identical to the closed form with the incomplete
// gamma function.
double photon_number_probability(int n, const AtomParams& params);

// Full truncated array with mean and variance. TruncationError when more
// than 1e-3 of the probability mass is lost to the cutoff.
PhotonStatistics photon_statistics(const AtomParams& params);

// Error-propagated phase uncertainty (Delta phi)^2 = Var(N) / (dNbar/dphi)^2
// with a central-difference derivative. DomainError where the derivative
// vanishes (e.g. phi = 0).
double phase_uncertainty(const AtomParams& params, double dphi = 1e-5);

}  // namespace jumpmet

#endif
