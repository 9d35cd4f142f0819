#include "jumpmet/atomjump.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace jumpmet {

namespace {

// Shared single pass over the t_m recurrence:
//   p_n = sin^{2n}(phi) * [t_n + cos^2(phi) * (1 - sum_{m<=n} t_m)]
// with t_m the Poisson weights at mean Gamma*T.
std::vector<double> photon_array(const AtomParams& params, int n_top) {
  double gt = params.gamma * params.t_obs;
  double s2 = std::sin(params.phi) * std::sin(params.phi);
  double c2 = std::cos(params.phi) * std::cos(params.phi);

  std::vector<double> p(static_cast<std::size_t>(n_top) + 1);
  double t = std::exp(-gt);   // t_0
  double tail = 1.0 - t;      // 1 - sum_{m<=n} t_m
  double sin2n = 1.0;         // sin^{2n}
  for (int n = 0; n <= n_top; ++n) {
    if (n > 0) {
      t *= gt / n;
      tail -= t;
      sin2n *= s2;
    }
    double v = sin2n * (t + c2 * tail);
    p[static_cast<std::size_t>(n)] = std::min(1.0, std::max(0.0, v));
  }
  return p;
}

PhotonStatistics statistics_unchecked(const AtomParams& params) {
  PhotonStatistics stats;
  stats.p = photon_array(params, params.n_max);
  double sum = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t n = 0; n < stats.p.size(); ++n) {
    double pn = stats.p[n];
    sum += pn;
    m1 += double(n) * pn;
    m2 += double(n) * double(n) * pn;
  }
  stats.nbar = m1;
  stats.variance = std::max(0.0, m2 - m1 * m1);
  stats.truncation_mass = 1.0 - sum;
  return stats;
}

}  // namespace

void AtomParams::validate() const {
  if (!(gamma > 0.0)) {
    throw ValidationError("gamma must be > 0");
  }
  if (!(t_obs >= 0.0)) {
    throw ValidationError("t_obs must be >= 0");
  }
  if (n_max < 1) {
    throw ValidationError("n_max must be >= 1");
  }
  if (!(phi >= 0.0 && phi <= std::numbers::pi)) {
    throw ValidationError("phi must lie in [0, pi]");
  }
}

double no_emission_probability(const AtomParams& params) {
  params.validate();
  double s = std::sin(params.phi), c = std::cos(params.phi);
  return c * c + std::exp(-params.gamma * params.t_obs) * s * s;
}

double first_emission_density(double t, const AtomParams& params) {
  params.validate();
  if (t < 0.0) throw ValidationError("t must be >= 0");
  double s = std::sin(params.phi);
  return params.gamma * s * s * std::exp(-params.gamma * t);
}

double photon_number_probability(int n, const AtomParams& params) {
  params.validate();
  if (n < 0) throw ValidationError("photon count must be >= 0");
  return photon_array(params, n).back();
}

PhotonStatistics photon_statistics(const AtomParams& params) {
  params.validate();
  PhotonStatistics stats = statistics_unchecked(params);
  if (stats.truncation_mass > 1e-3) {
    std::ostringstream os;
    os << "truncation at n_max = " << params.n_max << " loses "
       << stats.truncation_mass
       << " probability mass; increase n_max";
    throw TruncationError(os.str(), stats.truncation_mass);
  }
  return stats;
}

double phase_uncertainty(const AtomParams& params, double dphi) {
  params.validate();
  if (!(dphi > 0.0)) throw ValidationError("dphi must be > 0");
  PhotonStatistics center = photon_statistics(params);

  // The shifted evaluations may step just outside [0, pi]; the closed
  // forms are even/periodic there, so skip the range check.
  AtomParams lo = params, hi = params;
  lo.phi -= dphi;
  hi.phi += dphi;
  double d = (statistics_unchecked(hi).nbar - statistics_unchecked(lo).nbar) /
             (2.0 * dphi);
  if (std::abs(d) <= 1e-12) {
    throw DomainError("dNbar/dphi vanishes here; phi is unidentifiable from "
                      "the mean photon number");
  }
  return center.variance / (d * d);
}

}  // namespace jumpmet
