#ifndef JUMPMET_FISHER_HPP
#define JUMPMET_FISHER_HPP

#include <utility>
#include <vector>

#include "jumpmet/qops.hpp"

namespace jumpmet {

inline constexpr double kDefaultDphi = 1e-5;

enum class ScanAxis { Phi, NSteps };

struct FisherScan {
  ScanAxis axis = ScanAxis::NSteps;
  std::vector<std::pair<double, double>> points;  // (axis value, F)
  ModelSpec model;
  double derivative_step = kDefaultDphi;
};

struct ScalingFit {
  double a = 0.0, b = 0.0, c = 0.0;  // F(N) ~ a N^2 + b N + c
  double r_squared = 0.0;
  int n_min = 0, n_max = 0;
};

// Classical Fisher information F = sum_x [d_phi P(x)]^2 / P(x) of the
// n-step sequence distribution, with the derivative taken by central
// difference at step dphi. Terms whose probability is below 1e-12 are
// dropped when the difference quotient sits at the rounding floor
// (|dP| < 1e-9 * P) and otherwise get one Richardson refinement of the
// derivative. DomainError when the phi stencil leaves (0, pi).
double fisher_information(const ModelSpec& spec, const DensityMatrix& rho0,
                          int n, double dphi = kDefaultDphi);

// Fisher information of the single-step two-outcome distribution.
double single_shot_fisher(const ModelSpec& spec, const DensityMatrix& rho0,
                          double dphi = kDefaultDphi);

// Ordinary least squares of F against (N^2, N, 1). Needs >= 4 points over
// >= 3 distinct N.
ScalingFit fit_quadratic_scaling(const FisherScan& scan);

// Cramer-Rao lower bound 1/F. DomainError for F <= 0.
double cramer_rao_bound(double f);

}  // namespace jumpmet

#endif
