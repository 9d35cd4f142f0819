#include "jumpmet/fisher.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "jumpmet/seqmeas.hpp"

namespace jumpmet {

namespace {

constexpr double kProbFloor = 1e-12;
// Difference quotients smaller than this fraction of P are rounding noise.
constexpr double kDerivFloor = 1e-9;

std::vector<double> probs_at(const ModelSpec& spec, const DensityMatrix& rho0,
                             int n, double phi) {
  KrausSet k = build_model(spec.with_phi(phi));
  return enumerate_distribution(k, rho0, n).probs;
}

}  // namespace

double fisher_information(const ModelSpec& spec, const DensityMatrix& rho0,
                          int n, double dphi) {
  if (!(dphi > 0.0)) throw ValidationError("dphi must be > 0");
  if (!(spec.phi - dphi > 0.0 && spec.phi + dphi < std::numbers::pi)) {
    std::ostringstream os;
    os << "phi stencil [" << spec.phi - dphi << ", " << spec.phi + dphi
       << "] leaves the open interval (0, pi)";
    throw DomainError(os.str());
  }

  std::vector<double> pc = probs_at(spec, rho0, n, spec.phi);
  std::vector<double> pp = probs_at(spec, rho0, n, spec.phi + dphi);
  std::vector<double> pm = probs_at(spec, rho0, n, spec.phi - dphi);
  std::vector<double> pp2, pm2;  // half-step stencil, built on demand

  double f = 0.0;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    double p = pc[i];
    double d = (pp[i] - pm[i]) / (2.0 * dphi);
    if (p >= kProbFloor) {
      f += d * d / p;
      continue;
    }
    if (p <= 0.0 || std::abs(d) < kDerivFloor * p) continue;
    if (pp2.empty()) {
      pp2 = probs_at(spec, rho0, n, spec.phi + dphi / 2.0);
      pm2 = probs_at(spec, rho0, n, spec.phi - dphi / 2.0);
    }
    double d_half = (pp2[i] - pm2[i]) / dphi;
    double d_refined = (4.0 * d_half - d) / 3.0;
    f += d_refined * d_refined / p;
  }
  return f;
}

double single_shot_fisher(const ModelSpec& spec, const DensityMatrix& rho0,
                          double dphi) {
  return fisher_information(spec, rho0, 1, dphi);
}

ScalingFit fit_quadratic_scaling(const FisherScan& scan) {
  const auto& pts = scan.points;
  if (pts.size() < 4) {
    throw ValidationError("scaling fit needs at least 4 points");
  }
  std::set<double> distinct;
  for (const auto& [n, f] : pts) distinct.insert(n);
  if (distinct.size() < 3) {
    throw ValidationError("scaling fit needs at least 3 distinct N values");
  }

  Eigen::MatrixXd design(pts.size(), 3);
  Eigen::VectorXd y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double n = pts[i].first;
    design(static_cast<Eigen::Index>(i), 0) = n * n;
    design(static_cast<Eigen::Index>(i), 1) = n;
    design(static_cast<Eigen::Index>(i), 2) = 1.0;
    y(static_cast<Eigen::Index>(i)) = pts[i].second;
  }
  Eigen::Vector3d coef = design.colPivHouseholderQr().solve(y);

  double mean = y.mean();
  double ss_tot = (y.array() - mean).square().sum();
  if (!(ss_tot > 0.0)) {
    throw ValidationError("Fisher values are constant over the scan; "
                          "r_squared is undefined");
  }
  double ss_res = (y - design * coef).squaredNorm();

  ScalingFit fit;
  fit.a = coef(0);
  fit.b = coef(1);
  fit.c = coef(2);
  fit.r_squared = 1.0 - ss_res / ss_tot;
  fit.n_min = static_cast<int>(std::lround(*distinct.begin()));
  fit.n_max = static_cast<int>(std::lround(*distinct.rbegin()));
  return fit;
}

double cramer_rao_bound(double f) {
  if (!(f > 0.0)) {
    throw DomainError("Fisher information must be > 0; the parameter is "
                      "unidentifiable");
  }
  return 1.0 / f;
}

}  // namespace jumpmet
