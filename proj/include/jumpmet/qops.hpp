#ifndef JUMPMET_QOPS_HPP
#define JUMPMET_QOPS_HPP

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jumpmet/errors.hpp"

namespace jumpmet {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

Mat identity_matrix(int dim);
Mat pauli_x();

// Largest |entry| of a matrix.
double max_abs_entry(const Mat& m);

// Throws ValidationError on NaN/Inf entries or dim < 1.
void require_finite(const Mat& m, const std::string& what);

// A physical state: Hermitian (1e-12), unit trace (1e-12), positive
// semidefinite (min eigenvalue >= -1e-10). Violations are errors, never
// repaired.
class DensityMatrix {
public:
  explicit DensityMatrix(Mat m);

  static DensityMatrix pure(const Vec& psi);
  // diag(populations), populations summing to 1.
  static DensityMatrix diagonal(const std::vector<double>& populations);
  static DensityMatrix maximally_mixed(int dim);

  const Mat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

private:
  Mat m_;
};

struct KrausOutcome {
  int label;
  Mat matrix;
};

// Ordered Kraus instrument. Exact builders satisfy the completeness
// relation to 1e-12; the time-discretized atom model carries an O((G dt)^2)
// defect bounded by 10*(G dt)^2.
struct KrausSet {
  std::vector<KrausOutcome> outcomes;
  double phi = 0.0;
  std::map<std::string, double> params;

  int dim() const;
  const Mat& matrix(int label) const;  // ValidationError on unknown label
  bool has_label(int label) const;
};

enum class ModelKind { CommutingFlip, Reset, AtomFeedback, Custom };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct ModelSpec {
  ModelKind kind = ModelKind::CommutingFlip;
  double phi = 0.0;
  std::map<std::string, double> params;      // A, b, Gamma, dt as applicable
  std::vector<Mat> custom_matrices;          // Custom kind only

  double param(const std::string& name, double fallback) const;
  ModelSpec with_phi(double new_phi) const;
};

// Builds the two-outcome Kraus set for the requested model.
//   commuting-flip: K0 = cos(phi) 1, K1 = sin(phi) sigma_x
//   reset:          K0 = diag(1, A), K1 = sqrt(1-A^2) (cos, sin) column on |1>
//   atom-feedback:  K0 = |0><0| + e^{-G dt/2} |1><1|,
//                   K1 = sqrt(G dt) [cos |0><1| - i sin |1><1|]
// Custom matrices must pass the completeness check at 1e-12.
KrausSet build_model(const ModelSpec& spec);

// Max-abs-entry of sum_x Kx^dag Kx - 1.
double completeness_defect(const KrausSet& k);

// Max-abs-entry of ab - ba. ValidationError on dimension mismatch.
double commutator_norm(const Mat& a, const Mat& b);

// Kx rho Kx^dag (unnormalized) and its trace. The trace is clamped to
// [0, 1 + 1e-12]; tiny negative rounding is zeroed.
std::pair<Mat, double> apply_outcome(const KrausSet& k, int label,
                                     const DensityMatrix& rho);

// The initial state each builtin model is analysed with: diag(b, 1-b) for
// the reset model, |0><0| for commuting-flip and atom-feedback, maximally
// mixed for custom models.
DensityMatrix default_initial_state(const ModelSpec& spec);

}  // namespace jumpmet

#endif
