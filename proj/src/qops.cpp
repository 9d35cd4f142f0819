#include "jumpmet/qops.hpp"

#include <cmath>
#include <sstream>

namespace jumpmet {

namespace {
constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = -1e-10;
constexpr double kCompletenessTol = 1e-12;
}  // namespace

Mat identity_matrix(int dim) { return Mat::Identity(dim, dim); }

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

double max_abs_entry(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_finite(const Mat& m, const std::string& what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw ValidationError(what + ": matrix must be square with dim >= 1");
  }
  if (!m.allFinite()) {
    throw ValidationError(what + ": entries must be finite");
  }
}

DensityMatrix::DensityMatrix(Mat m) : m_(std::move(m)) {
  require_finite(m_, "density matrix");
  double herm = max_abs_entry(m_ - m_.adjoint());
  if (herm > kHermTol) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (defect " << herm << ")";
    throw ValidationError(os.str());
  }
  double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "density matrix trace is " << tr << ", expected 1";
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Mat> es((m_ + m_.adjoint()) / 2.0);
  double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kPsdTol) {
    std::ostringstream os;
    os << "density matrix is not positive semidefinite (min eigenvalue "
       << min_eig << ")";
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(const Vec& psi) {
  double n2 = psi.squaredNorm();
  if (n2 <= 0.0) throw ValidationError("pure state must be nonzero");
  Vec u = psi / std::sqrt(n2);
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& populations) {
  int d = static_cast<int>(populations.size());
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = populations[i];
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(Mat::Identity(dim, dim) / double(dim));
}

int KrausSet::dim() const {
  if (outcomes.empty()) throw ValidationError("Kraus set has no outcomes");
  return static_cast<int>(outcomes.front().matrix.rows());
}

const Mat& KrausSet::matrix(int label) const {
  for (const auto& o : outcomes) {
    if (o.label == label) return o.matrix;
  }
  std::ostringstream os;
  os << "unknown outcome label " << label;
  throw ValidationError(os.str());
}

bool KrausSet::has_label(int label) const {
  for (const auto& o : outcomes) {
    if (o.label == label) return true;
  }
  return false;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::CommutingFlip: return "commuting-flip";
    case ModelKind::Reset: return "reset";
    case ModelKind::AtomFeedback: return "atom-feedback";
    case ModelKind::Custom: return "custom";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "commuting-flip") return ModelKind::CommutingFlip;
  if (name == "reset") return ModelKind::Reset;
  if (name == "atom-feedback") return ModelKind::AtomFeedback;
  if (name == "custom") return ModelKind::Custom;
  throw ValidationError("unknown model kind \"" + name + "\"");
}

double ModelSpec::param(const std::string& name, double fallback) const {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

ModelSpec ModelSpec::with_phi(double new_phi) const {
  ModelSpec s = *this;
  s.phi = new_phi;
  return s;
}

namespace {

void check_range(const std::string& name, double value, double lo, double hi) {
  if (!(value >= lo && value <= hi)) {
    std::ostringstream os;
    os << "parameter " << name << " = " << value << " out of range [" << lo
       << ", " << hi << "]";
    throw ValidationError(os.str());
  }
}

void check_positive(const std::string& name, double value) {
  if (!(value > 0.0)) {
    std::ostringstream os;
    os << "parameter " << name << " = " << value << " must be > 0";
    throw ValidationError(os.str());
  }
}

}  // namespace

KrausSet build_model(const ModelSpec& spec) {
  using std::cos;
  using std::sin;
  const std::complex<double> i1(0.0, 1.0);

  if (spec.kind != ModelKind::Custom && !spec.custom_matrices.empty()) {
    throw ValidationError("builtin model kinds forbid explicit matrices");
  }

  KrausSet k;
  k.phi = spec.phi;
  k.params = spec.params;

  switch (spec.kind) {
    case ModelKind::CommutingFlip: {
      k.outcomes.push_back({0, cos(spec.phi) * identity_matrix(2)});
      k.outcomes.push_back({1, sin(spec.phi) * pauli_x()});
      return k;
    }
    case ModelKind::Reset: {
      double A = spec.param("A", 1.0);
      check_range("A", A, 0.0, 1.0);
      double b = spec.param("b", 0.0);
      check_range("b", b, 0.0, 1.0);
      double s = std::sqrt(std::max(0.0, 1.0 - A * A));
      Mat k0(2, 2), k1(2, 2);
      k0 << 1, 0, 0, A;
      k1 << 0, cos(spec.phi) * s, 0, sin(spec.phi) * s;
      k.outcomes.push_back({0, k0});
      k.outcomes.push_back({1, k1});
      return k;
    }
    case ModelKind::AtomFeedback: {
      double gamma = spec.param("Gamma", 0.0);
      check_positive("Gamma", gamma);
      double dt = spec.param("dt", 0.0);
      check_positive("dt", dt);
      if (gamma * dt > 0.1) {
        std::ostringstream os;
        os << "parameter Gamma*dt = " << gamma * dt
           << " exceeds 0.1; first-order discretization is invalid";
        throw ValidationError(os.str());
      }
      Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
      k0(0, 0) = 1.0;
      k0(1, 1) = std::exp(-0.5 * gamma * dt);
      double r = std::sqrt(gamma * dt);
      k1(0, 1) = r * cos(spec.phi);
      k1(1, 1) = -i1 * (r * sin(spec.phi));
      k.outcomes.push_back({0, k0});
      k.outcomes.push_back({1, k1});
      return k;
    }
    case ModelKind::Custom: {
      if (spec.custom_matrices.empty()) {
        throw ValidationError("custom model requires explicit matrices");
      }
      int d = static_cast<int>(spec.custom_matrices.front().rows());
      int label = 0;
      for (const auto& m : spec.custom_matrices) {
        require_finite(m, "custom Kraus matrix");
        if (m.rows() != d) {
          throw ValidationError("custom Kraus matrices must share one dim");
        }
        k.outcomes.push_back({label++, m});
      }
      double defect = completeness_defect(k);
      if (defect > kCompletenessTol) {
        std::ostringstream os;
        os << "custom Kraus set fails completeness, defect " << defect;
        throw CompletenessError(os.str(), defect);
      }
      return k;
    }
  }
  throw ValidationError("unreachable model kind");
}

double completeness_defect(const KrausSet& k) {
  int d = k.dim();
  Mat sum = Mat::Zero(d, d);
  for (const auto& o : k.outcomes) {
    sum += o.matrix.adjoint() * o.matrix;
  }
  return max_abs_entry(sum - identity_matrix(d));
}

double commutator_norm(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("commutator_norm: dimension mismatch");
  }
  return max_abs_entry(a * b - b * a);
}

std::pair<Mat, double> apply_outcome(const KrausSet& k, int label,
                                     const DensityMatrix& rho) {
  const Mat& kx = k.matrix(label);
  if (kx.cols() != rho.dim()) {
    throw ValidationError("apply_outcome: state dim does not match Kraus dim");
  }
  Mat out = kx * rho.matrix() * kx.adjoint();
  double p = out.trace().real();
  if (p < 0.0 && p > -1e-12) p = 0.0;
  if (p < 0.0 || p > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "outcome probability " << p << " outside [0, 1]";
    throw ValidationError(os.str());
  }
  return {std::move(out), p};
}

DensityMatrix default_initial_state(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::Reset: {
      double b = spec.param("b", 0.0);
      check_range("b", b, 0.0, 1.0);
      return DensityMatrix::diagonal({b, 1.0 - b});
    }
    case ModelKind::CommutingFlip:
    case ModelKind::AtomFeedback:
      return DensityMatrix::diagonal({1.0, 0.0});
    case ModelKind::Custom: {
      if (spec.custom_matrices.empty()) {
        throw ValidationError("custom model requires explicit matrices");
      }
      return DensityMatrix::maximally_mixed(
          static_cast<int>(spec.custom_matrices.front().rows()));
    }
  }
  throw ValidationError("unreachable model kind");
}

}  // namespace jumpmet
