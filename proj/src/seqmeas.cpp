#include "jumpmet/seqmeas.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "jumpmet/io.hpp"

namespace jumpmet {

namespace {
constexpr double kNegativeClamp = -1e-14;
constexpr double kConditionFloor = 1e-12;

double clamp_prob(double p) {
  if (p < 0.0) {
    if (p < kNegativeClamp) {
      std::ostringstream os;
      os << "sequence probability " << p << " below rounding clamp";
      throw ValidationError(os.str());
    }
    return 0.0;
  }
  return p;
}
}  // namespace

double SequenceDistribution::prob(const OutcomeString& x) const {
  return probs.at(index_of(x));
}

std::size_t SequenceDistribution::index_of(const OutcomeString& x) {
  std::size_t idx = 0;
  for (int bit : x) idx = (idx << 1) | static_cast<std::size_t>(bit & 1);
  return idx;
}

OutcomeString SequenceDistribution::string_at(std::size_t index, int n_steps) {
  OutcomeString x(n_steps);
  for (int i = n_steps - 1; i >= 0; --i) {
    x[i] = static_cast<int>(index & 1);
    index >>= 1;
  }
  return x;
}

std::string SequenceDistribution::bits_text(std::size_t index, int n_steps) {
  std::string s(n_steps, '0');
  for (int i = n_steps - 1; i >= 0; --i) {
    s[i] = (index & 1) ? '1' : '0';
    index >>= 1;
  }
  return s;
}

double sequence_probability(const KrausSet& k, const DensityMatrix& rho0,
                            const OutcomeString& x) {
  Mat b = rho0.matrix();
  for (int label : x) {
    const Mat& kx = k.matrix(label);
    b = kx * b * kx.adjoint();
  }
  return clamp_prob(b.trace().real());
}

namespace {

void enumerate_rec(const KrausSet& k, const Mat& b, int depth, int n,
                   std::size_t idx, std::vector<double>& out) {
  if (depth == n) {
    out[idx] = clamp_prob(b.trace().real());
    return;
  }
  for (const auto& o : k.outcomes) {
    enumerate_rec(k, o.matrix * b * o.matrix.adjoint(), depth + 1, n,
                  (idx << 1) | static_cast<std::size_t>(o.label & 1), out);
  }
}

}  // namespace

SequenceDistribution enumerate_distribution(const KrausSet& k,
                                            const DensityMatrix& rho0, int n) {
  if (n < 0) throw ValidationError("step count must be >= 0");
  if (n > kMaxEnumerationSteps) {
    std::ostringstream os;
    os << "enumeration of " << n << " steps exceeds the cap of "
       << kMaxEnumerationSteps
       << "; use the trajectory sampler for longer sequences";
    throw CapacityError(os.str());
  }
  SequenceDistribution d;
  d.n_steps = n;
  d.probs.assign(std::size_t{1} << n, 0.0);
  enumerate_rec(k, rho0.matrix(), 0, n, 0, d.probs);
  return d;
}

DensityMatrix ensemble_step(const KrausSet& k, const DensityMatrix& rho) {
  int d = rho.dim();
  Mat sum = Mat::Zero(d, d);
  for (const auto& o : k.outcomes) {
    sum += o.matrix * rho.matrix() * o.matrix.adjoint();
  }
  if (completeness_defect(k) > 1e-12) {
    sum /= sum.trace().real();
  }
  return DensityMatrix(std::move(sum));
}

MarkovGapResult markov_gap(const KrausSet& k, const DensityMatrix& rho0) {
  SequenceDistribution d3 = enumerate_distribution(k, rho0, 3);
  SequenceDistribution d2 = enumerate_distribution(k, rho0, 2);

  // One-step conditionals from the averaged state, Markov-chain style.
  DensityMatrix avg = ensemble_step(k, rho0);
  double denom2[2];
  double cond2[2][2];  // cond2[x2][x3] = P(x3 | x2)
  for (int x2 = 0; x2 < 2; ++x2) {
    auto [m2, p2] = apply_outcome(k, x2, avg);
    denom2[x2] = p2;
    for (int x3 = 0; x3 < 2; ++x3) {
      const Mat& k3 = k.matrix(x3);
      double num = (k3 * m2 * k3.adjoint()).trace().real();
      cond2[x2][x3] = p2 >= kConditionFloor ? num / p2 : 0.0;
    }
  }

  MarkovGapResult result;
  bool any = false;
  for (std::size_t pre = 0; pre < 4; ++pre) {
    int x1 = static_cast<int>(pre >> 1);
    int x2 = static_cast<int>(pre & 1);
    double p_pre = d2.probs[pre];
    if (p_pre < kConditionFloor || denom2[x2] < kConditionFloor) {
      result.skipped.push_back({x1, x2});
      continue;
    }
    any = true;
    for (int x3 = 0; x3 < 2; ++x3) {
      double c1 = d3.probs[(pre << 1) | static_cast<std::size_t>(x3)] / p_pre;
      double diff = std::abs(c1 - cond2[x2][x3]);
      if (diff > result.gap) result.gap = diff;
    }
  }
  if (!any) {
    throw ValidationError(
        "degenerate model: every conditioning history is below the "
        "probability floor");
  }
  return result;
}

void write_distribution_csv(std::ostream& os, const SequenceDistribution& d) {
  os << "bits,probability\n";
  for (std::size_t i = 0; i < d.probs.size(); ++i) {
    os << SequenceDistribution::bits_text(i, d.n_steps) << ","
       << g17(d.probs[i]) << "\n";
  }
}

}  // namespace jumpmet
