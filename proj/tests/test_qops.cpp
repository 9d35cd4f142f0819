#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "jumpmet/qops.hpp"
#include "oracles.hpp"

using namespace jumpmet;
using std::numbers::pi;

namespace {

ModelSpec reset_spec(double phi, double A, double b) {
  ModelSpec s;
  s.kind = ModelKind::Reset;
  s.phi = phi;
  s.params = {{"A", A}, {"b", b}};
  return s;
}

ModelSpec atom_spec(double phi, double gamma, double dt) {
  ModelSpec s;
  s.kind = ModelKind::AtomFeedback;
  s.phi = phi;
  s.params = {{"Gamma", gamma}, {"dt", dt}};
  return s;
}

// Random mixed qubit state, reproducible.
DensityMatrix random_state(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat g(2, 2);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) g(r, c) = std::complex<double>(u(gen), u(gen));
  }
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

}  // namespace

TEST_CASE("commuting-flip builder matches the printed operators") {
  ModelSpec s;
  s.kind = ModelKind::CommutingFlip;
  s.phi = pi / 4;
  KrausSet k = build_model(s);
  double r = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_entry(k.matrix(0) - r * identity_matrix(2)) < 1e-15);
  CHECK(max_abs_entry(k.matrix(1) - r * pauli_x()) < 1e-15);
}

TEST_CASE("commuting-flip operators are Hermitian") {
  for (double phi : {0.3, 0.7, 1.1, 2.9}) {
    KrausSet k = build_model(ModelSpec{ModelKind::CommutingFlip, phi, {}, {}});
    CHECK(max_abs_entry(k.matrix(0) - k.matrix(0).adjoint()) < 1e-15);
    CHECK(max_abs_entry(k.matrix(1) - k.matrix(1).adjoint()) < 1e-15);
  }
}

TEST_CASE("reset builder at A=1 never fires") {
  KrausSet k = build_model(reset_spec(1.234, 1.0, 0.3));
  CHECK(max_abs_entry(k.matrix(1)) == 0.0);
  CHECK(max_abs_entry(k.matrix(0) - identity_matrix(2)) < 1e-15);
}

TEST_CASE("atom-feedback builder matches the printed operators") {
  KrausSet k = build_model(atom_spec(0.3, 1.0, 1e-3));
  CHECK(k.matrix(0)(0, 0) == std::complex<double>(1.0, 0.0));
  CHECK(k.matrix(0)(1, 1).real() == doctest::Approx(std::exp(-5e-4)).epsilon(1e-15));
  CHECK(std::abs(k.matrix(0)(0, 1)) == 0.0);
  double r = std::sqrt(1e-3);
  CHECK(std::abs(k.matrix(1)(0, 1) - r * std::cos(0.3)) < 1e-15);
  CHECK(std::abs(k.matrix(1)(1, 1) -
                 std::complex<double>(0.0, -r * std::sin(0.3))) < 1e-15);
  CHECK(std::abs(k.matrix(1)(0, 0)) == 0.0);
  CHECK(std::abs(k.matrix(1)(1, 0)) == 0.0);
}

TEST_CASE("builder rejects out-of-range parameters by name") {
  CHECK_THROWS_WITH_AS(build_model(reset_spec(0.1, 1.2, 0.0)),
                       doctest::Contains("A"), ValidationError);
  CHECK_THROWS_WITH_AS(build_model(reset_spec(0.1, 0.5, -0.1)),
                       doctest::Contains("b"), ValidationError);
  CHECK_THROWS_WITH_AS(build_model(atom_spec(0.1, -1.0, 1e-3)),
                       doctest::Contains("Gamma"), ValidationError);
  CHECK_THROWS_WITH_AS(build_model(atom_spec(0.1, 1.0, 0.5)),
                       doctest::Contains("Gamma*dt"), ValidationError);
}

TEST_CASE("custom models require matrices and builtins forbid them") {
  ModelSpec s;
  s.kind = ModelKind::Custom;
  CHECK_THROWS_AS(build_model(s), ValidationError);

  ModelSpec t;
  t.kind = ModelKind::CommutingFlip;
  t.phi = 0.2;
  t.custom_matrices.push_back(identity_matrix(2));
  CHECK_THROWS_AS(build_model(t), ValidationError);
}

TEST_CASE("custom model failing completeness reports the defect") {
  ModelSpec s;
  s.kind = ModelKind::Custom;
  s.custom_matrices.push_back(0.5 * identity_matrix(2));
  try {
    build_model(s);
    FAIL("expected CompletenessError");
  } catch (const CompletenessError& e) {
    CHECK(e.defect() == doctest::Approx(0.75).epsilon(1e-14));
  }
}

TEST_CASE("completeness defect") {
  for (double phi : {0.1, 0.9, 2.2}) {
    KrausSet k = build_model(ModelSpec{ModelKind::CommutingFlip, phi, {}, {}});
    CHECK(completeness_defect(k) < 1e-15);
  }

  KrausSet ident{{{0, identity_matrix(2)}}, 0.0, {}};
  CHECK(completeness_defect(ident) == 0.0);

  KrausSet half{{{0, 0.5 * identity_matrix(2)}}, 0.0, {}};
  CHECK(completeness_defect(half) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("atom-feedback completeness defect is bounded by 10 (G dt)^2") {
  for (double gdt : {1e-3, 1e-2, 0.1}) {
    KrausSet k = build_model(atom_spec(0.7, 1.0, gdt));
    double defect = completeness_defect(k);
    CHECK(defect > 0.0);
    CHECK(defect <= 10.0 * gdt * gdt);
  }
}

TEST_CASE("commutator norm") {
  KrausSet k = build_model(ModelSpec{ModelKind::CommutingFlip, 0.7, {}, {}});
  CHECK(commutator_norm(k.matrix(0), k.matrix(1)) < 1e-15);
  CHECK(commutator_norm(k.matrix(1), k.matrix(1)) == 0.0);
  CHECK_THROWS_AS(commutator_norm(identity_matrix(2), identity_matrix(3)),
                  ValidationError);
}

TEST_CASE("reset-model commutator against plain 2x2 arithmetic") {
  double A = 0.9, phi = pi / 4;
  double s = std::sqrt(1.0 - A * A);
  oracle::M2 k0{1.0, 0.0, 0.0, A};
  oracle::M2 k1{0.0, std::cos(phi) * s, 0.0, std::sin(phi) * s};
  double expected = oracle::max_abs(
      oracle::sub(oracle::mul(k0, k1), oracle::mul(k1, k0)));
  CHECK(expected > 0.0);

  KrausSet k = build_model(reset_spec(phi, A, 0.1));
  CHECK(commutator_norm(k.matrix(0), k.matrix(1)) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("apply_outcome basics") {
  std::mt19937_64 gen(11);
  KrausSet flip = build_model(ModelSpec{ModelKind::CommutingFlip, 0.8, {}, {}});
  for (int rep = 0; rep < 20; ++rep) {
    DensityMatrix rho = random_state(gen);
    auto [m, p] = apply_outcome(flip, 0, rho);
    CHECK(p == doctest::Approx(std::cos(0.8) * std::cos(0.8)).epsilon(1e-12));
  }

  KrausSet ident{{{0, identity_matrix(2)}}, 0.0, {}};
  DensityMatrix rho = random_state(gen);
  auto [m, p] = apply_outcome(ident, 0, rho);
  CHECK(p == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs_entry(m - rho.matrix()) < 1e-15);

  KrausSet reset = build_model(reset_spec(0.6, 0.9, 0.1));
  DensityMatrix ground = DensityMatrix::diagonal({1.0, 0.0});
  CHECK(apply_outcome(reset, 1, ground).second == 0.0);

  CHECK_THROWS_AS(apply_outcome(reset, 7, ground), ValidationError);
}

TEST_CASE("outcome probabilities sum to one for every builtin") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> uphi(0.05, pi - 0.05);
  for (int rep = 0; rep < 30; ++rep) {
    DensityMatrix rho = random_state(gen);
    double phi = uphi(gen);

    for (const ModelSpec& s :
         {ModelSpec{ModelKind::CommutingFlip, phi, {}, {}},
          reset_spec(phi, 0.8, 0.2)}) {
      KrausSet k = build_model(s);
      double total = apply_outcome(k, 0, rho).second +
                     apply_outcome(k, 1, rho).second;
      CHECK(std::abs(total - 1.0) < 1e-10);
    }

    double gdt = 1e-3;
    KrausSet atom = build_model(atom_spec(phi, 1.0, gdt));
    double total = apply_outcome(atom, 0, rho).second +
                   apply_outcome(atom, 1, rho).second;
    CHECK(std::abs(total - 1.0) < 10.0 * gdt * gdt);
  }
}

TEST_CASE("density matrix invariants are enforced") {
  Mat bad_herm(2, 2);
  bad_herm << 0.5, std::complex<double>(0.1, 0.2), 0.3, 0.5;
  CHECK_THROWS_AS(DensityMatrix{bad_herm}, ValidationError);

  CHECK_THROWS_AS(DensityMatrix::diagonal({0.4, 0.4}), ValidationError);

  Mat neg(2, 2);
  neg << 1.1, 0.0, 0.0, -0.1;
  CHECK_THROWS_AS(DensityMatrix{neg}, ValidationError);

  Mat nan = Mat::Identity(2, 2);
  nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DensityMatrix{nan}, ValidationError);
}

TEST_CASE("default initial states") {
  DensityMatrix rho = default_initial_state(reset_spec(0.1, 0.9, 0.1));
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(0.1));
  CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.9));

  DensityMatrix ground =
      default_initial_state(ModelSpec{ModelKind::CommutingFlip, 0.3, {}, {}});
  CHECK(ground.matrix()(0, 0).real() == doctest::Approx(1.0));
}
