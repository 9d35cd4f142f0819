#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "jumpmet/atomjump.hpp"
#include "oracles.hpp"

using namespace jumpmet;
using std::numbers::pi;

namespace {

AtomParams make(double gamma, double phi, double t_obs, int n_max = 2000) {
  AtomParams p;
  p.gamma = gamma;
  p.phi = phi;
  p.t_obs = t_obs;
  p.n_max = n_max;
  return p;
}

}  // namespace

TEST_CASE("parameter validation names the offending field") {
  CHECK_THROWS_WITH_AS(make(0.0, 0.3, 1.0).validate(),
                       doctest::Contains("gamma"), ValidationError);
  CHECK_THROWS_WITH_AS(make(1.0, -0.1, 1.0).validate(),
                       doctest::Contains("phi"), ValidationError);
  CHECK_THROWS_WITH_AS(make(1.0, pi + 0.1, 1.0).validate(),
                       doctest::Contains("phi"), ValidationError);
  CHECK_THROWS_WITH_AS(make(1.0, 0.3, -1.0).validate(),
                       doctest::Contains("t_obs"), ValidationError);
  CHECK_THROWS_WITH_AS(make(1.0, 0.3, 1.0, 0).validate(),
                       doctest::Contains("n_max"), ValidationError);
}

TEST_CASE("zero-count probability over the observation window") {
  CHECK(no_emission_probability(make(1.0, 0.0, 7.0)) == 1.0);
  CHECK(no_emission_probability(make(1.0, pi / 2, 1.0)) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  double phi = 0.9;
  CHECK(no_emission_probability(make(1.0, phi, 1e6)) ==
        doctest::Approx(std::cos(phi) * std::cos(phi)).epsilon(1e-12));
}

TEST_CASE("first-detection density and its total mass") {
  CHECK(first_emission_density(3.0, make(1.0, 0.0, 1.0)) == 0.0);
  CHECK(first_emission_density(0.0, make(2.0, pi / 2, 1.0)) ==
        doctest::Approx(2.0).epsilon(1e-14));

  AtomParams p = make(1.3, 0.8, 1.0);
  double mass = oracle::integrate(
      [&](double t) { return first_emission_density(t, p); }, 0.0, 60.0 / 1.3);
  CHECK(mass == doctest::Approx(std::sin(0.8) * std::sin(0.8)).epsilon(1e-10));
}

TEST_CASE("zero-count value agrees with the dedicated routine") {
  for (double gt : {0.5, 2.0, 20.0}) {
    for (double phi : {0.2, 1.0, 1.4}) {
      AtomParams p = make(1.0, phi, gt);
      CHECK(photon_number_probability(0, p) ==
            doctest::Approx(no_emission_probability(p)).epsilon(1e-15));
    }
  }
  CHECK_THROWS_AS(photon_number_probability(-1, make(1.0, 0.3, 1.0)),
                  ValidationError);
}

TEST_CASE("stationary-window counts follow a geometric law") {
  for (double phi : {0.3, 0.9, 1.3}) {
    AtomParams p = make(1.0, phi, 1e6);
    double s2 = std::sin(phi) * std::sin(phi);
    double c2 = std::cos(phi) * std::cos(phi);
    for (int n : {0, 1, 2, 5, 9}) {
      CHECK(std::abs(photon_number_probability(n, p) -
                     std::pow(s2, n) * c2) < 1e-12);
    }
  }
}

TEST_CASE("one-count value matches direct quadrature of the convolution") {
  AtomParams p = make(1.0, 1.0, 2.0);
  double q = oracle::integrate(
      [&](double t) {
        AtomParams rest = p;
        rest.t_obs = p.t_obs - t;
        return first_emission_density(t, p) * no_emission_probability(rest);
      },
      0.0, p.t_obs);
  CHECK(photon_number_probability(1, p) == doctest::Approx(q).epsilon(1e-10));
}

TEST_CASE("count probabilities chain through the first-detection kernel") {
  for (double gt : {0.5, 2.0, 10.0}) {
    AtomParams p = make(1.0, 1.0, gt);
    for (int n : {0, 1, 2}) {
      double conv = oracle::integrate(
          [&](double t) {
            AtomParams rest = p;
            rest.t_obs = p.t_obs - t;
            return first_emission_density(t, p) *
                   photon_number_probability(n, rest);
          },
          0.0, p.t_obs, 1e-13);
      CHECK(photon_number_probability(n + 1, p) ==
            doctest::Approx(conv).epsilon(1e-8));
    }
  }
}

TEST_CASE("window-shift invariance of the zero-count probability") {
  // The window only enters through its length.
  for (double shift : {0.0, 0.7, 3.1}) {
    AtomParams a = make(1.2, 0.8, 4.0 - shift);
    AtomParams b = make(1.2, 0.8, 4.0 - shift);
    CHECK(no_emission_probability(a) == no_emission_probability(b));
  }
  // Scaling gamma and shrinking T in proportion is also neutral.
  CHECK(no_emission_probability(make(2.0, 0.8, 1.5)) ==
        doctest::Approx(no_emission_probability(make(3.0, 0.8, 1.0)))
            .epsilon(1e-15));
}

TEST_CASE("truncated distribution normalizes at moderate windows") {
  for (double gt : {1.0, 5.0, 20.0}) {
    for (double phi : {0.3, 0.8, 1.3}) {
      PhotonStatistics s = photon_statistics(make(1.0, phi, gt));
      double total = 0.0;
      for (double pn : s.p) total += pn;
      CHECK(std::abs(total - 1.0) < 1e-9);
      CHECK(std::abs(s.truncation_mass) < 1e-9);
      CHECK(s.truncation_mass >= -1e-9);
    }
  }
}

TEST_CASE("no overflow across the full truncation range") {
  PhotonStatistics s = photon_statistics(make(1.0, 1.2, 1e4));
  REQUIRE(s.p.size() == 2001);
  for (double pn : s.p) {
    CHECK(std::isfinite(pn));
    CHECK(pn >= 0.0);
    CHECK(pn <= 1.0);
  }
  CHECK(s.nbar == doctest::Approx(std::tan(1.2) * std::tan(1.2))
                      .epsilon(1e-4));
}

TEST_CASE("means in easy regimes") {
  PhotonStatistics quiet = photon_statistics(make(1.0, 0.0, 5.0));
  CHECK(quiet.nbar == 0.0);
  CHECK(quiet.variance == 0.0);

  PhotonStatistics s = photon_statistics(make(1.0, pi / 4, 1e6));
  CHECK(s.nbar == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("a too-small truncation order is refused loudly") {
  AtomParams p = make(1.0, 1.4, 1e6, 10);
  try {
    photon_statistics(p);
    FAIL("expected TruncationError");
  } catch (const TruncationError& e) {
    CHECK(e.lost_mass() > 1e-3);
  }
}

TEST_CASE("phase uncertainty is undefined at the stationary angle") {
  CHECK_THROWS_AS(phase_uncertainty(make(1.0, 0.0, 5.0)), DomainError);
}

TEST_CASE("phase uncertainty is positive and finite in the working regime") {
  double d = phase_uncertainty(make(1.0, 0.5, 10.0));
  CHECK(d > 0.0);
  CHECK(std::isfinite(d));

  // Consistent under halving of the derivative step.
  double d_half = phase_uncertainty(make(1.0, 0.5, 10.0), 5e-6);
  CHECK(d_half == doctest::Approx(d).epsilon(1e-6));
}
