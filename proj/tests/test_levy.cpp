#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "levybm/errors.hpp"
#include "levybm/levy.hpp"

using namespace levybm;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("poisson exponent matches frozen values") {
  const LevyTriplet tr = LevyTriplet::poisson(1.0);
  ExponentValue ev = levy_exponent(1.0, tr);
  // psi(u) = 1 - e^{iu}: a = 1 - cos u, b = -sin u.
  CHECK(ev.a_part == doctest::Approx(0.45969769413186023).epsilon(1e-15));
  CHECK(ev.b_part == doctest::Approx(-0.8414709848078965).epsilon(1e-15));

  ev = levy_exponent(kPi, tr);
  CHECK(ev.a_part == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(ev.b_part) < 1e-15);

  // Rate scales the whole exponent.
  const LevyTriplet tr3 = LevyTriplet::poisson(3.0);
  const ExponentValue ev3 = levy_exponent(1.0, tr3);
  CHECK(ev3.a_part == doctest::Approx(3.0 * 0.45969769413186023).epsilon(1e-14));
}

TEST_CASE("compound poisson exponent at the symmetric pair") {
  const LevyTriplet tr =
      LevyTriplet::compound_poisson(2.0, {{1.0, 1.0}, {-1.0, 1.0}});
  // a(u) = 2 (1 - cos u): the two unit atoms carry intensity 1 each.
  ExponentValue ev = levy_exponent(kPi, tr);
  CHECK(ev.a_part == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(std::abs(ev.b_part) < 1e-15);
  ev = levy_exponent(2.0, tr);
  CHECK(ev.a_part == doctest::Approx(2.0 * (1.0 - std::cos(2.0))).epsilon(1e-15));

  // Weights are a law, not intensities: {2, 2} is the same process.
  const LevyTriplet scaled =
      LevyTriplet::compound_poisson(2.0, {{1.0, 2.0}, {-1.0, 2.0}});
  const ExponentValue ev2 = levy_exponent(2.0, scaled);
  CHECK(ev2.a_part == ev.a_part);
  CHECK(ev2.b_part == ev.b_part);
}

TEST_CASE("brownian exponent with and without drift") {
  const LevyTriplet tr = LevyTriplet::brownian(1.0);
  ExponentValue ev = levy_exponent(2.0, tr);
  CHECK(ev.a_part == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ev.b_part == 0.0);

  // psi(u) = -i d u + u^2/2 for slope d.
  const LevyTriplet drifted = LevyTriplet::brownian(1.0, 0.7);
  ev = levy_exponent(2.0, drifted);
  CHECK(ev.a_part == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ev.b_part == doctest::Approx(-1.4).epsilon(1e-15));
  CHECK(drifted.pathwise_drift() == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("symmetric stable exponent") {
  const LevyTriplet tr = LevyTriplet::symmetric_stable(1.5, 1.0);
  ExponentValue ev = levy_exponent(2.0, tr);
  CHECK(ev.a_part == doctest::Approx(2.8284271247461903).epsilon(1e-15));
  CHECK(ev.b_part == 0.0);
  ev = levy_exponent(-2.0, tr);  // even in u
  CHECK(ev.a_part == doctest::Approx(2.8284271247461903).epsilon(1e-15));

  const LevyTriplet sc = LevyTriplet::symmetric_stable(1.5, 0.25);
  CHECK(levy_exponent(2.0, sc).a_part ==
        doctest::Approx(0.25 * 2.8284271247461903).epsilon(1e-15));
}

TEST_CASE("density-backed measure evaluated by quadrature") {
  // eta(dx) = phi(x) dx (standard normal density): the symmetric part gives
  // a(u) = 1 - exp(-u^2/2) and b(u) = 0, a closed form the quadrature path
  // must reproduce to its declared 1e-8 tolerance.
  LevyMeasure m;
  DensitySpec d;
  d.pdf = [](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
  };
  d.near_zero_exponent = 0.0;
  d.tail_exponent = 4.0;
  m.density = d;
  const LevyTriplet tr = LevyTriplet::custom(0.0, 0.0, m);
  CHECK(tr.tolerance() == 1e-8);
  const ExponentValue ev = levy_exponent(1.0, tr);
  CHECK(ev.a_part == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-7));
  CHECK(std::abs(ev.b_part) < 1e-7);
}

TEST_CASE("char function is exp(-t psi)") {
  const LevyTriplet tr = LevyTriplet::poisson(1.0);
  const ExponentValue ev = levy_exponent(0.8, tr);
  const std::complex<double> expected = std::exp(-2.5 * ev.psi());
  const std::complex<double> got = char_function(0.8, 2.5, tr);
  CHECK(std::abs(got - expected) < 1e-15);
  CHECK(std::abs(char_function(0.8, 0.0, tr) - 1.0) == 0.0);
}

TEST_CASE("normalization constant and its identity") {
  const LevyTriplet tr = LevyTriplet::poisson(1.0);
  // a(pi/2) = 1, b(pi/2) = -1 -> c = sqrt(2/2) = 1.
  CHECK(normalization_constant(kPi / 2, tr) == doctest::Approx(1.0).epsilon(1e-15));
  // c^2 * 2a = a^2 + b^2 within a few ulps wherever a > 0.
  for (double u : {0.3, 0.9, 1.7, 2.5}) {
    const ExponentValue ev = levy_exponent(u, tr);
    const double c = normalization_constant(u, tr);
    const double rhs = ev.a_part * ev.a_part + ev.b_part * ev.b_part;
    CHECK(std::abs(c * c * 2.0 * ev.a_part - rhs) <=
          4.0 * (std::nextafter(rhs, INFINITY) - rhs));
  }
  CHECK_THROWS_AS(normalization_constant(2.0 * kPi, tr), DegenerateTheta);
}

TEST_CASE("theta classification for the poisson driver") {
  const LevyTriplet tr = LevyTriplet::poisson(1.0);
  CHECK(classify_theta(kPi / 2, tr).kind == ThetaKind::ComplexAdmissible);
  CHECK(classify_theta(kPi, tr).kind == ThetaKind::RealDegenerate);
  CHECK(classify_theta(3.0 * kPi, tr).kind == ThetaKind::RealDegenerate);
  CHECK(classify_theta(2.0 * kPi, tr).kind == ThetaKind::NullDegenerate);
  CHECK(classify_theta(0.0, tr).kind == ThetaKind::NullDegenerate);
  const ThetaClass deg = classify_theta(kPi, tr);
  CHECK(deg.reason.find("multiple of pi") != std::string::npos);
}

TEST_CASE("drift breaks the real-degenerate lattice structure") {
  // Same jump skeleton as Poisson at theta = pi, but a deterministic slope
  // makes the phase drift through the lattice: the imaginary part no longer
  // vanishes, yet a(2 theta) is still ~ 0, so no complex limit either.
  const LevyTriplet tr = LevyTriplet::jump_diffusion(0.3, 0.0, 1.0, {{1.0, 1.0}});
  const ThetaClass cls = classify_theta(kPi, tr);
  CHECK(cls.kind == ThetaKind::Inadmissible);
}

TEST_CASE("vector admissibility names the failing combination") {
  const LevyTriplet tr = LevyTriplet::poisson(1.0);
  const double pair_ok[2] = {kPi / 2, kPi / 3};
  CHECK(admissible_vector(pair_ok, tr).pass);

  const double pair_bad[2] = {kPi / 2, kPi / 2};
  const AdmissibilityReport rep = admissible_vector(pair_bad, tr);
  CHECK_FALSE(rep.pass);
  CHECK(rep.summary().find("a(theta[0] - theta[1])") != std::string::npos);

  // A component failure is reported before the pairwise ones.
  const double pair_null[2] = {2.0 * kPi, kPi / 2};
  const AdmissibilityReport rep2 = admissible_vector(pair_null, tr);
  CHECK_FALSE(rep2.pass);
  CHECK(rep2.summary().find("NullDegenerate") != std::string::npos);
}

TEST_CASE("triplet validation rejects malformed input") {
  CHECK_THROWS_AS(LevyTriplet::poisson(-1.0), InvalidTriplet);
  CHECK_THROWS_AS(LevyTriplet::compound_poisson(1.0, {{0.0, 1.0}}),
                  InvalidTriplet);
  CHECK_THROWS_AS(LevyTriplet::compound_poisson(1.0, {{1.0, -2.0}}),
                  InvalidTriplet);
  CHECK_THROWS_AS(LevyTriplet::compound_poisson(1.0, {}), InvalidTriplet);
  CHECK_THROWS_AS(LevyTriplet::symmetric_stable(0.0, 1.0), InvalidTriplet);
  CHECK_THROWS_AS(LevyTriplet::symmetric_stable(2.5, 1.0), InvalidTriplet);
  CHECK_THROWS_AS(LevyTriplet::symmetric_stable(1.5, -1.0), InvalidTriplet);
  CHECK_THROWS_AS(LevyTriplet::brownian(-0.5), InvalidTriplet);
}

TEST_CASE("jump diffusion derives the levy-khinchine drift") {
  // pathwise_drift is what the path does between jumps; the stored drift
  // compensates the small jumps so the exponent comes out right.
  const LevyTriplet tr =
      LevyTriplet::jump_diffusion(0.5, 1.0, 2.0, {{0.25, 1.0}});
  CHECK(tr.pathwise_drift() == doctest::Approx(0.5).epsilon(1e-14));
  // E X_1 = pathwise_drift + rate * mean jump = 0.5 + 2 * 0.25 = 1, visible
  // in the exponent via b'(0) ~ -E X_1.
  const double h = 1e-6;
  const double b1 = levy_exponent(h, tr).b_part;
  CHECK(-b1 / h == doctest::Approx(1.0).epsilon(1e-4));
}
