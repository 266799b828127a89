#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "levybm/errors.hpp"
#include "levybm/kac_stroock.hpp"
#include "levybm/levy.hpp"
#include "levybm/sampler.hpp"

using namespace levybm;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent reference: integrate e^{i theta X_s} over [0, 2t/eps^2] by
// walking the staircase in long double, one sin/cos per segment. Shares no
// code with the library's integrator (which batches segments per output cell
// with compensated summation).
std::complex<double> reference_integral(const PathSample& ps, double theta,
                                        double c_theta, double eps, double t) {
  const long double tau =
      2.0L * static_cast<long double>(t) /
      (static_cast<long double>(eps) * static_cast<long double>(eps));
  long double re = 0.0L, im = 0.0L;
  for (std::size_t i = 0; i < ps.breakpoints.size(); ++i) {
    const long double lo = ps.breakpoints[i];
    if (lo >= tau) break;
    long double hi = i + 1 < ps.breakpoints.size()
                         ? static_cast<long double>(ps.breakpoints[i + 1])
                         : static_cast<long double>(ps.horizon);
    if (hi > tau) hi = tau;
    if (hi <= lo) continue;
    const long double phase =
        static_cast<long double>(theta) * static_cast<long double>(ps.values[i]);
    re += std::cos(phase) * (hi - lo);
    im += std::sin(phase) * (hi - lo);
  }
  const long double scale =
      static_cast<long double>(c_theta) * static_cast<long double>(eps);
  return {static_cast<double>(scale * re), static_cast<double>(scale * im)};
}

ExperimentConfig poisson_config(double theta, double eps) {
  ExperimentConfig cfg;
  cfg.triplet = LevyTriplet::poisson(1.0);
  cfg.thetas = {theta};
  cfg.epsilon = eps;
  cfg.T = 1.0;
  cfg.n_out = 8;
  cfg.replicas = 1;
  cfg.master_seed = 1;
  return cfg;
}

}  // namespace

TEST_CASE("exact integration matches the segment-walk reference") {
  const ExperimentConfig cfg = poisson_config(kPi / 2, 0.1);
  const double c = normalization_constant(kPi / 2, cfg.triplet);
  for (std::uint64_t r = 0; r < 20; ++r) {
    const ComplexPath path = build_approximation(cfg, r);
    const PathSample drv =
        sample_path(cfg.triplet, cfg.driver_horizon(), {cfg.master_seed, r});
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      const std::complex<double> ref =
          reference_integral(drv, kPi / 2, c, cfg.epsilon, path.times[k]);
      CHECK(std::abs(path.re[k] - ref.real()) <= 1e-12);
      CHECK(std::abs(path.im[k] - ref.imag()) <= 1e-12);
    }
  }
}

TEST_CASE("output grid shape and start at zero") {
  ExperimentConfig cfg = poisson_config(kPi / 2, 0.1);
  cfg.n_out = 5;
  cfg.T = 2.0;
  const std::vector<double> times = cfg.out_times();
  REQUIRE(times.size() == 6);
  for (int k = 0; k <= 5; ++k)
    CHECK(times[static_cast<std::size_t>(k)] ==
          doctest::Approx(2.0 * k / 5.0).epsilon(1e-15));

  const ComplexPath path = build_approximation(cfg, 0);
  REQUIRE(path.times.size() == 6);
  CHECK(path.re[0] == 0.0);
  CHECK(path.im[0] == 0.0);
  CHECK(path.meta.epsilon == 0.1);
  CHECK(path.meta.theta == kPi / 2);
  CHECK(path.meta.c_theta ==
        doctest::Approx(normalization_constant(kPi / 2, cfg.triplet))
            .epsilon(1e-15));
  CHECK(path.meta.classification.kind == ThetaKind::ComplexAdmissible);
  CHECK(path.meta.driver_exactness == Exactness::ExactJump);
}

TEST_CASE("modulus-one integrand bounds the increments") {
  // |x(t) - x(s)| <= c eps * (2/eps^2) (t - s) = 2 c (t-s) / eps exactly,
  // since the integrand has modulus 1.
  const ExperimentConfig cfg = poisson_config(1.0, 0.2);
  const double c = normalization_constant(1.0, cfg.triplet);
  const ComplexPath p = build_approximation(cfg, 3);
  for (std::size_t k = 1; k < p.times.size(); ++k) {
    const double dt = p.times[k] - p.times[k - 1];
    const double inc = std::hypot(p.re[k] - p.re[k - 1], p.im[k] - p.im[k - 1]);
    CHECK(inc <= 2.0 * c * dt / cfg.epsilon + 1e-12);
  }
}

TEST_CASE("repeat builds are bitwise identical") {
  const ExperimentConfig cfg = poisson_config(kPi / 2, 0.05);
  const ComplexPath a = build_approximation(cfg, 5);
  const ComplexPath b = build_approximation(cfg, 5);
  CHECK(a.re == b.re);
  CHECK(a.im == b.im);
  const ComplexPath other = build_approximation(cfg, 6);
  CHECK(a.re != other.re);
}

TEST_CASE("pi lattice keeps the imaginary part at exact zero") {
  ExperimentConfig cfg = poisson_config(kPi, 0.1);
  cfg.n_out = 50;
  for (std::uint64_t r = 0; r < 10; ++r) {
    const ComplexPath p = build_approximation(cfg, r);
    for (double v : p.im) CHECK(v == 0.0);
    CHECK(p.meta.classification.kind == ThetaKind::RealDegenerate);
  }
}

TEST_CASE("multi-frequency build shares the driver") {
  ExperimentConfig cfg = poisson_config(kPi / 2, 0.1);
  cfg.thetas = {kPi / 2, kPi / 3};
  for (std::uint64_t r = 0; r < 5; ++r) {
    const std::vector<ComplexPath> md = build_approximation_md(cfg, r);
    REQUIRE(md.size() == 2);

    ExperimentConfig one = cfg;
    one.thetas = {kPi / 2};
    const ComplexPath first = build_approximation(one, r);
    CHECK(md[0].re == first.re);
    CHECK(md[0].im == first.im);

    one.thetas = {kPi / 3};
    const ComplexPath second = build_approximation(one, r);
    CHECK(md[1].re == second.re);
    CHECK(md[1].im == second.im);
  }
}

TEST_CASE("degenerate thetas refuse unless overridden") {
  ExperimentConfig cfg = poisson_config(2.0 * kPi, 0.1);
  CHECK_THROWS_AS(build_approximation(cfg, 0), DegenerateTheta);

  cfg.allow_degenerate = true;
  const ComplexPath p = build_approximation(cfg, 0);
  // The only consistent extension sets c := 0, so the path collapses.
  CHECK(p.meta.c_theta == 0.0);
  for (double v : p.re) CHECK(v == 0.0);
  for (double v : p.im) CHECK(v == 0.0);
}

TEST_CASE("zero horizon gives the zero path") {
  ExperimentConfig cfg = poisson_config(kPi / 2, 0.1);
  cfg.T = 0.0;
  const ComplexPath p = build_approximation(cfg, 0);
  REQUIRE(p.times.size() == static_cast<std::size_t>(cfg.n_out) + 1);
  for (double t : p.times) CHECK(t == 0.0);
  for (double v : p.re) CHECK(v == 0.0);
}

TEST_CASE("config validation names the offending field") {
  ExperimentConfig cfg = poisson_config(kPi / 2, 0.1);
  cfg.epsilon = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(),
                       doctest::Contains("epsilon"), ValidationError);
  cfg = poisson_config(kPi / 2, 0.1);
  cfg.n_out = 1;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("n_out"),
                       ValidationError);
  cfg = poisson_config(kPi / 2, 0.1);
  cfg.thetas.clear();
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = poisson_config(kPi / 2, 0.1);
  cfg.grid_step = -0.5;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("grid_step"),
                       ValidationError);
  cfg = poisson_config(kPi / 2, 0.1);
  cfg.T = -1.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("T"),
                       ValidationError);
}

TEST_CASE("integration refuses an undersized driver") {
  // A driver sampled on a horizon shorter than 2 t / eps^2 cannot support
  // the requested output times.
  const PathSample short_drv =
      sample_path(LevyTriplet::poisson(1.0), 10.0, {1, 1});
  const std::vector<double> times = {0.0, 1.0};
  CHECK_THROWS_AS(integrate_exact(short_drv, kPi / 2, 1.0, 0.1, times),
                  HorizonTooShort);
}

TEST_CASE("grid-approximate drivers integrate through the same path") {
  // Brownian driver: same reference-walk check, on the grid staircase.
  ExperimentConfig cfg;
  cfg.triplet = LevyTriplet::brownian(1.0);
  cfg.thetas = {1.0};
  cfg.epsilon = 0.3;
  cfg.T = 0.5;
  cfg.n_out = 4;
  cfg.replicas = 1;
  cfg.master_seed = 2;
  cfg.grid_step = 0.01;
  const double c = normalization_constant(1.0, cfg.triplet);
  for (std::uint64_t r = 0; r < 5; ++r) {
    const ComplexPath path = build_approximation(cfg, r);
    CHECK(path.meta.driver_exactness == Exactness::GridApprox);
    const PathSample drv = sample_path(cfg.triplet, cfg.driver_horizon(),
                                       {cfg.master_seed, r}, 0.01);
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      const std::complex<double> ref =
          reference_integral(drv, 1.0, c, cfg.epsilon, path.times[k]);
      CHECK(std::abs(path.re[k] - ref.real()) <= 1e-12);
      CHECK(std::abs(path.im[k] - ref.imag()) <= 1e-12);
    }
  }
}
