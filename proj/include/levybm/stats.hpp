#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "levybm/kac_stroock.hpp"

namespace levybm {

struct Estimate {
  double value = 0.0;
  double se = 0.0;  // jackknife / plain standard error of the estimator
};

// Sample mean with its exact standard error (the jackknife reduces to it).
Estimate mean_estimate(std::span<const double> xs);

// Unbiased sample variance / covariance with leave-one-out jackknife SEs.
Estimate variance_estimate(std::span<const double> xs);
Estimate covariance_estimate(std::span<const double> xs,
                             std::span<const double> ys);

struct MomentEstimates {
  std::size_t n = 0;
  Estimate mean_re, mean_im;
  Estimate var_re, var_im;    // unbiased sample variances
  Estimate cov_re_im;
  Estimate fourth_abs_moment;  // E |z|^4
};

// Unbiased endpoint moments with jackknife standard errors. Under the
// complex-BM limit at time t the targets are mean 0, variances t, covariance
// 0 and E|z(t)|^4 = 8 t^2. Throws TooFewSamples below 100 samples.
MomentEstimates estimate_endpoint_moments(
    std::span<const std::complex<double>> samples);

// Empirical Billingsley-type quotient
//   [ E (Re x(t)-Re x(s))^4 + E (Im ...)^4 ] / (t-s)^2,
// together with its standard error. The complex-BM limit value is 3 + 3 = 6
// (3 per independent Gaussian component); bounded-in-epsilon is the thing the
// verification suite actually asserts. s and t must be grid times.
Estimate tightness_ratio(std::span<const ComplexPath> paths, double s,
                         double t);

struct QvEstimates {
  Estimate sum_re2;  // E sum_cells (delta Re)^2, target t - s
  Estimate sum_im2;  // target t - s
  Estimate cross;    // E sum_cells delta Re * delta Im, target 0
  double s = 0.0;
  double t = 0.0;
  std::size_t cells = 0;
};

// Quadratic (co)variation sums over a partition whose points must lie on the
// shared output grid. Guards against partitions finer than the approximation
// can support: for fixed epsilon the paths are Lipschitz, so cells narrower
// than 2 eps^2 would measure the (identically vanishing) pathwise QV instead
// of the limit's; such partitions throw PartitionTooFine.
QvEstimates quadratic_variation_check(std::span<const ComplexPath> paths,
                                      std::span<const double> partition);

// Bounded test functions for the martingale-increment orthogonality proxy.
// Clamped coordinates are cut to [-5, 5] to stay bounded yet sensitive.
enum class TestFunction { One, ClampedRe, ClampedIm };

std::string to_string(TestFunction f);

struct OrthogonalityEstimates {
  Estimate re_part;  // E phi(x(s)) (Re x(t) - Re x(s)), target 0
  Estimate im_part;  // same with Im
  TestFunction phi = TestFunction::One;
  double s = 0.0;
  double t = 0.0;
};

OrthogonalityEstimates martingale_orthogonality(
    std::span<const ComplexPath> paths, double s, double t, TestFunction phi);

struct KsResult {
  double stat = 0.0;
  double p_value = 0.0;
  std::size_t n = 0;
};

// One-sample Kolmogorov-Smirnov distance of the samples against N(0, variance),
// asymptotic p-value from the Kolmogorov distribution. Needs >= 500 samples.
KsResult ks_normal(std::span<const double> samples, double variance);

// Two-sample KS with the asymptotic p-value at effective size nm/(n+m).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Survival function of the Kolmogorov distribution (the lim law of
// sqrt(n) D_n), accurate over the whole range.
double kolmogorov_q(double lambda);

double normal_cdf(double z);

// Regularized upper incomplete gamma Q(a, x); the chi-square survival
// function is gamma_q(dof/2, stat/2).
double gamma_q(double a, double x);

struct ChiSquareResult {
  double stat = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
};

// Goodness of fit of observed counts to Poisson(lambda_target); bins with
// expected count below min_expected are pooled into their neighbours.
ChiSquareResult chi_square_poisson_fit(std::span<const std::size_t> counts,
                                       double lambda_target,
                                       double min_expected = 5.0);

}  // namespace levybm
