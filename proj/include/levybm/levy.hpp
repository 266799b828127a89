#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace levybm {

// One atom of a Levy measure: mass at a nonzero jump size.
struct Atom {
  double x = 0.0;
  double mass = 0.0;
};

// Absolutely continuous part of a Levy measure, given as a density on
// R \ {0} together with declared envelope exponents:
//   pdf(x) = O(|x|^-near_zero_exponent)  as x -> 0,
//   pdf(x) = O(|x|^-tail_exponent)       as |x| -> oo,
// with near_zero_exponent < 3 and tail_exponent > 1 (the Levy integrability
// condition). The density must be eventually monotone in each tail; the
// exponents steer the quadrature substitutions and the oscillatory-tail
// truncation.
struct DensitySpec {
  std::function<double(double)> pdf;
  double near_zero_exponent = 0.0;
  double tail_exponent = 2.0;
};

struct LevyMeasure {
  std::vector<Atom> atoms;
  std::optional<DensitySpec> density;

  double total_atom_mass() const;
  bool empty() const { return atoms.empty() && !density.has_value(); }
};

enum class Family { Poisson, CompoundPoisson, JumpDiffusion, SymmetricStable, Custom };

std::string to_string(Family f);

struct StableParams {
  double alpha = 2.0;  // stability index in (0, 2]
  double scale = 0.5;  // gamma in Re psi(u) = gamma |u|^alpha
};

// Characteristic triplet of a Levy process X, normalised so that
//   E exp(iu X_t) = exp(-t psi(u)),
//   psi(u) = -i a u + (sigma^2/2) u^2 - int (e^{iux} - 1 - iux 1_{|x|<1}) eta(dx).
// `drift` is the Levy-Khinchine drift a. Tagged families are materialised by
// the named constructors so the (drift, sigma, measure) fields always agree
// with the tag.
struct LevyTriplet {
  double drift = 0.0;
  double sigma = 0.0;
  LevyMeasure measure;
  Family family = Family::Custom;
  double rate = 0.0;  // total jump intensity for the jump families
  std::optional<StableParams> stable;

  static LevyTriplet poisson(double rate);
  // jump_law entries are (size, weight); weights are normalised internally.
  static LevyTriplet compound_poisson(double rate, std::vector<Atom> jump_law);
  static LevyTriplet brownian(double sigma, double drift = 0.0);
  // `pathwise_drift` is the slope of the deterministic part of the path;
  // the Levy-Khinchine drift is derived from it and the small jumps.
  static LevyTriplet jump_diffusion(double pathwise_drift, double sigma,
                                    double rate, std::vector<Atom> jump_law);
  static LevyTriplet symmetric_stable(double alpha, double scale);
  static LevyTriplet custom(double drift, double sigma, LevyMeasure measure);

  // Degeneracy tolerance used when classifying frequencies: closed-form
  // families get 1e-12, density-backed measures 1e-8 (their exponent carries
  // quadrature error).
  double tolerance() const { return measure.density ? 1e-8 : 1e-12; }

  // Slope of the deterministic component of the sampled path:
  // drift - int_{|x|<1} x eta(dx) (atoms only; density-backed measures are
  // not sampleable anyway).
  double pathwise_drift() const;

  void validate() const;  // throws InvalidTriplet / QuadratureFailure
};

// psi(u) split into real and imaginary parts. a_part >= 0 always.
struct ExponentValue {
  double u = 0.0;
  double a_part = 0.0;
  double b_part = 0.0;
  std::complex<double> psi() const { return {a_part, b_part}; }
};

// Evaluate the Levy exponent. Closed forms for sigma, drift, atoms and the
// symmetric-stable tag; adaptive quadrature for density parts.
ExponentValue levy_exponent(double u, const LevyTriplet& triplet);

// E exp(iu X_t) = exp(-t psi(u)), t >= 0.
std::complex<double> char_function(double u, double t,
                                   const LevyTriplet& triplet);

// c(theta) = sqrt((a^2 + b^2) / (2a)). Throws DegenerateTheta when
// a(theta) <= tol.
double normalization_constant(double theta, const LevyTriplet& triplet);
double normalization_constant(const ExponentValue& ev, double tol);

enum class ThetaKind {
  ComplexAdmissible,  // a(theta) > tol and a(2 theta) > tol
  RealDegenerate,     // a(theta) > tol, a(2 theta) ~ 0, phases theta*x all in pi*Z
  NullDegenerate,     // psi(theta) ~ 0 (e.g. Poisson at theta = 2k pi)
  Inadmissible
};

std::string to_string(ThetaKind k);

struct ThetaClass {
  ThetaKind kind = ThetaKind::Inadmissible;
  std::string reason;
};

ThetaClass classify_theta(double theta, const LevyTriplet& triplet, double tol);
ThetaClass classify_theta(double theta, const LevyTriplet& triplet);

struct AdmissibilityIssue {
  std::string condition;  // human-readable description of the failed condition
  double value = 0.0;     // the offending a(.) value
};

struct AdmissibilityReport {
  bool pass = false;
  std::vector<AdmissibilityIssue> failures;
  std::string summary() const;
};

// Multi-frequency admissibility: every component must be ComplexAdmissible
// and a(theta_j + c1 theta_h) > tol for every pair j != h, c1 in {-1, +1}.
AdmissibilityReport admissible_vector(std::span<const double> thetas,
                                      const LevyTriplet& triplet, double tol);
AdmissibilityReport admissible_vector(std::span<const double> thetas,
                                      const LevyTriplet& triplet);

}  // namespace levybm
