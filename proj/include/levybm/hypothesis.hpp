#pragma once

#include <optional>
#include <span>
#include <string>

#include "levybm/levy.hpp"

namespace levybm {

enum class Hypothesis { H1, H2, H3, HBarCross };

std::string to_string(Hypothesis h);

// ClosedForm evaluates the explicit antiderivatives of the exponential
// kernels; Quadrature additionally integrates the same kernel numerically in
// two dimensions as an independent cross-check (and as the evaluation path
// that would survive for drivers whose exponent has no antiderivative).
enum class HypMode { ClosedForm, Quadrature };

// One hypothesis evaluation on the window [s, t] at a given epsilon.
// Semantics of the derived fields per kind:
//   H1:   value = eps^2 * int_{S<=x<=y<=T'} exp(-(y-x) a)        (S = 2s/eps^2,
//         T' = 2t/eps^2); bound_constant = K = 2/a; bound = K (t-s);
//         limit_gap = max(0, value - bound), 0 whenever the bound holds.
//   H2:   value = eps^2 c^2 int int [phi(theta) + phi(-theta)];
//         bound_constant = bound = 2 (t-s), the required limit;
//         limit_gap = |value - 2(t-s)|, which is O(eps^2).
//   H3:   value = eps^2 int int exp(-(y-x) a(th)) exp(-(x-S) a(2 th));
//         bound_constant = 1/(a(th) a(2 th)); bound = eps^2 * that;
//         limit_gap = value (the required limit is 0).
//   HBar: as H3 with a(2 th) replaced by a(th_j + c1 th_h).
struct HypothesisReport {
  Hypothesis which = Hypothesis::H1;
  double theta = 0.0;
  std::optional<double> theta_h;
  int c1 = 0;  // sign coefficient, HBarCross only
  double s = 0.0;
  double t = 0.0;
  double epsilon = 0.0;
  double closed_form_value = 0.0;
  std::optional<double> quadrature_value;
  double limit_gap = 0.0;
  double bound_constant = 0.0;
  double bound = 0.0;
};

HypothesisReport h1_value(double theta, const LevyTriplet& triplet, double s,
                          double t, double epsilon,
                          HypMode mode = HypMode::ClosedForm);
HypothesisReport h2_value(double theta, const LevyTriplet& triplet, double s,
                          double t, double epsilon,
                          HypMode mode = HypMode::ClosedForm);
HypothesisReport h3_value(double theta, const LevyTriplet& triplet, double s,
                          double t, double epsilon,
                          HypMode mode = HypMode::ClosedForm);
HypothesisReport hbar_cross_value(double theta_j, double theta_h, int c1,
                                  const LevyTriplet& triplet, double s,
                                  double t, double epsilon,
                                  HypMode mode = HypMode::ClosedForm);

// Least-squares exponent p in limit_gap ~ C eps^p for the H2 gap over the
// given epsilon ladder (gaps are floored at 1e-300 before taking logs; for
// exponents whose gap underflows the fit then reads as a very large p, which
// is the honest answer).
double h2_exponent_fit(double theta, const LevyTriplet& triplet, double s,
                       double t, std::span<const double> epsilons);

}  // namespace levybm
