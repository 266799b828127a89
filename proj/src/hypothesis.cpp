#include "levybm/hypothesis.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "levybm/errors.hpp"
#include "levybm/quadrature.hpp"

namespace levybm {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_window(double s, double t, double epsilon) {
  if (!(0.0 <= s) || !(s <= t))
    throw ValidationError("need 0 <= s <= t, got s=" + fmt(s) +
                          ", t=" + fmt(t));
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
}

double require_positive_a(const ExponentValue& ev, double tol,
                          const std::string& label) {
  if (!(ev.a_part > tol))
    throw DegenerateTheta(label + " = a(" + fmt(ev.u) + ") = " +
                          fmt(ev.a_part) + " is not above tolerance " +
                          fmt(tol));
  return ev.a_part;
}

// Triangle integral int_0^L (L - v) exp(-v z) dv; the building block of the
// H1/H2 antiderivatives. Works for complex z with Re z > 0.
std::complex<double> triangle_weighted(std::complex<double> z, double L) {
  if (L == 0.0) return 0.0;
  return L / z - (1.0 - std::exp(-L * z)) / (z * z);
}

// Triangle integral of exp(-(y-x) A) exp(-(x-S) A2) over S<=x<=y<=S+L,
// written symmetrically in the two decay rates; the confluent branch keeps it
// stable when the rates coincide to rounding.
double h3_kernel_integral(double A, double A2, double L) {
  if (L == 0.0) return 0.0;
  auto g = [L](double z) { return (1.0 - std::exp(-L * z)) / z; };
  if (std::abs(A - A2) <= 1e-12 * std::max(A, A2))
    return (1.0 - std::exp(-L * A) - L * A * std::exp(-L * A)) / (A * A);
  return (g(A2) - g(A)) / (A - A2);
}

// Iterated 2-D quadrature of kernel(x, y) over S <= x <= y <= S + L.
double triangle_quadrature(const std::function<double(double, double)>& kernel,
                           double S, double L) {
  if (L == 0.0) return 0.0;
  QuadratureOptions inner_opt;
  inner_opt.abs_tol = 1e-11 * (1.0 + L);
  inner_opt.rel_tol = 1e-8;
  QuadratureOptions outer_opt;
  outer_opt.abs_tol = 1e-9 * (1.0 + L);
  outer_opt.rel_tol = 1e-7;
  const double hi = S + L;
  return integrate_or_throw(
      [&](double x) {
        return integrate_or_throw(
            [&](double y) { return kernel(x, y); }, x, hi, inner_opt);
      },
      S, hi, outer_opt);
}

}  // namespace

std::string to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::H1: return "H1";
    case Hypothesis::H2: return "H2";
    case Hypothesis::H3: return "H3";
    case Hypothesis::HBarCross: return "HBarCross";
  }
  return "H1";
}

HypothesisReport h1_value(double theta, const LevyTriplet& triplet, double s,
                          double t, double epsilon, HypMode mode) {
  check_window(s, t, epsilon);
  const double tol = triplet.tolerance();
  ExponentValue ev = levy_exponent(theta, triplet);
  const double A = require_positive_a(ev, tol, "a(theta)");
  const double eps2 = epsilon * epsilon;
  const double L = 2.0 * (t - s) / eps2;

  HypothesisReport rep;
  rep.which = Hypothesis::H1;
  rep.theta = theta;
  rep.s = s;
  rep.t = t;
  rep.epsilon = epsilon;
  rep.closed_form_value = eps2 * triangle_weighted(A, L).real();
  rep.bound_constant = 2.0 / A;
  rep.bound = rep.bound_constant * (t - s);
  rep.limit_gap = std::max(0.0, rep.closed_form_value - rep.bound);
  if (mode == HypMode::Quadrature) {
    const double S = 2.0 * s / eps2;
    rep.quadrature_value =
        eps2 * triangle_quadrature(
                   [A](double x, double y) { return std::exp(-(y - x) * A); },
                   S, L);
  }
  return rep;
}

HypothesisReport h2_value(double theta, const LevyTriplet& triplet, double s,
                          double t, double epsilon, HypMode mode) {
  check_window(s, t, epsilon);
  const double tol = triplet.tolerance();
  ExponentValue ev = levy_exponent(theta, triplet);
  require_positive_a(ev, tol, "a(theta)");
  const double c = normalization_constant(ev, tol);
  const double eps2 = epsilon * epsilon;
  const double L = 2.0 * (t - s) / eps2;
  const std::complex<double> psi = ev.psi();

  HypothesisReport rep;
  rep.which = Hypothesis::H2;
  rep.theta = theta;
  rep.s = s;
  rep.t = t;
  rep.epsilon = epsilon;
  // phi(theta) + phi(-theta) integrates to twice the real part of the
  // one-sided kernel; c^2 * 2a = |psi|^2 is the identity that makes the
  // eps-free part come out as exactly 2(t-s).
  rep.closed_form_value =
      eps2 * c * c * 2.0 * triangle_weighted(psi, L).real();
  rep.bound_constant = 2.0 * (t - s);
  rep.bound = rep.bound_constant;
  rep.limit_gap = std::abs(rep.closed_form_value - 2.0 * (t - s));
  if (mode == HypMode::Quadrature) {
    const double S = 2.0 * s / eps2;
    const double A = ev.a_part;
    const double B = ev.b_part;
    rep.quadrature_value =
        eps2 * c * c *
        triangle_quadrature(
            [A, B](double x, double y) {
              const double v = y - x;
              return 2.0 * std::exp(-v * A) * std::cos(v * B);
            },
            S, L);
  }
  return rep;
}

namespace {

HypothesisReport h3_like(Hypothesis which, double theta, double u2,
                         const std::string& u2_label,
                         const LevyTriplet& triplet, double s, double t,
                         double epsilon, HypMode mode) {
  check_window(s, t, epsilon);
  const double tol = triplet.tolerance();
  ExponentValue ev1 = levy_exponent(theta, triplet);
  ExponentValue ev2 = levy_exponent(u2, triplet);
  const double A = require_positive_a(ev1, tol, "a(theta)");
  const double A2 = require_positive_a(ev2, tol, u2_label);
  const double eps2 = epsilon * epsilon;
  const double L = 2.0 * (t - s) / eps2;
  const double S = 2.0 * s / eps2;

  HypothesisReport rep;
  rep.which = which;
  rep.theta = theta;
  rep.s = s;
  rep.t = t;
  rep.epsilon = epsilon;
  rep.closed_form_value = eps2 * h3_kernel_integral(A, A2, L);
  rep.bound_constant = 1.0 / (A * A2);
  rep.bound = eps2 * rep.bound_constant;
  rep.limit_gap = rep.closed_form_value;  // the required limit is 0
  if (mode == HypMode::Quadrature) {
    rep.quadrature_value =
        eps2 * triangle_quadrature(
                   [A, A2, S](double x, double y) {
                     return std::exp(-(y - x) * A) * std::exp(-(x - S) * A2);
                   },
                   S, L);
  }
  return rep;
}

}  // namespace

HypothesisReport h3_value(double theta, const LevyTriplet& triplet, double s,
                          double t, double epsilon, HypMode mode) {
  return h3_like(Hypothesis::H3, theta, 2.0 * theta, "a(2 theta)", triplet, s,
                 t, epsilon, mode);
}

HypothesisReport hbar_cross_value(double theta_j, double theta_h, int c1,
                                  const LevyTriplet& triplet, double s,
                                  double t, double epsilon, HypMode mode) {
  if (c1 != 1 && c1 != -1)
    throw ValidationError("c1 must be +1 or -1, got " + std::to_string(c1));
  const double comb = theta_j + static_cast<double>(c1) * theta_h;
  const std::string label =
      std::string("a(theta_j ") + (c1 > 0 ? "+" : "-") + " theta_h)";
  HypothesisReport rep = h3_like(Hypothesis::HBarCross, theta_j, comb, label,
                                 triplet, s, t, epsilon, mode);
  rep.theta_h = theta_h;
  rep.c1 = c1;
  return rep;
}

double h2_exponent_fit(double theta, const LevyTriplet& triplet, double s,
                       double t, std::span<const double> epsilons) {
  if (epsilons.size() < 2)
    throw ValidationError("exponent fit needs at least two epsilons");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(epsilons.size());
  for (double eps : epsilons) {
    HypothesisReport rep = h2_value(theta, triplet, s, t, eps);
    const double gap = std::max(rep.limit_gap, 1e-300);
    const double x = std::log(eps);
    const double y = std::log(gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace levybm
