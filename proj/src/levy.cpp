#include "levybm/levy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "levybm/errors.hpp"
#include "levybm/quadrature.hpp"

namespace levybm {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double LevyMeasure::total_atom_mass() const {
  double m = 0.0;
  for (const Atom& a : atoms) m += a.mass;
  return m;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Poisson: return "poisson";
    case Family::CompoundPoisson: return "compound_poisson";
    case Family::JumpDiffusion: return "jump_diffusion";
    case Family::SymmetricStable: return "symmetric_stable";
    case Family::Custom: return "custom";
  }
  return "custom";
}

std::string to_string(ThetaKind k) {
  switch (k) {
    case ThetaKind::ComplexAdmissible: return "ComplexAdmissible";
    case ThetaKind::RealDegenerate: return "RealDegenerate";
    case ThetaKind::NullDegenerate: return "NullDegenerate";
    case ThetaKind::Inadmissible: return "Inadmissible";
  }
  return "Inadmissible";
}

// ---------------------------------------------------------------------------
// Constructors

LevyTriplet LevyTriplet::poisson(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw InvalidTriplet("poisson rate must be finite and >= 0");
  LevyTriplet t;
  t.family = Family::Poisson;
  t.rate = rate;
  if (rate > 0.0) t.measure.atoms = {{1.0, rate}};
  // The atom sits at x = 1, outside {|x| < 1}, so it is not compensated and
  // the Levy-Khinchine drift of a pure counting process is 0.
  t.drift = 0.0;
  return t;
}

LevyTriplet LevyTriplet::compound_poisson(double rate,
                                          std::vector<Atom> jump_law) {
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw InvalidTriplet("compound poisson rate must be finite and >= 0");
  double total_w = 0.0;
  for (const Atom& a : jump_law) {
    if (a.x == 0.0) throw InvalidTriplet("jump of size 0 is not a jump");
    if (!(a.mass > 0.0)) throw InvalidTriplet("jump weights must be positive");
    total_w += a.mass;
  }
  if (rate > 0.0 && total_w <= 0.0)
    throw InvalidTriplet("compound poisson with positive rate needs jumps");
  LevyTriplet t;
  t.family = Family::CompoundPoisson;
  t.rate = rate;
  double compensated = 0.0;
  if (rate > 0.0) {
    t.measure.atoms.reserve(jump_law.size());
    for (const Atom& a : jump_law) {
      double mass = rate * a.mass / total_w;
      t.measure.atoms.push_back({a.x, mass});
      if (std::abs(a.x) < 1.0) compensated += mass * a.x;
    }
  }
  // Pure jump process, no deterministic slope: a = int_{|x|<1} x eta(dx).
  t.drift = compensated;
  return t;
}

LevyTriplet LevyTriplet::brownian(double sigma, double drift) {
  return jump_diffusion(drift, sigma, 0.0, {});
}

LevyTriplet LevyTriplet::jump_diffusion(double pathwise_drift, double sigma,
                                        double rate,
                                        std::vector<Atom> jump_law) {
  if (!(sigma >= 0.0)) throw InvalidTriplet("sigma must be >= 0");
  LevyTriplet t = compound_poisson(rate, std::move(jump_law));
  t.family = Family::JumpDiffusion;
  t.sigma = sigma;
  t.drift += pathwise_drift;
  return t;
}

LevyTriplet LevyTriplet::symmetric_stable(double alpha, double scale) {
  if (!(alpha > 0.0) || !(alpha <= 2.0))
    throw InvalidTriplet("stable index must lie in (0, 2]");
  if (!(scale > 0.0)) throw InvalidTriplet("stable scale must be positive");
  LevyTriplet t;
  t.family = Family::SymmetricStable;
  t.stable = StableParams{alpha, scale};
  return t;
}

LevyTriplet LevyTriplet::custom(double drift, double sigma,
                                LevyMeasure measure) {
  LevyTriplet t;
  t.family = Family::Custom;
  t.drift = drift;
  t.sigma = sigma;
  t.measure = std::move(measure);
  t.validate();
  return t;
}

double LevyTriplet::pathwise_drift() const {
  double d = drift;
  for (const Atom& a : measure.atoms)
    if (std::abs(a.x) < 1.0) d -= a.mass * a.x;
  return d;
}

// ---------------------------------------------------------------------------
// Density quadrature
//
// The exponent integrals are evaluated per side (x > 0 and x < 0 are mapped
// to the positive half-line) and split at |x| = 1:
//   [0, 1]:  integrable near 0 after the substitution x = s^p, p chosen from
//            the declared near-zero exponent;
//   [1, oo): the non-oscillatory part int f is transformed by x -> 1/x, the
//            oscillatory part int trig(ux) f is integrated in x-space up to a
//            truncation point where the integration-by-parts remainder bound
//            2 f(X)/|u| drops below tolerance. Transforming the oscillatory
//            part by 1/x would compress infinitely many oscillations near 0
//            and is hopeless at tight tolerances.

namespace {

int nearzero_power(double nu) {
  // Integrands below behave like x^{2-nu} (or tamer) near 0; x = s^p makes
  // this s^{p(3-nu)-1}, so p >= 2/(3-nu) gives at least linear decay.
  if (nu <= 1.0) return 2;
  int p = static_cast<int>(std::ceil(2.0 / (3.0 - nu))) + 2;
  return std::clamp(p, 2, 12);
}

int tail_power(double beta) {
  // Transformed tail density behaves like s^{beta-2}; s = r^q gives
  // r^{q(beta-1)-1}.
  if (beta >= 2.0) return 1;
  int q = static_cast<int>(std::ceil(2.0 / (beta - 1.0))) + 1;
  return std::clamp(q, 1, 12);
}

// int_0^1 g(x) dx with x = s^p.
double integrate_unit_interval(const std::function<double(double)>& g, int p,
                               double tol) {
  QuadratureOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = 1e-10;
  const double pd = static_cast<double>(p);
  return integrate_or_throw(
      [&](double s) { return g(std::pow(s, p)) * pd * std::pow(s, p - 1); },
      0.0, 1.0, opt);
}

// int_1^oo h(x) dx for eventually monotone h, via x -> 1/s and s = r^q.
double integrate_monotone_tail(const std::function<double(double)>& h,
                               double beta, double tol) {
  const int q = tail_power(beta);
  QuadratureOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = 1e-10;
  const double qd = static_cast<double>(q);
  return integrate_or_throw(
      [&](double r) {
        double s = std::pow(r, q);
        double x = 1.0 / s;
        return h(x) * x * x * qd * std::pow(r, q - 1);
      },
      0.0, 1.0, opt);
}

// int_1^oo trig(u x) f(x) dx, f eventually monotone decreasing with declared
// tail exponent. Truncated where the integration-by-parts remainder bound
// 2 f(X)/|u| falls below tol; the finite part is handled adaptively.
double integrate_oscillatory_tail(const std::function<double(double)>& f,
                                  const std::function<double(double)>& trig_u,
                                  double u_abs, double tol) {
  double x_max = 16.0;
  const double x_cap = 1e7;
  while (x_max < x_cap) {
    double bound = 2.0 * std::abs(f(x_max)) / u_abs;
    if (bound * 1.5 <= tol) break;
    x_max *= 2.0;
  }
  if (x_max >= x_cap)
    throw QuadratureFailure(
        "density tail decays too slowly for the oscillatory integral at the "
        "requested tolerance");
  QuadratureOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = 1e-10;
  opt.max_depth = 52;
  return integrate_or_throw([&](double x) { return trig_u(x) * f(x); }, 1.0,
                            x_max, opt);
}

struct SidePieces {
  double one_minus_cos = 0.0;  // int_0^oo (1 - cos(ux)) h(x) dx
  double sin_comp = 0.0;       // int_0^oo (sin(ux) - ux 1_{x<1}) h(x) dx
};

SidePieces density_side_pieces(double u, const std::function<double(double)>& h,
                               double nu, double beta, double tol) {
  SidePieces out;
  const int p = nearzero_power(nu);
  const double piece_tol = tol / 6.0;
  const double ua = std::abs(u);

  // [0, 1]
  out.one_minus_cos = integrate_unit_interval(
      [&](double x) { return (1.0 - std::cos(u * x)) * h(x); }, p, piece_tol);
  out.sin_comp = integrate_unit_interval(
      [&](double x) { return (std::sin(u * x) - u * x) * h(x); }, p,
      piece_tol);

  // [1, oo): (1 - cos) f = f - cos f, and the compensator is inactive.
  double tail_mass = integrate_monotone_tail(h, beta, piece_tol);
  double tail_cos = integrate_oscillatory_tail(
      h, [&](double x) { return std::cos(u * x); }, ua, piece_tol);
  double tail_sin = integrate_oscillatory_tail(
      h, [&](double x) { return std::sin(u * x); }, ua, piece_tol);
  out.one_minus_cos += tail_mass - tail_cos;
  out.sin_comp += tail_sin;
  return out;
}

// Contribution of the density to (a, b). Sides are handled separately so
// asymmetric densities work; for x < 0 substitute x -> -x.
void add_density_contribution(double u, const DensitySpec& d, double tol,
                              double& a, double& b) {
  const auto& f = d.pdf;
  auto pos = [&](double x) { return f(x); };
  auto neg = [&](double x) { return f(-x); };
  SidePieces p_pos = density_side_pieces(u, pos, d.near_zero_exponent,
                                         d.tail_exponent, tol);
  SidePieces p_neg = density_side_pieces(u, neg, d.near_zero_exponent,
                                         d.tail_exponent, tol);
  a += p_pos.one_minus_cos + p_neg.one_minus_cos;
  // For the negative side, sin(u(-x)) - u(-x) 1 = -(sin(ux) - ux 1).
  b -= p_pos.sin_comp - p_neg.sin_comp;
}

}  // namespace

void LevyTriplet::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InvalidTriplet("sigma must be finite and >= 0");
  if (!std::isfinite(drift)) throw InvalidTriplet("drift must be finite");
  for (const Atom& a : measure.atoms) {
    if (a.x == 0.0 || !std::isfinite(a.x))
      throw InvalidTriplet("measure atoms must sit at finite nonzero x");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass))
      throw InvalidTriplet("measure atom masses must be positive and finite");
  }
  if (family == Family::SymmetricStable) {
    if (!stable) throw InvalidTriplet("symmetric_stable tag without parameters");
    if (!(stable->alpha > 0.0 && stable->alpha <= 2.0))
      throw InvalidTriplet("stable index must lie in (0, 2]");
    if (!(stable->scale > 0.0))
      throw InvalidTriplet("stable scale must be positive");
    if (sigma != 0.0 || !measure.empty())
      throw InvalidTriplet("symmetric_stable carries its own exponent; "
                           "sigma and measure must be empty");
  }
  if (measure.density) {
    const DensitySpec& d = *measure.density;
    if (!d.pdf) throw InvalidTriplet("density handle is empty");
    if (!(d.near_zero_exponent < 3.0))
      throw InvalidTriplet(
          "density near-zero exponent must be < 3 (Levy integrability)");
    if (!(d.tail_exponent > 1.0))
      throw InvalidTriplet(
          "density tail exponent must be > 1 (Levy integrability)");
    // Numerical check that int min(x^2, 1) eta(dx) is finite.
    const int p = nearzero_power(d.near_zero_exponent);
    for (int side = 0; side < 2; ++side) {
      auto h = [&, side](double x) {
        return side == 0 ? d.pdf(x) : d.pdf(-x);
      };
      double small = integrate_unit_interval(
          [&](double x) { return x * x * h(x); }, p, 1e-8);
      double tail = integrate_monotone_tail(h, d.tail_exponent, 1e-8);
      if (!std::isfinite(small) || !std::isfinite(tail))
        throw InvalidTriplet("density fails the Levy integrability check");
    }
  }
}

// ---------------------------------------------------------------------------
// Exponent and derived quantities

ExponentValue levy_exponent(double u, const LevyTriplet& triplet) {
  ExponentValue ev;
  ev.u = u;
  if (u == 0.0) return ev;  // psi(0) = 0 for every triplet

  if (triplet.family == Family::SymmetricStable) {
    ev.a_part = triplet.stable->scale * std::pow(std::abs(u), triplet.stable->alpha);
    ev.b_part = 0.0;
    return ev;
  }

  double a = 0.5 * triplet.sigma * triplet.sigma * u * u;
  double b = -triplet.drift * u;
  for (const Atom& at : triplet.measure.atoms) {
    a += at.mass * (1.0 - std::cos(u * at.x));
    double comp = std::abs(at.x) < 1.0 ? u * at.x : 0.0;
    b -= at.mass * (std::sin(u * at.x) - comp);
  }
  if (triplet.measure.density)
    add_density_contribution(u, *triplet.measure.density, 1e-10, a, b);

  // Re psi >= 0 by Bochner; clamp away quadrature noise at the boundary.
  if (a < 0.0 && a > -1e-9) a = 0.0;
  ev.a_part = a;
  ev.b_part = b;
  return ev;
}

std::complex<double> char_function(double u, double t,
                                   const LevyTriplet& triplet) {
  if (!(t >= 0.0))
    throw ValidationError("char_function needs t >= 0, got t=" + fmt(t));
  ExponentValue ev = levy_exponent(u, triplet);
  return std::exp(std::complex<double>(-t * ev.a_part, -t * ev.b_part));
}

double normalization_constant(const ExponentValue& ev, double tol) {
  if (!(ev.a_part > tol))
    throw DegenerateTheta("normalization constant undefined: Re psi(" +
                          fmt(ev.u) + ") = " + fmt(ev.a_part) +
                          " is not above tolerance " + fmt(tol));
  double norm2 = ev.a_part * ev.a_part + ev.b_part * ev.b_part;
  return std::sqrt(norm2 / (2.0 * ev.a_part));
}

double normalization_constant(double theta, const LevyTriplet& triplet) {
  return normalization_constant(levy_exponent(theta, triplet),
                                triplet.tolerance());
}

// ---------------------------------------------------------------------------
// Frequency classification

namespace {

// True when the phase theta*x lands on the pi-lattice for every atom, i.e.
// sin(theta x) vanishes atom-wise and the path functional exp(i theta X) is
// real-valued along every trajectory.
bool atom_phases_on_pi_lattice(double theta, const LevyTriplet& t) {
  for (const Atom& a : t.measure.atoms) {
    double z = theta * a.x / kPi;
    double k = std::round(z);
    if (std::abs(z - k) > 1e-9 * std::max(1.0, std::abs(z))) return false;
  }
  return true;
}

}  // namespace

ThetaClass classify_theta(double theta, const LevyTriplet& triplet,
                          double tol) {
  ExponentValue ev = levy_exponent(theta, triplet);
  double norm = std::hypot(ev.a_part, ev.b_part);
  if (norm <= tol)
    return {ThetaKind::NullDegenerate,
            "psi(" + fmt(theta) + ") vanishes (|psi| = " + fmt(norm) + ")"};
  if (!(ev.a_part > tol))
    return {ThetaKind::Inadmissible,
            "Re psi(" + fmt(theta) + ") = " + fmt(ev.a_part) +
                " vanishes while psi does not; the phase never decorrelates"};

  ExponentValue ev2 = levy_exponent(2.0 * theta, triplet);
  if (ev2.a_part > tol) return {ThetaKind::ComplexAdmissible, ""};

  // a(2 theta) ~ 0. The run can still target a real limit, but only when the
  // imaginary part of exp(i theta X) vanishes identically: lattice phases,
  // no diffuse jumps, no deterministic slope.
  bool lattice = atom_phases_on_pi_lattice(theta, triplet);
  bool no_density = !triplet.measure.density.has_value();
  bool no_slope = std::abs(triplet.pathwise_drift() * theta) <= tol;
  if (lattice && no_density && no_slope)
    return {ThetaKind::RealDegenerate,
            "Re psi(2 theta) ~ 0 and every jump phase theta*x is a multiple "
            "of pi; the approximation is real-valued"};
  return {ThetaKind::Inadmissible,
          "Re psi(2 theta) = " + fmt(ev2.a_part) +
              " vanishes but the imaginary part of the path functional does "
              "not vanish identically"};
}

ThetaClass classify_theta(double theta, const LevyTriplet& triplet) {
  return classify_theta(theta, triplet, triplet.tolerance());
}

std::string AdmissibilityReport::summary() const {
  if (pass) return "admissible";
  std::ostringstream os;
  os << "admissibility failed:";
  for (const auto& f : failures)
    os << "\n  " << f.condition << " (value " << fmt(f.value) << ")";
  return os.str();
}

AdmissibilityReport admissible_vector(std::span<const double> thetas,
                                      const LevyTriplet& triplet, double tol) {
  AdmissibilityReport rep;
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    ThetaClass c = classify_theta(thetas[j], triplet, tol);
    if (c.kind != ThetaKind::ComplexAdmissible) {
      ExponentValue ev = levy_exponent(thetas[j], triplet);
      rep.failures.push_back(
          {"theta[" + std::to_string(j) + "] = " + fmt(thetas[j]) +
               " is " + to_string(c.kind) + ": " + c.reason,
           ev.a_part});
    }
  }
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    for (std::size_t h = 0; h < thetas.size(); ++h) {
      if (h == j) continue;
      for (int c1 : {-1, +1}) {
        double comb = thetas[j] + c1 * thetas[h];
        ExponentValue ev = levy_exponent(comb, triplet);
        if (!(ev.a_part > tol)) {
          std::string sign = c1 > 0 ? " + " : " - ";
          rep.failures.push_back(
              {"a(theta[" + std::to_string(j) + "]" + sign + "theta[" +
                   std::to_string(h) + "]) = a(" + fmt(comb) +
                   ") = " + fmt(ev.a_part) + " is not above tolerance",
               ev.a_part});
        }
      }
    }
  }
  rep.pass = rep.failures.empty();
  return rep;
}

AdmissibilityReport admissible_vector(std::span<const double> thetas,
                                      const LevyTriplet& triplet) {
  return admissible_vector(thetas, triplet, triplet.tolerance());
}

}  // namespace levybm
