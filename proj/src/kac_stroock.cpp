#include "levybm/kac_stroock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levybm/errors.hpp"

namespace levybm {

namespace {

constexpr double kPi = std::numbers::pi;

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// When every level's phase theta*v is a multiple of pi, the integrand is
// exactly (-1)^k and the imaginary part vanishes identically — evaluate it
// that way instead of through sin/cos, so "im == 0" holds in exact arithmetic
// (Poisson drivers at odd multiples of pi are the canonical case).
bool phases_on_pi_lattice(double theta, const std::vector<double>& levels) {
  for (double v : levels) {
    double z = theta * v / kPi;
    double k = std::round(z);
    if (std::abs(z - k) > 1e-9 * std::max(1.0, std::abs(z))) return false;
  }
  return true;
}

ComplexPath integrate_piecewise(const PathSample& path, double theta,
                                double c_theta, double epsilon,
                                std::span<const double> out_times) {
  if (!(epsilon > 0.0))
    throw ValidationError("epsilon must be positive");
  if (out_times.empty())
    throw ValidationError("output grid must be nonempty");
  for (std::size_t i = 0; i + 1 < out_times.size(); ++i)
    if (!(out_times[i] < out_times[i + 1]))
      throw ValidationError("output times must be strictly increasing");
  if (!(out_times.front() >= 0.0))
    throw ValidationError("output times must be nonnegative");

  const double eps2 = epsilon * epsilon;
  const double tau_max = 2.0 * out_times.back() / eps2;
  if (path.horizon < tau_max * (1.0 - 1e-12) - 1e-12)
    throw HorizonTooShort("driver horizon " + std::to_string(path.horizon) +
                          " is shorter than the required 2t/eps^2 = " +
                          std::to_string(tau_max));

  const bool lattice = phases_on_pi_lattice(theta, path.values);

  ComplexPath out;
  out.times.assign(out_times.begin(), out_times.end());
  out.re.resize(out_times.size());
  out.im.resize(out_times.size());
  out.meta.epsilon = epsilon;
  out.meta.theta = theta;
  out.meta.c_theta = c_theta;
  out.meta.driver_exactness = path.exactness;
  out.meta.grid_step = path.grid_step;

  // One pass over the staircase, emitting the cumulative integral at each
  // output time's driver-clock position 2t/eps^2.
  Kahan sum_re, sum_im;
  std::size_t seg = 0;
  double cursor = 0.0;
  const std::size_t n_seg = path.segments();
  for (std::size_t i = 0; i < out_times.size(); ++i) {
    const double tau = std::min(2.0 * out_times[i] / eps2, path.horizon);
    while (cursor < tau) {
      const double seg_end =
          seg + 1 < n_seg ? std::min(path.breakpoints[seg + 1], tau)
                          : tau;
      const double dt = seg_end - cursor;
      if (dt > 0.0) {
        const double v = path.values[seg];
        if (lattice) {
          const auto k = std::llround(theta * v / kPi);
          sum_re.add((k & 1) ? -dt : dt);
          // sin(k*pi) == 0 exactly: nothing to accumulate.
        } else {
          const double phase = theta * v;
          sum_re.add(dt * std::cos(phase));
          sum_im.add(dt * std::sin(phase));
        }
      }
      cursor = seg_end;
      if (seg + 1 < n_seg && path.breakpoints[seg + 1] <= cursor) ++seg;
    }
    out.re[i] = c_theta * epsilon * sum_re.sum;
    out.im[i] = c_theta * epsilon * sum_im.sum;
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  triplet.validate();
  if (thetas.empty()) throw ValidationError("thetas: need at least one value");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw ValidationError("epsilon: must be positive, got " +
                          std::to_string(epsilon));
  if (!(T >= 0.0) || !std::isfinite(T))
    throw ValidationError("T: must be nonnegative, got " + std::to_string(T));
  if (n_out < 2) throw ValidationError("n_out: must be at least 2");
  if (replicas < 0) throw ValidationError("replicas: must be nonnegative");
  if (grid_step && !(*grid_step > 0.0))
    throw ValidationError("grid_step: must be positive when given");
}

std::vector<double> ExperimentConfig::out_times() const {
  std::vector<double> t(static_cast<std::size_t>(n_out) + 1);
  for (std::size_t k = 0; k < t.size(); ++k)
    t[k] = T * static_cast<double>(k) / static_cast<double>(n_out);
  return t;
}

ComplexPath integrate_exact(const PathSample& path, double theta,
                            double c_theta, double epsilon,
                            std::span<const double> out_times) {
  if (path.exactness != Exactness::ExactJump)
    throw GridMismatch("integrate_exact needs an exact jump skeleton");
  return integrate_piecewise(path, theta, c_theta, epsilon, out_times);
}

ComplexPath integrate_grid(const PathSample& path, double theta,
                           double c_theta, double epsilon,
                           std::span<const double> out_times) {
  if (path.exactness != Exactness::GridApprox)
    throw GridMismatch("integrate_grid needs a grid-sampled path");
  return integrate_piecewise(path, theta, c_theta, epsilon, out_times);
}

namespace {

ComplexPath build_one(const ExperimentConfig& config, double theta,
                      std::uint64_t replica_index,
                      const PathSample* shared_path) {
  ThetaClass cls = classify_theta(theta, config.triplet);
  const bool degenerate = cls.kind == ThetaKind::NullDegenerate ||
                          cls.kind == ThetaKind::Inadmissible;
  if (degenerate && !config.allow_degenerate)
    throw DegenerateTheta("theta = " + std::to_string(theta) + " is " +
                          to_string(cls.kind) + ": " + cls.reason);

  double c = 0.0;
  ExponentValue ev = levy_exponent(theta, config.triplet);
  if (ev.a_part > config.triplet.tolerance())
    c = normalization_constant(ev, config.triplet.tolerance());
  // else: degenerate override; c stays 0 and the path is identically zero.

  std::vector<double> ts = config.out_times();
  if (config.T == 0.0) {
    ComplexPath zero;
    zero.times = ts;
    zero.re.assign(ts.size(), 0.0);
    zero.im.assign(ts.size(), 0.0);
    zero.meta = {config.epsilon, theta, c, cls, Exactness::ExactJump, 0.0};
    return zero;
  }

  PathSample local;
  const PathSample* path = shared_path;
  if (!path) {
    local = sample_path(config.triplet, config.driver_horizon(),
                        {config.master_seed, replica_index},
                        config.effective_grid_step());
    path = &local;
  }
  ComplexPath out = integrate_piecewise(*path, theta, c, config.epsilon, ts);
  out.meta.classification = cls;
  return out;
}

}  // namespace

ComplexPath build_approximation(const ExperimentConfig& config,
                                std::uint64_t replica_index) {
  config.validate();
  if (config.thetas.size() != 1)
    throw ValidationError(
        "build_approximation is the scalar build; use the md variant for " +
        std::to_string(config.thetas.size()) + " components");
  return build_one(config, config.thetas[0], replica_index, nullptr);
}

std::vector<ComplexPath> build_approximation_md(const ExperimentConfig& config,
                                                std::uint64_t replica_index) {
  config.validate();
  if (!config.allow_degenerate) {
    AdmissibilityReport rep = admissible_vector(config.thetas, config.triplet);
    if (!rep.pass) throw AdmissibilityFailure(rep.summary());
  }
  std::vector<ComplexPath> parts;
  parts.reserve(config.thetas.size());
  if (config.T == 0.0 || config.thetas.size() == 1) {
    for (double th : config.thetas)
      parts.push_back(build_one(config, th, replica_index, nullptr));
    return parts;
  }
  PathSample driver =
      sample_path(config.triplet, config.driver_horizon(),
                  {config.master_seed, replica_index},
                  config.effective_grid_step());
  for (double th : config.thetas)
    parts.push_back(build_one(config, th, replica_index, &driver));
  return parts;
}

}  // namespace levybm
