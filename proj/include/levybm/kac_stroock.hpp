#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levybm/levy.hpp"
#include "levybm/sampler.hpp"

namespace levybm {

struct PathMeta {
  double epsilon = 0.0;
  double theta = 0.0;
  double c_theta = 0.0;
  ThetaClass classification;
  Exactness driver_exactness = Exactness::ExactJump;
  double grid_step = 0.0;
};

// The approximation x(t) = c(theta) * eps * int_0^{2t/eps^2} e^{i theta X_s} ds
// evaluated on an output grid. x(0) = 0 and |x(t) - x(s)| <= 2 c (t-s)/eps
// up to one driver cell, since the integrand has modulus 1.
struct ComplexPath {
  std::vector<double> times;
  std::vector<double> re;
  std::vector<double> im;
  PathMeta meta;
};

struct ExperimentConfig {
  LevyTriplet triplet;
  std::vector<double> thetas;
  double epsilon = 0.05;
  double T = 1.0;
  int n_out = 256;  // output points are k*T/n_out, k = 0..n_out
  int replicas = 1;
  std::uint64_t master_seed = 1;
  std::optional<double> grid_step;     // driver-time units
  bool allow_degenerate = false;       // build through degenerate thetas
  std::string name;                    // label echoed into artifacts

  void validate() const;  // ValidationError naming the offending field
  double driver_horizon() const { return 2.0 * T / (epsilon * epsilon); }
  // Default keeps the grid error negligible against the eps-scale of the
  // functional (the integrand is Lipschitz in X on the sqrt(step) scale).
  double effective_grid_step() const {
    return grid_step ? *grid_step
                     : std::min(1e-3, epsilon * epsilon / 20.0);
  }
  std::vector<double> out_times() const;
};

// Exact integration of the staircase: the integral over [0, 2t/eps^2] is a
// finite sum of segment overlaps times unit-modulus phases. No quadrature
// error; the only rounding is in the compensated summation.
ComplexPath integrate_exact(const PathSample& path, double theta,
                            double c_theta, double epsilon,
                            std::span<const double> out_times);

// Same sum over a grid staircase (left-point rule). The discretization error
// of the underlying path is O(sqrt(step)) in RMS for diffusive drivers.
ComplexPath integrate_grid(const PathSample& path, double theta,
                           double c_theta, double epsilon,
                           std::span<const double> out_times);

// One replica of the scalar approximation: classify theta, compute c(theta),
// sample the driver on [0, 2T/eps^2], integrate. RealDegenerate thetas build
// normally and carry the tag; NullDegenerate and Inadmissible ones refuse
// unless allow_degenerate is set, in which case c := 0 whenever a(theta) is
// below tolerance (the only consistent extension: the approximation then
// collapses to the zero path).
ComplexPath build_approximation(const ExperimentConfig& config,
                                std::uint64_t replica_index);

// m components sharing ONE driver realization per replica; component j is
// bitwise-identical to the scalar build with theta_j on the same seed.
std::vector<ComplexPath> build_approximation_md(const ExperimentConfig& config,
                                                std::uint64_t replica_index);

}  // namespace levybm
