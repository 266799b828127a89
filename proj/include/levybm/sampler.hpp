#pragma once

#include <optional>
#include <vector>

#include "levybm/levy.hpp"
#include "levybm/rng.hpp"

namespace levybm {

enum class Exactness { ExactJump, GridApprox };

// One realization of the driver on [0, horizon], stored as a staircase:
// X(s) = values[k] for s in [breakpoints[k], breakpoints[k+1]), and
// values.back() from the last breakpoint up to the horizon. Exact for
// finite-activity jump processes; a left-point approximation otherwise.
struct PathSample {
  std::vector<double> breakpoints;  // strictly increasing, starts at 0
  std::vector<double> values;       // same length; values[0] = 0
  double horizon = 0.0;
  Exactness exactness = Exactness::ExactJump;
  double grid_step = 0.0;  // > 0 iff GridApprox

  std::size_t segments() const { return breakpoints.size(); }
};

// Exact event-driven sampler for a compound Poisson skeleton: exponential
// interarrivals at the given rate, sizes drawn from jump_law by inverse CDF.
// Stream discipline (relied on for reproducibility): one exponential per
// event, then one uniform for the size — except when jump_law has a single
// atom, where no size uniform is consumed.
PathSample sample_exact_jump(double rate, const std::vector<Atom>& jump_law,
                             double horizon, SamplerSeed seed);

// Grid sampler: per-cell increments N(mu*dt, sigma^2*dt) for the continuous
// part (or stable increments of scale (gamma*dt)^{1/alpha}), with any
// finite-activity jumps sampled exactly and merged into the breakpoint list.
// Stream discipline: jump skeleton first, then one draw per grid cell; cells
// with sigma = 0 (and no stable tag) consume nothing.
PathSample sample_grid(const LevyTriplet& triplet, double horizon, double step,
                       SamplerSeed seed);

// Dispatches to the exact sampler when the triplet is a finite-activity pure
// jump process (sigma = 0, no density, no slope between jumps), otherwise to
// the grid sampler, which requires a step.
PathSample sample_path(const LevyTriplet& triplet, double horizon,
                       SamplerSeed seed,
                       std::optional<double> step = std::nullopt);

}  // namespace levybm
