#include "levybm/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "levybm/errors.hpp"

namespace levybm {

namespace {

// Inverse-CDF pick over atom masses. cum holds the normalized cumulative
// weights, cum.back() == 1.
std::size_t pick_atom(const std::vector<double>& cum, double u) {
  auto it = std::lower_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) return cum.size() - 1;
  return static_cast<std::size_t>(it - cum.begin());
}

void check_horizon(double horizon) {
  if (!(horizon > 0.0))
    throw HorizonTooShort("sampling horizon must be positive, got " +
                          std::to_string(horizon));
}

}  // namespace

PathSample sample_exact_jump(double rate, const std::vector<Atom>& jump_law,
                             double horizon, SamplerSeed seed) {
  check_horizon(horizon);
  if (!(rate >= 0.0)) throw InvalidTriplet("jump rate must be >= 0");

  PathSample out;
  out.horizon = horizon;
  out.exactness = Exactness::ExactJump;
  out.breakpoints.push_back(0.0);
  out.values.push_back(0.0);
  if (rate == 0.0) return out;
  if (jump_law.empty())
    throw InvalidTriplet("positive jump rate with an empty jump law");

  std::vector<double> cum;
  cum.reserve(jump_law.size());
  double total = 0.0;
  for (const Atom& a : jump_law) total += a.mass;
  double acc = 0.0;
  for (const Atom& a : jump_law) {
    acc += a.mass / total;
    cum.push_back(acc);
  }
  cum.back() = 1.0;
  const bool single = jump_law.size() == 1;

  RngStream rng(seed);
  out.breakpoints.reserve(static_cast<std::size_t>(rate * horizon * 1.25) + 8);
  out.values.reserve(out.breakpoints.capacity());
  double t = 0.0;
  double level = 0.0;
  for (;;) {
    t += rng.exponential(rate);
    if (t >= horizon) break;
    double size =
        single ? jump_law[0].x : jump_law[pick_atom(cum, rng.uniform())].x;
    level += size;
    out.breakpoints.push_back(t);
    out.values.push_back(level);
  }
  return out;
}

PathSample sample_grid(const LevyTriplet& triplet, double horizon, double step,
                       SamplerSeed seed) {
  check_horizon(horizon);
  if (!(step > 0.0)) throw StepTooCoarse("grid step must be positive");
  if (step > horizon)
    throw StepTooCoarse("grid step " + std::to_string(step) +
                        " exceeds the horizon " + std::to_string(horizon));
  if (triplet.measure.density)
    throw UnsampleableFamily(
        "density-specified jump measures have no exact sampler; "
        "only finite-activity families are supported");

  RngStream rng(seed);

  // Jump skeleton first, so the continuous part's draws do not depend on
  // whether jumps are present at a given rate.
  std::vector<double> jump_times;
  std::vector<double> jump_sizes;
  const double rate = triplet.measure.total_atom_mass();
  if (rate > 0.0) {
    std::vector<double> cum;
    cum.reserve(triplet.measure.atoms.size());
    double acc = 0.0;
    for (const Atom& a : triplet.measure.atoms) {
      acc += a.mass / rate;
      cum.push_back(acc);
    }
    cum.back() = 1.0;
    const bool single = triplet.measure.atoms.size() == 1;
    double t = 0.0;
    for (;;) {
      t += rng.exponential(rate);
      if (t >= horizon) break;
      jump_times.push_back(t);
      jump_sizes.push_back(single
                               ? triplet.measure.atoms[0].x
                               : triplet.measure.atoms[pick_atom(cum, rng.uniform())].x);
    }
  }

  const bool stable = triplet.family == Family::SymmetricStable;
  const double sigma = triplet.sigma;
  const double mu = stable ? 0.0 : triplet.pathwise_drift();
  const std::size_t n_cells =
      static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));

  PathSample out;
  out.horizon = horizon;
  out.exactness = Exactness::GridApprox;
  out.grid_step = step;
  out.breakpoints.reserve(n_cells + jump_times.size() + 1);
  out.values.reserve(out.breakpoints.capacity());
  out.breakpoints.push_back(0.0);
  out.values.push_back(0.0);

  double cont_level = 0.0;  // continuous part, held at the left cell edge
  double jump_level = 0.0;
  std::size_t next_jump = 0;
  for (std::size_t k = 0; k < n_cells; ++k) {
    const double cell_start = static_cast<double>(k) * step;
    const double cell_end =
        std::min(static_cast<double>(k + 1) * step, horizon);
    const double dt = cell_end - cell_start;

    if (k > 0) {
      // Level on [cell_start, ...) includes the increment accumulated over
      // the previous cells only (left-point convention).
      if (out.breakpoints.back() == cell_start) {
        out.values.back() = cont_level + jump_level;
      } else {
        out.breakpoints.push_back(cell_start);
        out.values.push_back(cont_level + jump_level);
      }
    }
    // Jumps inside this cell take effect at their exact times.
    while (next_jump < jump_times.size() && jump_times[next_jump] < cell_end) {
      if (jump_times[next_jump] > cell_start) {
        jump_level += jump_sizes[next_jump];
        out.breakpoints.push_back(jump_times[next_jump]);
        out.values.push_back(cont_level + jump_level);
      } else {
        // Collision with the cell edge (measure zero, but be exact anyway).
        jump_level += jump_sizes[next_jump];
        out.values.back() = cont_level + jump_level;
      }
      ++next_jump;
    }

    if (stable) {
      const StableParams& sp = *triplet.stable;
      cont_level += std::pow(sp.scale * dt, 1.0 / sp.alpha) *
                    rng.symmetric_stable(sp.alpha);
    } else {
      double inc = mu * dt;
      if (sigma > 0.0) inc += sigma * std::sqrt(dt) * rng.gaussian();
      cont_level += inc;
    }
  }
  return out;
}

PathSample sample_path(const LevyTriplet& triplet, double horizon,
                       SamplerSeed seed, std::optional<double> step) {
  check_horizon(horizon);
  triplet.validate();
  if (triplet.measure.density)
    throw UnsampleableFamily(
        "density-specified jump measures have no exact sampler; "
        "only finite-activity families are supported");

  const bool pure_jump = triplet.family != Family::SymmetricStable &&
                         triplet.sigma == 0.0 &&
                         triplet.pathwise_drift() == 0.0;
  if (pure_jump)
    return sample_exact_jump(triplet.measure.total_atom_mass(),
                             triplet.measure.atoms, horizon, seed);

  if (!step)
    throw StepTooCoarse(
        "this family needs a grid step (no exact skeleton exists)");
  return sample_grid(triplet, horizon, *step, seed);
}

}  // namespace levybm
