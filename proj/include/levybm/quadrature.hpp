#pragma once

#include <cstddef>
#include <functional>

namespace levybm {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_depth = 48;
  std::size_t max_evals = 4'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;       // accumulated error estimate
  std::size_t evals = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod 7-15 on [a, b] with global error control: the
// worst panel is split until the summed error estimate meets the tolerance.
// Integrable endpoint behaviour is fine (no endpoint evaluations, and global
// control keeps refining the singular corner); non-integrable behaviour or
// an empty interval (b <= a) yields value 0, the latter by convention.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureOptions& opt = {});

// Same, but throws QuadratureFailure when the tolerance cannot be met.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureOptions& opt = {});

}  // namespace levybm
