#include "levybm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "levybm/errors.hpp"

namespace levybm {

namespace {

// Jackknife SE from precomputed leave-one-out values of the statistic.
double jackknife_se(std::span<const double> loo) {
  const double n = static_cast<double>(loo.size());
  long double s1 = 0.0L;
  for (double v : loo) s1 += v;
  const double m = static_cast<double>(s1 / n);
  long double s2 = 0.0L;
  for (double v : loo) s2 += (v - m) * (static_cast<long double>(v) - m);
  return std::sqrt((n - 1.0) / n * static_cast<double>(s2));
}

std::size_t grid_index(const ComplexPath& path, double t) {
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  for (std::size_t i = 0; i < path.times.size(); ++i)
    if (std::abs(path.times[i] - t) <= tol) return i;
  throw GridMismatch("time " + std::to_string(t) +
                     " is not on the output grid");
}

void check_shared_grid(std::span<const ComplexPath> paths) {
  if (paths.empty()) throw TooFewSamples("no paths given");
  const std::size_t n = paths[0].times.size();
  for (const ComplexPath& p : paths)
    if (p.times.size() != n)
      throw GridMismatch("paths do not share an output grid");
}

}  // namespace

Estimate mean_estimate(std::span<const double> xs) {
  if (xs.empty()) throw TooFewSamples("mean of an empty sample");
  const double n = static_cast<double>(xs.size());
  long double s1 = 0.0L;
  for (double x : xs) s1 += x;
  const double m = static_cast<double>(s1 / n);
  long double s2 = 0.0L;
  for (double x : xs) s2 += (x - m) * (static_cast<long double>(x) - m);
  double se = xs.size() > 1
                  ? std::sqrt(static_cast<double>(s2) / (n * (n - 1.0)))
                  : 0.0;
  return {m, se};
}

Estimate covariance_estimate(std::span<const double> xs,
                             std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw GridMismatch("covariance samples differ in length");
  if (n < 3) throw TooFewSamples("covariance needs at least 3 samples");
  const double nn = static_cast<double>(n);
  long double s_x = 0.0L, s_y = 0.0L, s_xy = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    s_x += xs[i];
    s_y += ys[i];
    s_xy += static_cast<long double>(xs[i]) * ys[i];
  }
  Estimate out;
  out.value = static_cast<double>((s_xy - s_x * s_y / nn) / (nn - 1.0));

  // Leave-one-out closed forms from the accumulated sums.
  std::vector<double> loo(n);
  const double n1 = nn - 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double mx = (s_x - xs[i]) / n1;
    const long double my = (s_y - ys[i]) / n1;
    loo[i] = static_cast<double>(
        (s_xy - static_cast<long double>(xs[i]) * ys[i] - n1 * mx * my) /
        (n1 - 1.0));
  }
  out.se = jackknife_se(loo);
  return out;
}

Estimate variance_estimate(std::span<const double> xs) {
  return covariance_estimate(xs, xs);
}

MomentEstimates estimate_endpoint_moments(
    std::span<const std::complex<double>> samples) {
  const std::size_t n = samples.size();
  if (n < 100)
    throw TooFewSamples("endpoint moments need at least 100 samples, got " +
                        std::to_string(n));

  std::vector<double> re(n), im(n), abs4(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = samples[i].real();
    im[i] = samples[i].imag();
    const double a2 = std::norm(samples[i]);
    abs4[i] = a2 * a2;
  }

  MomentEstimates out;
  out.n = n;
  out.mean_re = mean_estimate(re);
  out.mean_im = mean_estimate(im);
  out.fourth_abs_moment = mean_estimate(abs4);
  out.var_re = variance_estimate(re);
  out.var_im = variance_estimate(im);
  out.cov_re_im = covariance_estimate(re, im);
  return out;
}

Estimate tightness_ratio(std::span<const ComplexPath> paths, double s,
                         double t) {
  check_shared_grid(paths);
  if (!(s < t)) throw GridMismatch("tightness window is empty (need s < t)");
  const std::size_t is = grid_index(paths[0], s);
  const std::size_t it = grid_index(paths[0], t);
  const double w2 = (t - s) * (t - s);
  std::vector<double> u(paths.size());
  for (std::size_t r = 0; r < paths.size(); ++r) {
    const double dr = paths[r].re[it] - paths[r].re[is];
    const double di = paths[r].im[it] - paths[r].im[is];
    u[r] = (dr * dr * dr * dr + di * di * di * di) / w2;
  }
  return mean_estimate(u);
}

QvEstimates quadratic_variation_check(std::span<const ComplexPath> paths,
                                      std::span<const double> partition) {
  check_shared_grid(paths);
  if (partition.size() < 2)
    throw GridMismatch("partition needs at least two points");
  std::vector<std::size_t> idx(partition.size());
  for (std::size_t i = 0; i < partition.size(); ++i) {
    idx[i] = grid_index(paths[0], partition[i]);
    if (i > 0 && idx[i] <= idx[i - 1])
      throw GridMismatch("partition times must be strictly increasing");
  }

  // For fixed epsilon the approximation is Lipschitz, so over cells much
  // narrower than eps^2 the measured QV collapses to the pathwise value 0
  // rather than the limit's t - s. The claim being checked holds for a fixed
  // partition as eps -> 0; refuse partitions on the wrong side of that order
  // of limits.
  const double eps = paths[0].meta.epsilon;
  const double min_width = 2.0 * eps * eps;
  for (std::size_t i = 1; i < partition.size(); ++i) {
    const double w = partition[i] - partition[i - 1];
    if (w < min_width)
      throw PartitionTooFine(
          "cell [" + std::to_string(partition[i - 1]) + ", " +
          std::to_string(partition[i]) + ") has width " + std::to_string(w) +
          " < 2 eps^2 = " + std::to_string(min_width) +
          "; at fixed epsilon such cells see the Lipschitz path, not the limit");
  }

  std::vector<double> qr(paths.size()), qi(paths.size()), qc(paths.size());
  for (std::size_t r = 0; r < paths.size(); ++r) {
    double a = 0.0, b = 0.0, c = 0.0;
    for (std::size_t i = 1; i < idx.size(); ++i) {
      const double dr = paths[r].re[idx[i]] - paths[r].re[idx[i - 1]];
      const double di = paths[r].im[idx[i]] - paths[r].im[idx[i - 1]];
      a += dr * dr;
      b += di * di;
      c += dr * di;
    }
    qr[r] = a;
    qi[r] = b;
    qc[r] = c;
  }
  QvEstimates out;
  out.sum_re2 = mean_estimate(qr);
  out.sum_im2 = mean_estimate(qi);
  out.cross = mean_estimate(qc);
  out.s = partition.front();
  out.t = partition.back();
  out.cells = partition.size() - 1;
  return out;
}

std::string to_string(TestFunction f) {
  switch (f) {
    case TestFunction::One: return "one";
    case TestFunction::ClampedRe: return "clamped_re";
    case TestFunction::ClampedIm: return "clamped_im";
  }
  return "one";
}

OrthogonalityEstimates martingale_orthogonality(
    std::span<const ComplexPath> paths, double s, double t, TestFunction phi) {
  check_shared_grid(paths);
  if (paths.size() < 100)
    throw TooFewSamples("orthogonality proxy needs at least 100 paths");
  if (!(s < t)) throw GridMismatch("need s < t");
  const std::size_t is = grid_index(paths[0], s);
  const std::size_t it = grid_index(paths[0], t);

  std::vector<double> u(paths.size()), v(paths.size());
  for (std::size_t r = 0; r < paths.size(); ++r) {
    double w = 1.0;
    if (phi == TestFunction::ClampedRe)
      w = std::clamp(paths[r].re[is], -5.0, 5.0);
    else if (phi == TestFunction::ClampedIm)
      w = std::clamp(paths[r].im[is], -5.0, 5.0);
    u[r] = w * (paths[r].re[it] - paths[r].re[is]);
    v[r] = w * (paths[r].im[it] - paths[r].im[is]);
  }
  OrthogonalityEstimates out;
  out.re_part = mean_estimate(u);
  out.im_part = mean_estimate(v);
  out.phi = phi;
  out.s = s;
  out.t = t;
  return out;
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Dual series, fast and accurate at small lambda where the direct one
    // alternates badly.
    const double f = std::numbers::pi / lambda;
    const double x = std::exp(-f * f / 8.0);
    double cdf = 0.0;
    for (int k = 1; k <= 20; k += 2)
      cdf += std::pow(x, static_cast<double>(k) * k);
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

namespace {

KsResult ks_against_cdf(std::vector<double> xs,
                        const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  KsResult out;
  out.stat = d;
  out.n = xs.size();
  out.p_value = kolmogorov_q(std::sqrt(n) * d);
  return out;
}

}  // namespace

KsResult ks_normal(std::span<const double> samples, double variance) {
  if (samples.size() < 500)
    throw TooFewSamples("KS test needs at least 500 samples, got " +
                        std::to_string(samples.size()));
  if (!(variance > 0.0))
    throw ValidationError("KS variance target must be positive");
  const double sd = std::sqrt(variance);
  std::vector<double> xs(samples.begin(), samples.end());
  return ks_against_cdf(std::move(xs),
                        [sd](double x) { return normal_cdf(x / sd); });
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw TooFewSamples("empty sample");
  std::vector<double> xs(a.begin(), a.end());
  std::vector<double> ys(b.begin(), b.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    // Advance both scans past the whole tie group before measuring: the two
    // ecdfs only genuinely differ between distinct sample values.
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  KsResult out;
  out.stat = d;
  out.n = xs.size() + ys.size();
  out.p_value = kolmogorov_q(std::sqrt(na * nb / (na + nb)) * d);
  return out;
}

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw ValidationError("gamma_q needs a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_cf(a, x), 0.0, 1.0);
}

ChiSquareResult chi_square_poisson_fit(std::span<const std::size_t> counts,
                                       double lambda_target,
                                       double min_expected) {
  if (counts.size() < 100)
    throw TooFewSamples("chi-square fit needs at least 100 observations");
  if (!(lambda_target > 0.0))
    throw ValidationError("Poisson rate target must be positive");

  std::size_t max_count = 0;
  for (std::size_t c : counts) max_count = std::max(max_count, c);
  std::vector<double> observed(max_count + 1, 0.0);
  for (std::size_t c : counts) observed[c] += 1.0;

  const double n = static_cast<double>(counts.size());
  std::vector<double> expected(max_count + 1);
  double pmf = std::exp(-lambda_target);  // P(0)
  double cum = 0.0;
  for (std::size_t k = 0; k <= max_count; ++k) {
    if (k > 0) pmf *= lambda_target / static_cast<double>(k);
    expected[k] = n * pmf;
    cum += pmf;
  }
  // Everything beyond max_count goes into the top bin.
  expected[max_count] += n * (1.0 - cum);

  // Pool small-expectation bins from both ends toward the middle.
  std::vector<double> obs_b, exp_b;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t k = 0; k <= max_count; ++k) {
    o_acc += observed[k];
    e_acc += expected[k];
    if (e_acc >= min_expected) {
      obs_b.push_back(o_acc);
      exp_b.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0) {
    if (obs_b.empty()) {
      obs_b.push_back(o_acc);
      exp_b.push_back(e_acc);
    } else {
      obs_b.back() += o_acc;
      exp_b.back() += e_acc;
    }
  }
  if (obs_b.size() < 2)
    throw TooFewSamples("not enough occupied bins for a chi-square fit");

  double stat = 0.0;
  for (std::size_t k = 0; k < obs_b.size(); ++k) {
    const double diff = obs_b[k] - exp_b[k];
    stat += diff * diff / exp_b[k];
  }
  ChiSquareResult out;
  out.stat = stat;
  out.dof = obs_b.size() - 1;
  out.p_value = gamma_q(static_cast<double>(out.dof) / 2.0, stat / 2.0);
  return out;
}

}  // namespace levybm
