#include "txgeo/stat_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "txgeo/errors.hpp"

namespace txgeo {

namespace {

// One-sample K-S distance between the tail (sorted, >= xmin) and the fitted
// law F(x) = 1 - (x/xmin)^-(alpha-1).
double tail_ks_distance(const double* tail, std::size_t n, double xmin, double alpha) {
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = 1.0 - std::pow(tail[i] / xmin, -(alpha - 1.0));
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    d = std::max(d, std::max(std::abs(f - lo), std::abs(f - hi)));
  }
  return d;
}

double hill_alpha(const double* tail, std::size_t n, double xmin) {
  double log_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) log_sum += std::log(tail[i] / xmin);
  if (log_sum <= 0.0) return 0.0; // no spread above xmin
  return 1.0 + static_cast<double>(n) / log_sum;
}

power_law_fit fit_mle(const std::vector<double>& sorted, const fit_options& opts) {
  // candidate xmins: unique sample values >= floor, quantile-thinned
  std::vector<double> uniq;
  uniq.reserve(sorted.size());
  for (double v : sorted) {
    if (v < opts.xmin_floor) continue;
    if (uniq.empty() || v != uniq.back()) uniq.push_back(v);
  }
  if (uniq.size() > 1) uniq.pop_back(); // the max alone can never anchor a tail
  if (uniq.empty()) throw insufficient_samples_error("no xmin candidate above the floor");

  std::vector<double> candidates;
  if (uniq.size() <= opts.max_xmin_candidates) {
    candidates = uniq;
  } else {
    candidates.reserve(opts.max_xmin_candidates);
    for (std::size_t i = 0; i < opts.max_xmin_candidates; ++i) {
      std::size_t idx = i * (uniq.size() - 1) / (opts.max_xmin_candidates - 1);
      if (candidates.empty() || uniq[idx] != candidates.back()) candidates.push_back(uniq[idx]);
    }
  }

  power_law_fit best;
  double best_d = -1.0;
  for (double xmin : candidates) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), xmin);
    const std::size_t n_tail = static_cast<std::size_t>(sorted.end() - it);
    if (n_tail < 10) continue;
    const double alpha = hill_alpha(&*it, n_tail, xmin);
    if (alpha <= 0.0) continue; // degenerate tail
    const double d = tail_ks_distance(&*it, n_tail, xmin, alpha);
    // min by (distance, then smaller xmin); candidates scan in ascending
    // xmin so strict < keeps the smaller one on ties
    if (best_d < 0.0 || d < best_d) {
      best_d = d;
      best = {alpha, xmin, n_tail, fit_method::mle};
    }
  }
  if (best_d < 0.0) throw insufficient_samples_error("no viable tail (need >= 10 samples with spread above xmin)");
  return best;
}

power_law_fit fit_regression(const std::vector<double>& sorted, const fit_options& opts) {
  const double lo = sorted.front();
  const double hi = sorted.back();
  if (hi <= lo) throw insufficient_samples_error("all samples equal");

  const std::size_t bins = std::max<std::size_t>(opts.regression_bins, 3);
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / static_cast<double>(bins);

  std::vector<std::size_t> counts(bins, 0);
  for (double v : sorted) {
    auto b = static_cast<std::size_t>((std::log(v) - llo) / step);
    counts[std::min(b, bins - 1)]++;
  }

  // density per bin regressed against the geometric bin midpoint
  std::vector<double> lx, ly;
  for (std::size_t b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    const double e0 = std::exp(llo + step * static_cast<double>(b));
    const double e1 = std::exp(llo + step * static_cast<double>(b + 1));
    lx.push_back(0.5 * (std::log(e0) + std::log(e1)));
    ly.push_back(std::log(static_cast<double>(counts[b]) / (e1 - e0)));
  }
  if (lx.size() < 3) throw insufficient_samples_error("fewer than 3 occupied log bins");

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;

  power_law_fit fit;
  fit.alpha = -slope;
  fit.xmin = lo;
  fit.n_tail = sorted.size();
  fit.method = fit_method::loglog_regression;
  return fit;
}

} // namespace

power_law_fit fit_power_law(const empirical_distribution& samples, const fit_options& opts) {
  const auto& sorted = samples.samples();
  if (!sorted.empty() && sorted.front() <= 0.0) throw non_positive_sample_error();
  if (sorted.size() < 50) throw insufficient_samples_error("need >= 50 positive samples");
  return opts.method == fit_method::mle ? fit_mle(sorted, opts) : fit_regression(sorted, opts);
}

namespace {

// Exact sup distance between the two ECDFs, evaluated at every sample point
// of the merged sequence.
double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n1 = a.size(), n2 = b.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < n1 || j < n2) {
    const double x = (j >= n2 || (i < n1 && a[i] <= b[j])) ? a[i] : b[j];
    while (i < n1 && a[i] == x) ++i;
    while (j < n2 && b[j] == x) ++j;
    const double diff = std::abs(static_cast<double>(i) / static_cast<double>(n1) -
                                 static_cast<double>(j) / static_cast<double>(n2));
    d = std::max(d, diff);
  }
  return d;
}

double asymptotic_p(double d, double n_eff) {
  const double t = 2.0 * n_eff * d * d;
  if (t == 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1;; ++k) {
    const double term = std::exp(-t * static_cast<double>(k) * static_cast<double>(k));
    if (term < 1e-12) break;
    sum += sign * term;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Exact P(D >= d) by counting monotone lattice paths that stay strictly
// inside the band |i/n1 - j/n2| < d, normalized by C(n1+n2, n1). Assumes no
// cross-sample ties (continuous data).
double exact_p(double d, std::size_t n1, std::size_t n2) {
  const double eps = 1e-12;
  std::vector<double> col(n2 + 1, 0.0);
  auto inside = [&](std::size_t i, std::size_t j) {
    return std::abs(static_cast<double>(i) / static_cast<double>(n1) -
                    static_cast<double>(j) / static_cast<double>(n2)) < d - eps;
  };
  col[0] = 1.0;
  for (std::size_t j = 1; j <= n2; ++j) col[j] = inside(0, j) ? col[j - 1] : 0.0;
  for (std::size_t i = 1; i <= n1; ++i) {
    col[0] = inside(i, 0) ? col[0] : 0.0;
    for (std::size_t j = 1; j <= n2; ++j) col[j] = inside(i, j) ? col[j] + col[j - 1] : 0.0;
  }
  double log_binom = 0.0;
  for (std::size_t k = 1; k <= n2; ++k)
    log_binom += std::log(static_cast<double>(n1 + k)) - std::log(static_cast<double>(k));
  const double p_inside = col[n2] > 0.0 ? std::exp(std::log(col[n2]) - log_binom) : 0.0;
  return std::clamp(1.0 - p_inside, 0.0, 1.0);
}

} // namespace

ks_result ks_two_sample(const empirical_distribution& a, const empirical_distribution& b,
                        const ks_options& opts) {
  if (a.empty() || b.empty()) throw empty_sample_error();
  ks_result r;
  r.n1 = a.size();
  r.n2 = b.size();
  r.d_statistic = ks_distance(a.samples(), b.samples());
  const double n_eff = static_cast<double>(r.n1) * static_cast<double>(r.n2) /
                       static_cast<double>(r.n1 + r.n2);
  if (opts.exact_p && r.n1 * r.n2 <= 10'000)
    r.p_value = exact_p(r.d_statistic, r.n1, r.n2);
  else
    r.p_value = asymptotic_p(r.d_statistic, n_eff);
  return r;
}

} // namespace txgeo
