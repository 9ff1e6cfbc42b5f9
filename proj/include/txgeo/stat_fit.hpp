#pragma once

#include <cstddef>
#include <optional>

#include "txgeo/empirical.hpp"

namespace txgeo {

enum class fit_method { mle, loglog_regression };

struct power_law_fit {
  double alpha = 0.0; // density exponent: p(x) ~ x^-alpha
  double xmin = 0.0;
  std::size_t n_tail = 0;
  fit_method method = fit_method::mle;
};

struct fit_options {
  fit_method method = fit_method::mle;
  /// Lower bound on candidate xmin values (e.g. 2 for integer degree data).
  double xmin_floor = 0.0;
  /// Cap on xmin candidates; more unique values are thinned by quantile.
  std::size_t max_xmin_candidates = 100;
  std::size_t regression_bins = 30;
};

/// Fits p(x) ~ x^-alpha to the sample tail.
///
/// MLE: continuous Hill estimator alpha = 1 + n / sum(ln(x_i/xmin)), with
/// xmin selected by minimizing the one-sample K-S distance between the tail
/// and the fitted law over candidate xmins (unique sample values, quantile-
/// thinned to at most max_xmin_candidates).
///
/// LogLogRegression: least squares on log density vs log midpoint over
/// logarithmic bins; alpha = -slope.
///
/// Requires >= 50 strictly positive samples; a tail without spread (all
/// values equal) cannot be fitted.
power_law_fit fit_power_law(const empirical_distribution& samples, const fit_options& opts = {});

struct ks_result {
  double d_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

struct ks_options {
  /// Exact lattice-path p-value instead of the asymptotic series; available
  /// for n1*n2 <= 10^4 and assumes continuous data (no cross-sample ties).
  bool exact_p = false;
};

/// Two-sample Kolmogorov-Smirnov test. d is the exact sup-norm distance
/// between the two ECDFs; p comes from the asymptotic Kolmogorov series
/// p = 2 * sum_k (-1)^(k-1) exp(-2 k^2 n_eff d^2) with
/// n_eff = n1 n2 / (n1 + n2), truncated at terms < 1e-12 and clamped to
/// [0, 1].
ks_result ks_two_sample(const empirical_distribution& a, const empirical_distribution& b,
                        const ks_options& opts = {});

} // namespace txgeo
