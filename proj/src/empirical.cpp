#include "txgeo/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace txgeo {

std::string to_string(sample_unit u) {
  switch (u) {
    case sample_unit::km: return "km";
    case sample_unit::seconds: return "seconds";
    case sample_unit::btc: return "BTC";
    case sample_unit::count: return "count";
  }
  return "?";
}

empirical_distribution::empirical_distribution(std::vector<double> samples, sample_unit unit)
    : samples_(std::move(samples)), unit_(unit) {
  for (double v : samples_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite sample");
  }
  std::sort(samples_.begin(), samples_.end());
}

double empirical_distribution::ecdf(double x) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double empirical_distribution::quantile(double q) const {
  if (samples_.empty()) throw std::out_of_range("quantile of empty distribution");
  if (q <= 0) return samples_.front();
  if (q >= 1) return samples_.back();
  double pos = q * static_cast<double>(samples_.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= samples_.size()) return samples_.back();
  return samples_[lo] + frac * (samples_[lo + 1] - samples_[lo]);
}

double empirical_distribution::mean() const {
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
         static_cast<double>(samples_.size());
}

double empirical_distribution::median() const {
  std::size_t n = samples_.size();
  if (n % 2 == 1) return samples_[n / 2];
  return 0.5 * (samples_[n / 2 - 1] + samples_[n / 2]);
}

summary_stats summarize(const empirical_distribution& dist) {
  summary_stats s;
  s.count = dist.size();
  if (s.count == 0) return s;
  s.mean = dist.mean();
  s.median = dist.median();
  s.min = dist.min();
  s.max = dist.max();
  return s;
}

} // namespace txgeo
