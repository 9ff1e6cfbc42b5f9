#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace txgeo {

enum class sample_unit { km, seconds, btc, count };

std::string to_string(sample_unit u);

/// Sorted sample of finite reals; the common currency of every statistic in
/// this library. Construction sorts and rejects NaN/inf.
class empirical_distribution {
public:
  empirical_distribution() = default;
  empirical_distribution(std::vector<double> samples, sample_unit unit);

  const std::vector<double>& samples() const { return samples_; }
  sample_unit unit() const { return unit_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  /// Fraction of samples <= x.
  double ecdf(double x) const;
  /// Order-statistic quantile, linear interpolation between ranks; q in [0,1].
  double quantile(double q) const;

  double min() const { return samples_.front(); }
  double max() const { return samples_.back(); }
  double mean() const;
  double median() const;

private:
  std::vector<double> samples_;
  sample_unit unit_ = sample_unit::count;
};

struct summary_stats {
  double mean = 0.0;
  double median = 0.0;
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
};

summary_stats summarize(const empirical_distribution& dist);

} // namespace txgeo
