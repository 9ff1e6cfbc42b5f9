#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "txgeo/core.hpp"
#include "txgeo/empirical.hpp"

namespace txgeo {

inline constexpr double kEarthRadiusKm = 6371.0088;

/// Great-circle distance in km on the mean-radius sphere.
double haversine_km(const geo_point& a, const geo_point& b);

/// One sample per record: sender-receiver distance.
empirical_distribution distance_distribution(const dataset& ds);

struct waiting_time_result {
  empirical_distribution dist; // seconds
  std::uint64_t unresolved_refs = 0;
};

/// UTXO idle times: spender timestamp minus creator timestamp, one sample per
/// resolvable input reference. Refs to unknown tx ids are counted and
/// skipped. Throws negative_waiting_time_error when a spend precedes its
/// input's creation.
waiting_time_result waiting_times(const dataset& ds);

/// Pearson product-moment correlation. Throws length_mismatch_error on
/// unequal or short series, zero_variance_error on a constant series.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct correlation_entry {
  std::optional<double> r;
  std::string error; // set when the entry's pearson failed
};

/// Named correlations: value_distance, sender_lat_distance and, when UTXO
/// linkage exists, distance_waiting_time. Per-entry errors are reported, not
/// thrown.
std::map<std::string, correlation_entry> correlation_report(const dataset& ds);

struct daily_bucket {
  std::int64_t day_start; // UTC midnight, Unix seconds
  std::uint64_t count;
};

using activity_filter = std::variant<std::monostate, std::string, continent>;

/// Per-UTC-day sent-transaction counts over the dataset window (every day in
/// the window appears, zeros included). The filter restricts to senders with
/// a matching country code or continent.
std::vector<daily_bucket> daily_activity(const dataset& ds, const activity_filter& filter = {});

std::string format_utc_date(std::int64_t unix_seconds); // YYYY-MM-DD

struct histogram2d {
  std::vector<double> x_edges;
  std::vector<double> y_edges;
  std::vector<std::vector<std::uint64_t>> counts; // [x bin][y bin]
  bool log_y = false;
  std::uint64_t total = 0;
};

enum class heatmap_field { waiting_time, value };

/// Joint counts of (distance, waiting time | value) pairs. The y axis
/// switches to logarithmic edges when positive y values span more than three
/// decades; nonpositive y values cannot be binned on a log axis and are
/// dropped from the total.
histogram2d heatmap(const dataset& ds, heatmap_field y_field, std::size_t x_bins,
                    std::size_t y_bins);

} // namespace txgeo
