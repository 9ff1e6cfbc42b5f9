#include "txgeo/geo_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "txgeo/ingest.hpp"

namespace txgeo {

namespace {
constexpr double kDegToRad = 3.141592653589793238462643383279502884 / 180.0;
constexpr std::int64_t kSecondsPerDay = 86400;
} // namespace

double haversine_km(const geo_point& a, const geo_point& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlam = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2);
  const double s2 = std::sin(dlam / 2);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

empirical_distribution distance_distribution(const dataset& ds) {
  if (ds.size() == 0) throw empty_dataset_error();
  std::vector<double> samples;
  samples.reserve(ds.size());
  for (const auto& r : ds.records()) samples.push_back(haversine_km(r.sender.geo, r.receiver.geo));
  return {std::move(samples), sample_unit::km};
}

waiting_time_result waiting_times(const dataset& ds) {
  waiting_time_result result;
  std::vector<double> samples;
  for (const auto& r : ds.records()) {
    for (const auto& ref : r.inputs) {
      const transaction_record* creator = ds.find_tx(ref.tx_id);
      if (creator == nullptr) {
        ++result.unresolved_refs;
        continue;
      }
      std::int64_t dt = r.timestamp - creator->timestamp;
      if (dt < 0) throw negative_waiting_time_error(r.tx_id);
      samples.push_back(static_cast<double>(dt));
    }
  }
  result.dist = {std::move(samples), sample_unit::seconds};
  return result;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw length_mismatch_error();
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw zero_variance_error();
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

std::map<std::string, correlation_entry> correlation_report(const dataset& ds) {
  std::map<std::string, correlation_entry> out;

  std::vector<double> distance, value, sender_lat;
  distance.reserve(ds.size());
  for (const auto& r : ds.records()) {
    distance.push_back(haversine_km(r.sender.geo, r.receiver.geo));
    value.push_back(r.value.btc());
    sender_lat.push_back(r.sender.geo.lat);
  }

  auto put = [&out](const std::string& name, const std::vector<double>& a,
                    const std::vector<double>& b) {
    correlation_entry e;
    try {
      e.r = pearson(a, b);
    } catch (const error& err) {
      e.error = err.what();
    }
    out[name] = e;
  };

  put("value_distance", value, distance);
  put("sender_lat_distance", sender_lat, distance);

  // (distance, waiting time) pairs: each resolvable input contributes the
  // spending record's distance alongside its idle time
  std::vector<double> pair_dist, pair_wait;
  for (std::size_t i = 0; i < ds.records().size(); ++i) {
    const auto& r = ds.records()[i];
    for (const auto& ref : r.inputs) {
      const transaction_record* creator = ds.find_tx(ref.tx_id);
      if (creator == nullptr) continue;
      std::int64_t dt = r.timestamp - creator->timestamp;
      if (dt < 0) throw negative_waiting_time_error(r.tx_id);
      pair_dist.push_back(distance[i]);
      pair_wait.push_back(static_cast<double>(dt));
    }
  }
  if (!pair_dist.empty()) put("distance_waiting_time", pair_dist, pair_wait);

  return out;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

bool looks_like_iso_alpha2(const std::string& code) {
  return code.size() == 2 && code[0] >= 'A' && code[0] <= 'Z' && code[1] >= 'A' && code[1] <= 'Z';
}

} // namespace

std::vector<daily_bucket> daily_activity(const dataset& ds, const activity_filter& filter) {
  if (const auto* code = std::get_if<std::string>(&filter)) {
    if (!looks_like_iso_alpha2(*code)) throw unknown_country_code_error(*code);
  }

  auto matches = [&](const transaction_record& r) {
    if (std::holds_alternative<std::monostate>(filter)) return true;
    if (const auto* code = std::get_if<std::string>(&filter))
      return r.sender.country_code.has_value() && *r.sender.country_code == *code;
    const continent want = std::get<continent>(filter);
    return assign_continent(r.sender.geo) == want;
  };

  const std::int64_t first_day = floor_div(ds.window().start, kSecondsPerDay);
  const std::int64_t last_day = floor_div(ds.window().end, kSecondsPerDay);
  std::vector<daily_bucket> series;
  series.reserve(static_cast<std::size_t>(last_day - first_day + 1));
  for (std::int64_t d = first_day; d <= last_day; ++d)
    series.push_back({d * kSecondsPerDay, 0});
  for (const auto& r : ds.records()) {
    if (!matches(r)) continue;
    ++series[static_cast<std::size_t>(floor_div(r.timestamp, kSecondsPerDay) - first_day)].count;
  }
  return series;
}

std::string format_utc_date(std::int64_t unix_seconds) {
  // Howard Hinnant's civil_from_days
  std::int64_t z = floor_div(unix_seconds, kSecondsPerDay) + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  std::int64_t y = yoe + era * 400;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
  const std::int64_t m = mp + (mp < 10 ? 3 : -9);
  y += (m <= 2);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04lld-%02lld-%02lld", static_cast<long long>(y),
                static_cast<long long>(m), static_cast<long long>(d));
  return buf;
}

namespace {

std::vector<double> linear_edges(double lo, double hi, std::size_t bins) {
  if (hi <= lo) hi = lo + 1.0;
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  edges.back() = hi;
  return edges;
}

std::vector<double> log_edges(double lo, double hi, std::size_t bins) {
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    edges[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(bins));
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

// last bin closed on the right, others right-open
std::ptrdiff_t bin_of(const std::vector<double>& edges, double v) {
  if (v < edges.front() || v > edges.back()) return -1;
  if (v == edges.back()) return static_cast<std::ptrdiff_t>(edges.size()) - 2;
  auto it = std::upper_bound(edges.begin(), edges.end(), v);
  return (it - edges.begin()) - 1;
}

} // namespace

histogram2d heatmap(const dataset& ds, heatmap_field y_field, std::size_t x_bins,
                    std::size_t y_bins) {
  if (ds.size() == 0) throw empty_dataset_error();
  x_bins = std::max<std::size_t>(x_bins, 1);
  y_bins = std::max<std::size_t>(y_bins, 1);

  std::vector<std::pair<double, double>> pairs; // (distance, y)
  if (y_field == heatmap_field::value) {
    for (const auto& r : ds.records())
      pairs.emplace_back(haversine_km(r.sender.geo, r.receiver.geo), r.value.btc());
  } else {
    for (const auto& r : ds.records()) {
      const double d = haversine_km(r.sender.geo, r.receiver.geo);
      for (const auto& ref : r.inputs) {
        const transaction_record* creator = ds.find_tx(ref.tx_id);
        if (creator == nullptr) continue;
        std::int64_t dt = r.timestamp - creator->timestamp;
        if (dt < 0) throw negative_waiting_time_error(r.tx_id);
        pairs.emplace_back(d, static_cast<double>(dt));
      }
    }
  }

  histogram2d h;
  if (pairs.empty()) {
    h.x_edges = linear_edges(0, 1, x_bins);
    h.y_edges = linear_edges(0, 1, y_bins);
    h.counts.assign(x_bins, std::vector<std::uint64_t>(y_bins, 0));
    return h;
  }

  double x_lo = pairs[0].first, x_hi = pairs[0].first;
  double y_lo = pairs[0].second, y_hi = pairs[0].second;
  double y_pos_min = 0.0;
  for (const auto& [x, y] : pairs) {
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
    if (y > 0 && (y_pos_min == 0.0 || y < y_pos_min)) y_pos_min = y;
  }

  h.x_edges = linear_edges(x_lo, x_hi, x_bins);
  h.log_y = y_pos_min > 0.0 && y_hi / y_pos_min > 1e3;
  if (h.log_y) {
    double hi = y_hi > y_pos_min ? y_hi : y_pos_min * 2;
    h.y_edges = log_edges(y_pos_min, hi, y_bins);
  } else {
    h.y_edges = linear_edges(y_lo, y_hi, y_bins);
  }

  h.counts.assign(x_bins, std::vector<std::uint64_t>(y_bins, 0));
  for (const auto& [x, y] : pairs) {
    const std::ptrdiff_t xi = bin_of(h.x_edges, x);
    const std::ptrdiff_t yi = bin_of(h.y_edges, y);
    if (xi < 0 || yi < 0) continue; // nonpositive y on a log axis
    ++h.counts[static_cast<std::size_t>(xi)][static_cast<std::size_t>(yi)];
    ++h.total;
  }
  return h;
}

} // namespace txgeo
