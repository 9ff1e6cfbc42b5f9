#include "txgeo/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace txgeo {

btc_amount btc_amount::from_btc(double btc) {
  return btc_amount{static_cast<std::int64_t>(std::llround(btc * kSatPerBtc))};
}

std::optional<btc_amount> btc_amount::parse(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-') {
    negative = true;
    pos = 1;
  }
  std::int64_t whole = 0;
  std::size_t digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    whole = whole * 10 + (text[pos] - '0');
    if (whole > kMaxSat) return std::nullopt;
    ++pos;
    ++digits;
  }
  std::int64_t frac = 0;
  std::size_t frac_digits = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (++frac_digits > 8) return std::nullopt;
      frac = frac * 10 + (text[pos] - '0');
      ++pos;
    }
    if (frac_digits == 0) return std::nullopt;
  }
  if (pos != text.size() || (digits == 0 && frac_digits == 0)) return std::nullopt;
  for (std::size_t i = frac_digits; i < 8; ++i) frac *= 10;
  std::int64_t sat = whole * kSatPerBtc + frac;
  if (sat > kMaxSat) return std::nullopt;
  return btc_amount{negative ? -sat : sat};
}

std::string btc_amount::to_string() const {
  std::int64_t s = sat;
  std::string sign;
  if (s < 0) {
    sign = "-";
    s = -s;
  }
  std::string out = sign + std::to_string(s / kSatPerBtc);
  std::int64_t frac = s % kSatPerBtc;
  if (frac != 0) {
    std::string f = std::to_string(frac);
    f.insert(0, 8 - f.size(), '0');
    while (f.back() == '0') f.pop_back();
    out += "." + f;
  }
  return out;
}

bool geo_point::valid() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
         lon >= -180.0 && lon <= 180.0;
}

user_group user_group::from_index(int i) {
  return user_group{static_cast<role>(i % 3), static_cast<continent>(i / 3)};
}

std::string to_string(continent c) {
  switch (c) {
    case continent::AM: return "AM";
    case continent::AS: return "AS";
    case continent::EU: return "EU";
  }
  return "??";
}

std::string to_string(role r) {
  switch (r) {
    case role::miner: return "MI";
    case role::merchant: return "ME";
    case role::user: return "US";
  }
  return "??";
}

std::string user_group::label() const { return to_string(r) + "-" + to_string(c); }

std::optional<user_group> user_group::parse(const std::string& label) {
  for (int i = 0; i < kNumGroups; ++i) {
    user_group g = from_index(i);
    if (g.label() == label) return g;
  }
  return std::nullopt;
}

const transaction_record* dataset::find_tx(const std::string& tx_id) const {
  auto it = tx_index_.find(tx_id);
  if (it == tx_index_.end()) return nullptr;
  return &records_[it->second];
}

dataset dataset_build(std::vector<transaction_record> records) {
  if (records.empty()) throw empty_dataset_error();

  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.tx_id < b.tx_id;
  });

  dataset ds;
  ds.records_ = std::move(records);
  ds.window_ = {ds.records_.front().timestamp, ds.records_.back().timestamp};

  ds.tx_index_.reserve(ds.records_.size());
  for (std::size_t i = 0; i < ds.records_.size(); ++i) {
    const auto& rec = ds.records_[i];
    if (!ds.tx_index_.emplace(rec.tx_id, i).second) throw duplicate_tx_id_error(rec.tx_id);
    ds.address_index_[rec.sender.address_id].push_back({i, tx_side::sender});
    ds.address_index_[rec.receiver.address_id].push_back({i, tx_side::receiver});
  }
  return ds;
}

} // namespace txgeo
