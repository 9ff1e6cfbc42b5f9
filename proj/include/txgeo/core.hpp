#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "txgeo/errors.hpp"

namespace txgeo {

// ---------------------------------------------------------------------------
// Amounts. Stored as integer satoshi (1 BTC = 1e8 sat) so threshold
// comparisons in the classifier are exact. 21e6 BTC cap keeps the BTC-double
// round trip lossless.

inline constexpr std::int64_t kSatPerBtc = 100'000'000;
inline constexpr std::int64_t kMaxSat = 21'000'000LL * kSatPerBtc;

struct btc_amount {
  std::int64_t sat = 0;

  double btc() const { return static_cast<double>(sat) / kSatPerBtc; }
  auto operator<=>(const btc_amount&) const = default;

  static btc_amount from_btc(double btc);

  /// Exact parse of a decimal BTC string ("12", "0.001", "1.00000001");
  /// at most 8 fractional digits. nullopt on malformed input.
  static std::optional<btc_amount> parse(const std::string& text);

  /// Canonical decimal string, trailing fraction zeros trimmed ("0.001", "12").
  /// parse(to_string(x)) == x for every valid amount.
  std::string to_string() const;
};

// ---------------------------------------------------------------------------
// Geography and endpoints.

struct geo_point {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const;
  bool operator==(const geo_point&) const = default;
};

struct endpoint {
  std::string address_id;
  geo_point geo;
  std::optional<std::string> country_code;
};

struct output_ref {
  std::string tx_id;
  std::uint32_t output_index = 0;
  bool operator==(const output_ref&) const = default;
};

struct transaction_record {
  std::string tx_id;
  std::int64_t timestamp = 0; // Unix seconds, UTC
  btc_amount value;
  endpoint sender;
  endpoint receiver;
  std::vector<output_ref> inputs; // empty means coinbase-like origin
};

// ---------------------------------------------------------------------------
// The nine Markov states: role x continent, indexed continent-major
// (AM, AS, EU) x (MI, ME, US) so matrices have a stable layout.

enum class continent : std::uint8_t { AM = 0, AS = 1, EU = 2 };
enum class role : std::uint8_t { miner = 0, merchant = 1, user = 2 };

inline constexpr int kNumGroups = 9;

struct user_group {
  role r = role::user;
  continent c = continent::AM;

  int index() const { return static_cast<int>(c) * 3 + static_cast<int>(r); }
  auto operator<=>(const user_group&) const = default;

  static user_group from_index(int i);
  /// "MI-AM", "ME-EU", "US-AS", ...
  std::string label() const;
  static std::optional<user_group> parse(const std::string& label);
};

inline std::array<user_group, kNumGroups> all_groups() {
  std::array<user_group, kNumGroups> g;
  for (int i = 0; i < kNumGroups; ++i) g[i] = user_group::from_index(i);
  return g;
}

std::string to_string(continent c);
std::string to_string(role r);

// ---------------------------------------------------------------------------
// Classification parameters.

struct param_triple {
  btc_amount val;   // miner send threshold, > 0
  int tx_miner = 1; // max participations for a miner, >= 1
  int tx_merch = 1; // min participations for a merchant, >= 1

  bool valid() const { return val.sat > 0 && tx_miner >= 1 && tx_merch >= 1; }
  auto operator<=>(const param_triple&) const = default;
};

// ---------------------------------------------------------------------------
// Dataset: records sorted by (timestamp, tx_id), plus lookup indices.
// Immutable after construction; safe for concurrent shared reads.

enum class tx_side : std::uint8_t { sender = 0, receiver = 1 };

struct participation {
  std::size_t record_index;
  tx_side side;
};

struct time_window {
  std::int64_t start = 0;
  std::int64_t end = 0;
};

class dataset {
public:
  const std::vector<transaction_record>& records() const { return records_; }
  const time_window& window() const { return window_; }

  const transaction_record* find_tx(const std::string& tx_id) const;
  const std::unordered_map<std::string, std::vector<participation>>& address_index() const {
    return address_index_;
  }

  std::size_t size() const { return records_.size(); }

private:
  friend dataset dataset_build(std::vector<transaction_record> records);

  std::vector<transaction_record> records_;
  time_window window_;
  std::unordered_map<std::string, std::size_t> tx_index_;
  std::unordered_map<std::string, std::vector<participation>> address_index_;
};

/// Sorts, validates and indexes records. Throws empty_dataset_error on empty
/// input and duplicate_tx_id_error on a repeated tx_id.
dataset dataset_build(std::vector<transaction_record> records);

} // namespace txgeo
