#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "txgeo/core.hpp"

namespace txgeo {

/// Bounding rules mapping coordinates onto the three active continents.
/// The African box is checked first and is rejected rather than remapped;
/// everything west of -30 is AM; the European band is lat >= 35, lon in
/// [-30, 60); the remainder (including Oceania) is AS. Constants are
/// configurable; these defaults are what every tool uses.
struct continent_rules {
  double am_lon_max = -30.0;
  double eu_lat_min = 35.0;
  double eu_lon_max = 60.0;
  double africa_lat_min = -35.0;
  double africa_lat_max = 35.0;
  double africa_lon_min = -20.0;
  double africa_lon_max = 52.0;
  /// Records within this many degrees of a rule boundary are counted in
  /// IngestReport::near_boundary so coarse-rule artifacts can be audited.
  double boundary_margin = 2.0;

  bool in_africa_box(const geo_point& g) const;
  bool near_boundary(const geo_point& g) const;
};

/// Deterministic continent for a valid coordinate. Throws
/// unsupported_region_error inside the African box.
continent assign_continent(const geo_point& g, const continent_rules& rules = {});

enum class source_format { csv, jsonl };

enum class reject_reason {
  malformed_row,
  out_of_range_coordinate,
  negative_value,
  out_of_range_value,
  bad_timestamp,
  unsupported_region,
  empty_address,
  bad_inputs,
};

std::string to_string(reject_reason r);

struct ingest_report {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::map<reject_reason, std::uint64_t> rejection_reasons;
  std::uint64_t near_boundary = 0; // accepted records near a continent-rule edge
  time_window window;              // inferred over accepted records

  std::string summary() const;
};

struct parse_result {
  std::vector<transaction_record> records;
  ingest_report report;
};

/// Parses and validates one record per CSV row / JSON line. Malformed rows
/// are counted per reason, never fatal. Throws unreadable_source_error only
/// when the stream itself fails.
parse_result parse_records(std::istream& source, source_format format,
                           const continent_rules& rules = {});
parse_result parse_file(const std::string& path, const continent_rules& rules = {});

/// Header: tx_id,timestamp,value_btc,sender_address,sender_lat,sender_lon,
/// sender_country,receiver_address,receiver_lat,receiver_lon,
/// receiver_country,inputs
extern const char* const kCsvHeader;

/// Writers emit the exact format parse_records reads; floats are shortest
/// round-trip, amounts canonical decimal. parse(write(x)) == x field-for-field.
void write_csv(std::ostream& out, const std::vector<transaction_record>& records);
void write_jsonl(std::ostream& out, const std::vector<transaction_record>& records);

source_format format_from_name(const std::string& name); // "csv" | "jsonl"

} // namespace txgeo
