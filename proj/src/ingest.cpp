#include "txgeo/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace txgeo {

namespace {

bool near_line(double v, double line, double margin) { return std::abs(v - line) <= margin; }

// Opaque ids must stay representable in the CSV dialect (no quoting) and in
// the inputs list syntax.
bool id_ok(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (ch == ',' || ch == ';' || ch == ':' || ch == '"' || ch == '\n' || ch == '\r') return false;
  }
  return true;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_i64(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_u32(const std::string& s, std::uint32_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// "txid:0;txid:1" -> refs. Empty string means no inputs.
bool parse_inputs_field(const std::string& field, std::vector<output_ref>& out) {
  if (field.empty()) return true;
  for (const auto& part : split(field, ';')) {
    std::size_t pos = part.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == part.size()) return false;
    output_ref ref;
    ref.tx_id = part.substr(0, pos);
    if (!id_ok(ref.tx_id)) return false;
    if (!parse_u32(part.substr(pos + 1), ref.output_index)) return false;
    out.push_back(std::move(ref));
  }
  return true;
}

struct row_outcome {
  bool ok = false;
  reject_reason reason = reject_reason::malformed_row;
  transaction_record record;
};

row_outcome validate(transaction_record rec, const continent_rules& rules) {
  row_outcome out;
  if (!id_ok(rec.tx_id)) return out; // malformed_row
  if (!id_ok(rec.sender.address_id) || !id_ok(rec.receiver.address_id)) {
    out.reason = reject_reason::empty_address;
    return out;
  }
  if (!rec.sender.geo.valid() || !rec.receiver.geo.valid()) {
    out.reason = reject_reason::out_of_range_coordinate;
    return out;
  }
  if (rec.value.sat < 0) {
    out.reason = reject_reason::negative_value;
    return out;
  }
  if (rec.value.sat > kMaxSat) {
    out.reason = reject_reason::out_of_range_value;
    return out;
  }
  if (rules.in_africa_box(rec.sender.geo) || rules.in_africa_box(rec.receiver.geo)) {
    out.reason = reject_reason::unsupported_region;
    return out;
  }
  for (const auto& cc : {rec.sender.country_code, rec.receiver.country_code}) {
    if (cc && !id_ok(*cc)) {
      out.reason = reject_reason::malformed_row;
      return out;
    }
  }
  out.ok = true;
  out.record = std::move(rec);
  return out;
}

row_outcome parse_csv_row(const std::string& line, const continent_rules& rules) {
  row_outcome bad;
  auto fields = split(line, ',');
  if (fields.size() != 12) return bad;

  transaction_record rec;
  rec.tx_id = fields[0];
  if (!parse_i64(fields[1], rec.timestamp)) {
    bad.reason = reject_reason::bad_timestamp;
    return bad;
  }
  auto value = btc_amount::parse(fields[2]);
  if (!value) {
    // distinguish a syntactically valid negative from garbage
    if (!fields[2].empty() && fields[2][0] == '-') {
      auto mag = btc_amount::parse(fields[2].substr(1));
      if (mag) {
        bad.reason = reject_reason::negative_value;
        return bad;
      }
    }
    return bad;
  }
  rec.value = *value;
  rec.sender.address_id = fields[3];
  rec.receiver.address_id = fields[7];
  if (!parse_double(fields[4], rec.sender.geo.lat) || !parse_double(fields[5], rec.sender.geo.lon) ||
      !parse_double(fields[8], rec.receiver.geo.lat) ||
      !parse_double(fields[9], rec.receiver.geo.lon)) {
    bad.reason = reject_reason::out_of_range_coordinate;
    return bad;
  }
  if (!fields[6].empty()) rec.sender.country_code = fields[6];
  if (!fields[10].empty()) rec.receiver.country_code = fields[10];
  if (!parse_inputs_field(fields[11], rec.inputs)) {
    bad.reason = reject_reason::bad_inputs;
    return bad;
  }
  return validate(std::move(rec), rules);
}

row_outcome parse_json_row(const std::string& line, const continent_rules& rules) {
  row_outcome bad;
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (!j.is_object()) return bad;

  auto str = [&](const char* key, std::string& out) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return false;
    out = it->get<std::string>();
    return true;
  };
  auto num = [&](const char* key, double& out) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) return false;
    out = it->get<double>();
    return true;
  };

  transaction_record rec;
  if (!str("tx_id", rec.tx_id)) return bad;
  {
    auto it = j.find("timestamp");
    if (it == j.end() || !it->is_number_integer()) {
      bad.reason = reject_reason::bad_timestamp;
      return bad;
    }
    rec.timestamp = it->get<std::int64_t>();
  }
  {
    auto it = j.find("value_btc");
    if (it == j.end() || !it->is_number()) return bad;
    double v = it->get<double>();
    if (!std::isfinite(v)) return bad;
    if (v < 0) {
      bad.reason = reject_reason::negative_value;
      return bad;
    }
    double sat = v * kSatPerBtc;
    if (sat > static_cast<double>(kMaxSat) + 0.5) {
      bad.reason = reject_reason::out_of_range_value;
      return bad;
    }
    rec.value.sat = std::llround(sat);
  }
  if (!str("sender_address", rec.sender.address_id) ||
      !str("receiver_address", rec.receiver.address_id)) {
    bad.reason = reject_reason::empty_address;
    return bad;
  }
  if (!num("sender_lat", rec.sender.geo.lat) || !num("sender_lon", rec.sender.geo.lon) ||
      !num("receiver_lat", rec.receiver.geo.lat) || !num("receiver_lon", rec.receiver.geo.lon)) {
    bad.reason = reject_reason::out_of_range_coordinate;
    return bad;
  }
  for (auto [key, slot] : {std::pair{"sender_country", &rec.sender.country_code},
                           std::pair{"receiver_country", &rec.receiver.country_code}}) {
    auto it = j.find(key);
    if (it != j.end() && it->is_string() && !it->get<std::string>().empty())
      *slot = it->get<std::string>();
  }
  if (auto it = j.find("inputs"); it != j.end()) {
    if (!it->is_array()) {
      bad.reason = reject_reason::bad_inputs;
      return bad;
    }
    for (const auto& e : *it) {
      if (!e.is_object() || !e.contains("tx_id") || !e["tx_id"].is_string() ||
          !e.contains("output_index") || !e["output_index"].is_number_unsigned()) {
        bad.reason = reject_reason::bad_inputs;
        return bad;
      }
      rec.inputs.push_back({e["tx_id"].get<std::string>(), e["output_index"].get<std::uint32_t>()});
    }
  }
  return validate(std::move(rec), rules);
}

} // namespace

bool continent_rules::in_africa_box(const geo_point& g) const {
  return g.lat >= africa_lat_min && g.lat <= africa_lat_max && g.lon >= africa_lon_min &&
         g.lon <= africa_lon_max;
}

bool continent_rules::near_boundary(const geo_point& g) const {
  if (near_line(g.lon, am_lon_max, boundary_margin)) return true;
  if (g.lon >= am_lon_max && near_line(g.lat, eu_lat_min, boundary_margin)) return true;
  if (g.lon >= am_lon_max && g.lat >= eu_lat_min && near_line(g.lon, eu_lon_max, boundary_margin))
    return true;
  // near an edge of the African box, on either side
  bool lat_band = g.lat >= africa_lat_min - boundary_margin && g.lat <= africa_lat_max + boundary_margin;
  bool lon_band = g.lon >= africa_lon_min - boundary_margin && g.lon <= africa_lon_max + boundary_margin;
  if (lat_band && lon_band && !in_africa_box(g)) return true;
  return false;
}

continent assign_continent(const geo_point& g, const continent_rules& rules) {
  if (rules.in_africa_box(g)) throw unsupported_region_error(g.lat, g.lon);
  if (g.lon < rules.am_lon_max) return continent::AM;
  if (g.lat >= rules.eu_lat_min && g.lon < rules.eu_lon_max) return continent::EU;
  return continent::AS;
}

std::string to_string(reject_reason r) {
  switch (r) {
    case reject_reason::malformed_row: return "MalformedRow";
    case reject_reason::out_of_range_coordinate: return "OutOfRangeCoordinate";
    case reject_reason::negative_value: return "NegativeValue";
    case reject_reason::out_of_range_value: return "OutOfRangeValue";
    case reject_reason::bad_timestamp: return "BadTimestamp";
    case reject_reason::unsupported_region: return "UnsupportedRegion";
    case reject_reason::empty_address: return "EmptyAddress";
    case reject_reason::bad_inputs: return "BadInputs";
  }
  return "Unknown";
}

std::string ingest_report::summary() const {
  std::ostringstream os;
  os << "ingest: accepted " << accepted << ", rejected " << rejected;
  for (const auto& [reason, count] : rejection_reasons)
    os << ", " << to_string(reason) << "=" << count;
  if (near_boundary > 0) os << "; " << near_boundary << " accepted near a continent boundary";
  return os.str();
}

parse_result parse_records(std::istream& source, source_format format,
                           const continent_rules& rules) {
  if (!source.good()) throw unreadable_source_error("stream not readable");

  parse_result result;
  std::string line;
  bool first = true;
  while (std::getline(source, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (first && format == source_format::csv && line.rfind("tx_id,", 0) == 0) {
      first = false;
      continue; // header
    }
    first = false;

    row_outcome row = format == source_format::csv ? parse_csv_row(line, rules)
                                                   : parse_json_row(line, rules);
    if (!row.ok) {
      ++result.report.rejected;
      ++result.report.rejection_reasons[row.reason];
      continue;
    }
    ++result.report.accepted;
    if (rules.near_boundary(row.record.sender.geo) || rules.near_boundary(row.record.receiver.geo))
      ++result.report.near_boundary;
    result.records.push_back(std::move(row.record));
  }
  if (source.bad()) throw unreadable_source_error("stream failed mid-read");

  if (!result.records.empty()) {
    auto [lo, hi] = std::pair{result.records.front().timestamp, result.records.front().timestamp};
    for (const auto& r : result.records) {
      lo = std::min(lo, r.timestamp);
      hi = std::max(hi, r.timestamp);
    }
    result.report.window = {lo, hi};
  }
  return result;
}

parse_result parse_file(const std::string& path, const continent_rules& rules) {
  std::ifstream in(path);
  if (!in) throw unreadable_source_error(path);
  source_format fmt = source_format::csv;
  if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl") fmt = source_format::jsonl;
  else if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") fmt = source_format::jsonl;
  return parse_records(in, fmt, rules);
}

const char* const kCsvHeader =
    "tx_id,timestamp,value_btc,sender_address,sender_lat,sender_lon,sender_country,"
    "receiver_address,receiver_lat,receiver_lon,receiver_country,inputs";

namespace {

std::string inputs_to_field(const std::vector<output_ref>& inputs) {
  std::string out;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i) out += ';';
    out += inputs[i].tx_id + ':' + std::to_string(inputs[i].output_index);
  }
  return out;
}

} // namespace

void write_csv(std::ostream& out, const std::vector<transaction_record>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.tx_id << ',' << r.timestamp << ',' << r.value.to_string() << ','
        << r.sender.address_id << ',' << format_double(r.sender.geo.lat) << ','
        << format_double(r.sender.geo.lon) << ',' << r.sender.country_code.value_or("") << ','
        << r.receiver.address_id << ',' << format_double(r.receiver.geo.lat) << ','
        << format_double(r.receiver.geo.lon) << ',' << r.receiver.country_code.value_or("") << ','
        << inputs_to_field(r.inputs) << '\n';
  }
}

void write_jsonl(std::ostream& out, const std::vector<transaction_record>& records) {
  auto quote = [](const std::string& s) { return nlohmann::json(s).dump(); };
  for (const auto& r : records) {
    // assembled by hand so value_btc carries the exact canonical decimal
    out << "{\"tx_id\":" << quote(r.tx_id) << ",\"timestamp\":" << r.timestamp
        << ",\"value_btc\":" << r.value.to_string()
        << ",\"sender_address\":" << quote(r.sender.address_id)
        << ",\"sender_lat\":" << format_double(r.sender.geo.lat)
        << ",\"sender_lon\":" << format_double(r.sender.geo.lon)
        << ",\"sender_country\":" << quote(r.sender.country_code.value_or(""))
        << ",\"receiver_address\":" << quote(r.receiver.address_id)
        << ",\"receiver_lat\":" << format_double(r.receiver.geo.lat)
        << ",\"receiver_lon\":" << format_double(r.receiver.geo.lon)
        << ",\"receiver_country\":" << quote(r.receiver.country_code.value_or(""))
        << ",\"inputs\":[";
    for (std::size_t i = 0; i < r.inputs.size(); ++i) {
      if (i) out << ',';
      out << "{\"tx_id\":" << quote(r.inputs[i].tx_id)
          << ",\"output_index\":" << r.inputs[i].output_index << "}";
    }
    out << "]}\n";
  }
}

source_format format_from_name(const std::string& name) {
  if (name == "csv") return source_format::csv;
  if (name == "jsonl") return source_format::jsonl;
  throw unknown_format_error(name);
}

} // namespace txgeo
