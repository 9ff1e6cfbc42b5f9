#pragma once

#include <stdexcept>
#include <string>

namespace txgeo {

/// Base class for all txgeo errors.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

class empty_dataset_error : public error {
public:
  empty_dataset_error() : error("dataset is empty") {}
};

class duplicate_tx_id_error : public error {
public:
  explicit duplicate_tx_id_error(const std::string& tx_id)
      : error("duplicate tx_id: " + tx_id), tx_id(tx_id) {}
  std::string tx_id;
};

class unreadable_source_error : public error {
public:
  explicit unreadable_source_error(const std::string& what)
      : error("unreadable source: " + what) {}
};

class unknown_format_error : public error {
public:
  explicit unknown_format_error(const std::string& fmt)
      : error("unknown format: " + fmt) {}
};

class unsupported_region_error : public error {
public:
  unsupported_region_error(double lat, double lon)
      : error("coordinate (" + std::to_string(lat) + ", " + std::to_string(lon) +
              ") lies in an unsupported region") {}
};

class negative_waiting_time_error : public error {
public:
  explicit negative_waiting_time_error(const std::string& tx_id)
      : error("spend precedes creation of an input of tx " + tx_id), tx_id(tx_id) {}
  std::string tx_id;
};

class zero_variance_error : public error {
public:
  zero_variance_error() : error("correlation undefined for a constant series") {}
};

class length_mismatch_error : public error {
public:
  length_mismatch_error() : error("series must have equal length >= 2") {}
};

class unknown_country_code_error : public error {
public:
  explicit unknown_country_code_error(const std::string& code)
      : error("not an ISO-3166 alpha-2 code: " + code) {}
};

class insufficient_samples_error : public error {
public:
  explicit insufficient_samples_error(const std::string& what)
      : error("insufficient samples: " + what) {}
};

class non_positive_sample_error : public error {
public:
  non_positive_sample_error() : error("power-law fit requires strictly positive samples") {}
};

class empty_sample_error : public error {
public:
  empty_sample_error() : error("K-S test requires non-empty samples") {}
};

class no_convergence_error : public error {
public:
  explicit no_convergence_error(const std::string& what)
      : error("no convergence: " + what) {}
};

class empty_grid_error : public error {
public:
  empty_grid_error() : error("sweep grid has an empty axis") {}
};

class infeasible_spec_error : public error {
public:
  explicit infeasible_spec_error(const std::string& what)
      : error("infeasible synthetic spec: " + what) {}
};

class model_io_error : public error {
public:
  explicit model_io_error(const std::string& what) : error("model file: " + what) {}
};

} // namespace txgeo
