#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "txgeo/core.hpp"
#include "txgeo/empirical.hpp"
#include "txgeo/ingest.hpp"

namespace txgeo {

/// Per-address aggregates the classifier needs: one pass over the dataset,
/// reusable across many param triples during a sweep.
struct address_profile {
  std::uint64_t participations = 0; // sender + receiver appearances (self-loop counts 2)
  std::int64_t max_sent_sat = -1;   // largest sent value; -1 when never a sender
  continent home = continent::AM;   // continent of the modal observed coordinate
};

using address_profiles = std::unordered_map<std::string, address_profile>;

address_profiles build_address_profiles(const dataset& ds, const continent_rules& rules = {});

struct classification {
  std::unordered_map<std::string, user_group> assignment;
  param_triple params;

  std::array<std::uint64_t, kNumGroups> group_sizes() const;
};

/// Role rules: Miner when the address sent at least one transaction of value
/// >= params.val and participated in at most params.tx_miner transactions;
/// otherwise Merchant when participations >= params.tx_merch; otherwise
/// User. Miner wins when both rules match.
classification classify(const dataset& ds, const param_triple& params);
classification classify(const address_profiles& profiles, const param_triple& params);

struct transition_matrix {
  std::array<std::array<double, kNumGroups>, kNumGroups> probs{};

  const std::array<double, kNumGroups>& row(int i) const { return probs[static_cast<std::size_t>(i)]; }
};

/// Relative sender-to-receiver group frequencies; rows without any outgoing
/// record get the uniform row (flagged in markov_model::uniform_rows).
transition_matrix estimate_transition(const dataset& ds, const classification& cls);

/// Left fixed point of a row-stochastic matrix by power iteration from the
/// uniform vector; converged when successive iterates differ by < 1e-12 in
/// the sup norm. Throws no_convergence_error after 10^6 iterations (periodic
/// or otherwise pathological chains).
std::array<double, kNumGroups> stationary_distribution(const transition_matrix& t);

struct distance_kernels {
  /// kernels[i*9+j]: sorted observed distances for records sent by group i
  /// and received by group j; empty means absent (use the fallback).
  std::array<std::vector<double>, kNumGroups * kNumGroups> kernels;
  std::vector<double> global_fallback; // full sorted distance sample

  const std::vector<double>& kernel_or_fallback(int i, int j) const {
    const auto& k = kernels[static_cast<std::size_t>(i * kNumGroups + j)];
    return k.empty() ? global_fallback : k;
  }
};

struct markov_model {
  classification cls;
  transition_matrix transition;
  distance_kernels kernels;
  std::array<double, kNumGroups> stationary{};
  std::array<double, kNumGroups> sender_freq{}; // empirical sender-group frequencies
  std::array<std::uint64_t, kNumGroups> group_sizes{};
  std::vector<int> uniform_rows; // rows with no outgoing records, uniform-filled
};

markov_model build_model(const dataset& ds, const param_triple& params);
/// Profile-reusing variant for sweeps.
markov_model build_model(const dataset& ds, const address_profiles& profiles,
                         const param_triple& params);

struct generated_tx {
  user_group sender;
  user_group receiver;
  double distance_km = 0.0;
};

enum class generation_mode {
  chain,      // each step's receiver becomes the next sender
  independent // every step's sender drawn afresh from the stationary vector
};

/// Draws n transactions from the model. The first sender comes from the
/// empirical sender-group frequencies; each receiver from the sender's
/// transition row; each distance uniformly from the pair's kernel (fallback
/// when the pair was never observed). Deterministic per (model, n, seed).
std::vector<generated_tx> generate(const markov_model& model, std::size_t n, std::uint64_t seed,
                                   generation_mode mode = generation_mode::chain);

/// Audit/reload serialization: params, matrix, stationary and sender
/// vectors, group sizes and the kernel samples. Stable key order.
void write_model_json(std::ostream& out, const markov_model& model);
markov_model read_model_json(std::istream& in);

} // namespace txgeo
