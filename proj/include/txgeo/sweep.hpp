#pragma once

#include <cstdint>
#include <vector>

#include "txgeo/core.hpp"
#include "txgeo/markov.hpp"
#include "txgeo/stat_fit.hpp"

namespace txgeo {

struct sweep_grid {
  std::vector<btc_amount> val;
  std::vector<int> tx_miner;
  std::vector<int> tx_merch;

  /// val {5,10,15,20,25} BTC, tx_miner {10,25,50,75,100},
  /// tx_merch {60,90,120,150,200}.
  static sweep_grid default_grid();
};

struct sweep_row {
  param_triple params;
  ks_result ks;
  std::array<std::uint64_t, kNumGroups> group_sizes{};
};

struct sweep_result {
  std::vector<sweep_row> rows; // grid enumeration order: val x tx_miner x tx_merch
  std::size_t best_index = 0;

  const sweep_row& best() const { return rows[best_index]; }
};

struct sweep_options {
  std::size_t n_generate = 500;
  std::uint64_t seed = 0;
  /// Rank by largest K-S p-value (the default); false ranks by smallest d.
  bool maximize_p = true;
  generation_mode mode = generation_mode::chain;
  unsigned threads = 0; // 0 = hardware concurrency
};

/// Evaluates every triple in the grid: build the model, generate
/// n_generate transactions, compare their distances against the dataset's
/// empirical distance distribution with the two-sample K-S test. Each
/// triple's generator seed derives from (seed, val in satoshi, tx_miner,
/// tx_merch), so results are independent of enumeration order and of the
/// number of worker threads. Ties resolve toward smaller d, then the
/// lexicographically smallest triple.
sweep_result run_sweep(const dataset& ds, const sweep_grid& grid, const sweep_options& opts);

} // namespace txgeo
