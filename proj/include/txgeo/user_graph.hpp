#pragma once

#include <cstdint>
#include <unordered_map>
#include <string>

#include "txgeo/core.hpp"
#include "txgeo/empirical.hpp"

namespace txgeo {

/// Address-level multigraph: one directed edge per record, self-loops kept.
struct user_graph {
  std::unordered_map<std::string, std::uint64_t> out_degree;
  std::unordered_map<std::string, std::uint64_t> in_degree; // same key set
  std::size_t num_edges = 0;

  std::size_t num_nodes() const { return out_degree.size(); }
};

user_graph build_user_graph(const dataset& ds);

enum class degree_direction { in, out };

/// Per-node degree multiset; nodes with zero degree in the requested
/// direction contribute a zero.
empirical_distribution degree_distribution(const user_graph& g, degree_direction dir);

} // namespace txgeo
