#include "txgeo/user_graph.hpp"

namespace txgeo {

user_graph build_user_graph(const dataset& ds) {
  if (ds.size() == 0) throw empty_dataset_error();
  user_graph g;
  for (const auto& r : ds.records()) {
    ++g.out_degree[r.sender.address_id];
    g.in_degree.try_emplace(r.sender.address_id, 0);
    ++g.in_degree[r.receiver.address_id];
    g.out_degree.try_emplace(r.receiver.address_id, 0);
    ++g.num_edges;
  }
  return g;
}

empirical_distribution degree_distribution(const user_graph& g, degree_direction dir) {
  const auto& map = dir == degree_direction::in ? g.in_degree : g.out_degree;
  std::vector<double> degrees;
  degrees.reserve(map.size());
  for (const auto& [addr, deg] : map) degrees.push_back(static_cast<double>(deg));
  return {std::move(degrees), sample_unit::count};
}

} // namespace txgeo
