#include "txgeo/markov.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "txgeo/geo_stats.hpp"
#include "txgeo/rng.hpp"

namespace txgeo {

namespace {

struct coord_stat {
  std::uint64_t count = 0;
  std::size_t last_seen = 0;
};

struct coord_key {
  double lat, lon;
  bool operator==(const coord_key&) const = default;
};

struct coord_hash {
  std::size_t operator()(const coord_key& k) const {
    std::uint64_t a = splitmix64(std::bit_cast<std::uint64_t>(k.lat));
    std::uint64_t b = splitmix64(std::bit_cast<std::uint64_t>(k.lon));
    return static_cast<std::size_t>(a ^ (b << 1));
  }
};

} // namespace

address_profiles build_address_profiles(const dataset& ds, const continent_rules& rules) {
  // modal coordinate per address, ties broken by the most recent appearance
  std::unordered_map<std::string, std::unordered_map<coord_key, coord_stat, coord_hash>> coords;

  address_profiles profiles;
  const auto& records = ds.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto touch = [&](const endpoint& ep, bool is_sender) {
      auto& p = profiles[ep.address_id];
      ++p.participations;
      if (is_sender) p.max_sent_sat = std::max(p.max_sent_sat, r.value.sat);
      auto& cs = coords[ep.address_id][{ep.geo.lat, ep.geo.lon}];
      ++cs.count;
      cs.last_seen = i;
    };
    touch(r.sender, true);
    touch(r.receiver, false);
  }

  for (auto& [addr, profile] : profiles) {
    const auto& stats = coords[addr];
    const coord_key* best = nullptr;
    coord_stat best_stat;
    for (const auto& [key, stat] : stats) {
      if (best == nullptr || stat.count > best_stat.count ||
          (stat.count == best_stat.count && stat.last_seen > best_stat.last_seen)) {
        best = &key;
        best_stat = stat;
      }
    }
    profile.home = assign_continent({best->lat, best->lon}, rules);
  }
  return profiles;
}

std::array<std::uint64_t, kNumGroups> classification::group_sizes() const {
  std::array<std::uint64_t, kNumGroups> sizes{};
  for (const auto& [addr, group] : assignment) ++sizes[static_cast<std::size_t>(group.index())];
  return sizes;
}

classification classify(const address_profiles& profiles, const param_triple& params) {
  classification cls;
  cls.params = params;
  cls.assignment.reserve(profiles.size());
  for (const auto& [addr, p] : profiles) {
    role r;
    if (p.max_sent_sat >= params.val.sat &&
        p.participations <= static_cast<std::uint64_t>(params.tx_miner)) {
      r = role::miner;
    } else if (p.participations >= static_cast<std::uint64_t>(params.tx_merch)) {
      r = role::merchant;
    } else {
      r = role::user;
    }
    cls.assignment.emplace(addr, user_group{r, p.home});
  }
  return cls;
}

classification classify(const dataset& ds, const param_triple& params) {
  return classify(build_address_profiles(ds), params);
}

transition_matrix estimate_transition(const dataset& ds, const classification& cls) {
  std::array<std::array<std::uint64_t, kNumGroups>, kNumGroups> counts{};
  for (const auto& r : ds.records()) {
    const int i = cls.assignment.at(r.sender.address_id).index();
    const int j = cls.assignment.at(r.receiver.address_id).index();
    ++counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  transition_matrix t;
  for (int i = 0; i < kNumGroups; ++i) {
    std::uint64_t row_total = 0;
    for (int j = 0; j < kNumGroups; ++j) row_total += counts[i][j];
    if (row_total == 0) {
      for (int j = 0; j < kNumGroups; ++j) t.probs[i][j] = 1.0 / kNumGroups;
    } else {
      for (int j = 0; j < kNumGroups; ++j)
        t.probs[i][j] = static_cast<double>(counts[i][j]) / static_cast<double>(row_total);
    }
  }
  return t;
}

std::array<double, kNumGroups> stationary_distribution(const transition_matrix& t) {
  std::array<double, kNumGroups> pi{};
  pi.fill(1.0 / kNumGroups);
  constexpr int kMaxIter = 1'000'000;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    std::array<double, kNumGroups> next{};
    for (int i = 0; i < kNumGroups; ++i) {
      const double w = pi[static_cast<std::size_t>(i)];
      if (w == 0.0) continue;
      for (int j = 0; j < kNumGroups; ++j)
        next[static_cast<std::size_t>(j)] += w * t.probs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    double sum = 0.0;
    for (double v : next) sum += v;
    for (double& v : next) v /= sum;
    double diff = 0.0;
    for (int j = 0; j < kNumGroups; ++j)
      diff = std::max(diff, std::abs(next[static_cast<std::size_t>(j)] - pi[static_cast<std::size_t>(j)]));
    pi = next;
    if (diff < 1e-12) return pi;
  }
  throw no_convergence_error("power iteration did not settle (periodic or reducible chain?)");
}

markov_model build_model(const dataset& ds, const address_profiles& profiles,
                         const param_triple& params) {
  markov_model m;
  m.cls = classify(profiles, params);
  m.transition = estimate_transition(ds, m.cls);
  m.group_sizes = m.cls.group_sizes();

  std::array<std::uint64_t, kNumGroups> sent{};
  for (const auto& r : ds.records()) {
    const int i = m.cls.assignment.at(r.sender.address_id).index();
    const int j = m.cls.assignment.at(r.receiver.address_id).index();
    const double d = haversine_km(r.sender.geo, r.receiver.geo);
    m.kernels.kernels[static_cast<std::size_t>(i * kNumGroups + j)].push_back(d);
    m.kernels.global_fallback.push_back(d);
    ++sent[static_cast<std::size_t>(i)];
  }
  for (auto& k : m.kernels.kernels) std::sort(k.begin(), k.end());
  std::sort(m.kernels.global_fallback.begin(), m.kernels.global_fallback.end());

  for (int i = 0; i < kNumGroups; ++i) {
    m.sender_freq[static_cast<std::size_t>(i)] =
        static_cast<double>(sent[static_cast<std::size_t>(i)]) / static_cast<double>(ds.size());
    bool any_out = sent[static_cast<std::size_t>(i)] > 0;
    if (!any_out) m.uniform_rows.push_back(i);
  }
  m.stationary = stationary_distribution(m.transition);
  return m;
}

markov_model build_model(const dataset& ds, const param_triple& params) {
  return build_model(ds, build_address_profiles(ds), params);
}

namespace {

int sample_discrete(rng& gen, const std::array<double, kNumGroups>& probs) {
  const double u = gen.next_double();
  double acc = 0.0;
  int last_positive = 0;
  for (int i = 0; i < kNumGroups; ++i) {
    const double p = probs[static_cast<std::size_t>(i)];
    if (p > 0.0) last_positive = i;
    acc += p;
    if (u < acc) return i;
  }
  return last_positive; // floating drift at the top of the cumulative sum
}

} // namespace

std::vector<generated_tx> generate(const markov_model& model, std::size_t n, std::uint64_t seed,
                                   generation_mode mode) {
  rng gen(seed);
  std::vector<generated_tx> out;
  out.reserve(n);

  int sender = sample_discrete(gen, model.sender_freq);
  for (std::size_t step = 0; step < n; ++step) {
    if (mode == generation_mode::independent && step > 0)
      sender = sample_discrete(gen, model.stationary);
    const int receiver = sample_discrete(gen, model.transition.probs[static_cast<std::size_t>(sender)]);
    const auto& kernel = model.kernels.kernel_or_fallback(sender, receiver);
    const double distance = kernel[gen.next_index(kernel.size())];
    out.push_back({user_group::from_index(sender), user_group::from_index(receiver), distance});
    if (mode == generation_mode::chain) sender = receiver;
  }
  return out;
}

void write_model_json(std::ostream& out, const markov_model& model) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["params"] = {{"val_btc", model.cls.params.val.to_string()},
                 {"tx_miner", model.cls.params.tx_miner},
                 {"tx_merch", model.cls.params.tx_merch}};
  std::vector<std::string> labels;
  for (const auto& g : all_groups()) labels.push_back(g.label());
  j["groups"] = labels;
  j["transition"] = model.transition.probs;
  j["stationary"] = model.stationary;
  j["sender_freq"] = model.sender_freq;
  j["group_sizes"] = model.group_sizes;
  j["uniform_rows"] = model.uniform_rows;
  nlohmann::json kernels = nlohmann::json::object();
  for (int i = 0; i < kNumGroups; ++i) {
    for (int jg = 0; jg < kNumGroups; ++jg) {
      const auto& k = model.kernels.kernels[static_cast<std::size_t>(i * kNumGroups + jg)];
      if (k.empty()) continue;
      kernels[user_group::from_index(i).label() + ">" + user_group::from_index(jg).label()] = k;
    }
  }
  j["kernels"] = kernels;
  j["fallback"] = model.kernels.global_fallback;
  out << j.dump(2) << '\n';
}

markov_model read_model_json(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw model_io_error("not a JSON object");
  try {
    markov_model m;
    auto val = btc_amount::parse(j.at("params").at("val_btc").get<std::string>());
    if (!val) throw model_io_error("bad val_btc");
    m.cls.params.val = *val;
    m.cls.params.tx_miner = j.at("params").at("tx_miner").get<int>();
    m.cls.params.tx_merch = j.at("params").at("tx_merch").get<int>();

    const auto& t = j.at("transition");
    if (t.size() != kNumGroups) throw model_io_error("transition must be 9x9");
    for (int i = 0; i < kNumGroups; ++i) {
      double row_sum = 0.0;
      for (int col = 0; col < kNumGroups; ++col) {
        double p = t.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(col)).get<double>();
        if (p < 0.0 || p > 1.0) throw model_io_error("transition entry outside [0,1]");
        m.transition.probs[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] = p;
        row_sum += p;
      }
      if (std::abs(row_sum - 1.0) > 1e-9) throw model_io_error("transition row does not sum to 1");
    }
    for (int i = 0; i < kNumGroups; ++i) {
      m.stationary[static_cast<std::size_t>(i)] = j.at("stationary").at(static_cast<std::size_t>(i)).get<double>();
      m.sender_freq[static_cast<std::size_t>(i)] = j.at("sender_freq").at(static_cast<std::size_t>(i)).get<double>();
      m.group_sizes[static_cast<std::size_t>(i)] = j.at("group_sizes").at(static_cast<std::size_t>(i)).get<std::uint64_t>();
    }
    if (j.contains("uniform_rows")) m.uniform_rows = j["uniform_rows"].get<std::vector<int>>();

    for (const auto& [key, samples] : j.at("kernels").items()) {
      const auto sep = key.find('>');
      auto from = user_group::parse(key.substr(0, sep));
      auto to = user_group::parse(sep == std::string::npos ? "" : key.substr(sep + 1));
      if (!from || !to) throw model_io_error("bad kernel key: " + key);
      auto& k = m.kernels.kernels[static_cast<std::size_t>(from->index() * kNumGroups + to->index())];
      k = samples.get<std::vector<double>>();
      if (k.empty()) throw model_io_error("kernel present but empty: " + key);
      if (!std::is_sorted(k.begin(), k.end())) std::sort(k.begin(), k.end());
    }
    m.kernels.global_fallback = j.at("fallback").get<std::vector<double>>();
    if (m.kernels.global_fallback.empty()) throw model_io_error("fallback kernel empty");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw model_io_error(e.what());
  }
}

} // namespace txgeo
