#include "riskfront/serialization.hpp"

#include <stdexcept>

namespace riskfront {

namespace {

// Depth of nested arrays along the first elements.
int depth(const Json& j) {
  int d = 0;
  const Json* cur = &j;
  while (cur->is_array() && !cur->empty()) {
    ++d;
    cur = &(*cur)[0];
  }
  return d;
}

const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json distribution_to_json(const ReturnDistribution& d) {
  Json out = Json::array();
  for (const Atom& a : d.atoms()) out.push_back({a.support, a.prob});
  return out;
}

ReturnDistribution distribution_from_json(const Json& j) {
  std::vector<Atom> atoms;
  for (const Json& a : j) {
    auto pair = get<std::vector<double>>(a, "distribution atom");
    if (pair.size() != 2) throw std::invalid_argument("distribution atom must be [support, prob]");
    atoms.push_back({pair[0], pair[1]});
  }
  return ReturnDistribution::from_atoms(std::move(atoms));
}

Json mdp_to_json(const TabularMDP& m) {
  const int S = m.n_states;
  const int A = m.n_actions;
  auto transitions_layer = [&](int t) {
    Json xs = Json::array();
    for (int x = 0; x < S; ++x) {
      Json as = Json::array();
      for (int a = 0; a < A; ++a) {
        auto row = m.row(t, x, a);
        as.push_back(std::vector<double>(row.begin(), row.end()));
      }
      xs.push_back(std::move(as));
    }
    return xs;
  };
  auto rewards_layer = [&](int t) {
    Json xs = Json::array();
    for (int x = 0; x < S; ++x) {
      std::vector<double> rs(A);
      for (int a = 0; a < A; ++a) rs[a] = m.r(t, x, a);
      xs.push_back(rs);
    }
    return xs;
  };
  auto layered = [&](std::size_t n_layers, auto&& one) {
    if (n_layers == 1) return one(0);
    Json ts = Json::array();
    for (int t = 0; t < m.horizon; ++t) ts.push_back(one(t));
    return ts;
  };
  Json j;
  j["n_states"] = S;
  j["n_actions"] = A;
  j["horizon"] = m.horizon;
  j["transitions"] = layered(m.transitions.size(), transitions_layer);
  j["rewards"] = layered(m.rewards.size(), rewards_layer);
  j["initial_dist"] = m.initial_dist;
  j["allowed_actions"] = m.allowed_actions.size() == 1 ? Json(m.allowed_actions[0])
                                                       : Json(m.allowed_actions);
  if (m.reward_unit) j["reward_unit"] = *m.reward_unit;
  return j;
}

TabularMDP mdp_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("MDP document must be a JSON object");
  TabularMDP m = TabularMDP::make(get<int>(field(j, "n_states"), "n_states"),
                                  get<int>(field(j, "n_actions"), "n_actions"),
                                  get<int>(field(j, "horizon"), "horizon"));
  const int S = m.n_states;
  const int A = m.n_actions;

  const Json& tr = field(j, "transitions");
  std::vector<const Json*> tr_layers;
  if (depth(tr) == 4) {
    m.split_transitions_by_time();
    for (const Json& l : tr) tr_layers.push_back(&l);
  } else if (depth(tr) == 3) {
    tr_layers.push_back(&tr);
  } else {
    throw std::invalid_argument("transitions must be [x][a][x'] or [t][x][a][x']");
  }
  if (tr_layers.size() != m.transitions.size()) throw std::invalid_argument("transitions: need one layer per timestep");
  for (std::size_t l = 0; l < tr_layers.size(); ++l) {
    auto v = get<std::vector<std::vector<std::vector<double>>>>(*tr_layers[l], "transitions");
    if (v.size() != static_cast<std::size_t>(S)) throw std::invalid_argument("transitions: wrong number of states");
    for (int x = 0; x < S; ++x) {
      if (v[x].size() != static_cast<std::size_t>(A)) throw std::invalid_argument("transitions: wrong number of actions");
      for (int a = 0; a < A; ++a) {
        if (v[x][a].size() != static_cast<std::size_t>(S)) throw std::invalid_argument("transitions: wrong row length");
        for (int xn = 0; xn < S; ++xn) m.p(static_cast<int>(l), x, a, xn) = v[x][a][xn];
      }
    }
  }

  const Json& rw = field(j, "rewards");
  std::vector<const Json*> rw_layers;
  if (depth(rw) == 3) {
    m.split_rewards_by_time();
    for (const Json& l : rw) rw_layers.push_back(&l);
  } else if (depth(rw) == 2) {
    rw_layers.push_back(&rw);
  } else {
    throw std::invalid_argument("rewards must be [x][a] or [t][x][a]");
  }
  if (rw_layers.size() != m.rewards.size()) throw std::invalid_argument("rewards: need one layer per timestep");
  for (std::size_t l = 0; l < rw_layers.size(); ++l) {
    auto v = get<std::vector<std::vector<double>>>(*rw_layers[l], "rewards");
    if (v.size() != static_cast<std::size_t>(S)) throw std::invalid_argument("rewards: wrong number of states");
    for (int x = 0; x < S; ++x) {
      if (v[x].size() != static_cast<std::size_t>(A)) throw std::invalid_argument("rewards: wrong number of actions");
      for (int a = 0; a < A; ++a) m.r(static_cast<int>(l), x, a) = v[x][a];
    }
  }

  m.initial_dist = get<std::vector<double>>(field(j, "initial_dist"), "initial_dist");
  if (j.contains("allowed_actions")) {
    const Json& aa = j.at("allowed_actions");
    if (depth(aa) == 3) {
      m.allowed_actions = get<std::vector<std::vector<std::vector<int>>>>(aa, "allowed_actions");
    } else {
      m.allowed_actions = {get<std::vector<std::vector<int>>>(aa, "allowed_actions")};
    }
  }
  if (j.contains("reward_unit") && !j.at("reward_unit").is_null()) {
    m.reward_unit = get<double>(j.at("reward_unit"), "reward_unit");
  }
  return m;
}

Json front_to_json(const OptimalityFront& f) {
  Json j;
  j["beta_min"] = f.beta_min;
  j["epsilon"] = f.epsilon;
  j["total_eval_count"] = f.total_eval_count;
  j["breakpoints"] = f.breakpoints;
  Json entries = Json::array();
  for (const FrontEntry& e : f.entries) {
    entries.push_back({{"beta_lo", e.beta_lo},
                       {"beta_hi", e.beta_hi},
                       {"policy", e.policy.actions},
                       {"initial_return", distribution_to_json(e.initial_return)}});
  }
  j["entries"] = std::move(entries);
  return j;
}

OptimalityFront front_from_json(const Json& j) {
  OptimalityFront f;
  f.beta_min = get<double>(field(j, "beta_min"), "beta_min");
  f.epsilon = get<double>(field(j, "epsilon"), "epsilon");
  f.total_eval_count = get<long>(field(j, "total_eval_count"), "total_eval_count");
  f.breakpoints = get<std::vector<double>>(field(j, "breakpoints"), "breakpoints");
  for (const Json& e : field(j, "entries")) {
    FrontEntry entry{
        MarkovPolicy{get<std::vector<std::vector<int>>>(field(e, "policy"), "policy")},
        get<double>(field(e, "beta_lo"), "beta_lo"), get<double>(field(e, "beta_hi"), "beta_hi"),
        distribution_from_json(field(e, "initial_return"))};
    f.entries.push_back(std::move(entry));
  }
  return f;
}

}  // namespace riskfront
