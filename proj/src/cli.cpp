#include "riskfront/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "riskfront/baselines.hpp"
#include "riskfront/dolfin.hpp"
#include "riskfront/entrm_planning.hpp"
#include "riskfront/envs.hpp"
#include "riskfront/findbreaks.hpp"
#include "riskfront/gpi.hpp"

namespace riskfront {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kMethods{"front", "grid_proxy", "risk_neutral", "nested",
                                     "augmented_tp"};

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T read(const Json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + ": '" + key + "' has the wrong type");
  }
}

SpecConfig parse_spec(const Json& j) {
  if (!j.is_object()) throw ConfigError("specs entries must be objects");
  check_keys(j, {"kind", "alpha", "beta", "T", "T_rel"}, "spec");
  RiskKind kind;
  try {
    kind = parse_kind(read<std::string>(j, "kind", "", "spec"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  SpecConfig s{kind, 0.0, false};
  auto need = [&](const char* key) {
    if (!j.contains(key)) throw ConfigError("spec '" + kind_name(kind) + "' needs '" + key + "'");
    return read<double>(j, key, 0.0, "spec");
  };
  switch (kind) {
    case RiskKind::Mean: break;
    case RiskKind::EntRM: s.param = need("beta"); break;
    case RiskKind::VaR:
    case RiskKind::CVaR:
    case RiskKind::EVaR:
      s.param = need("alpha");
      if (!(s.param > 0.0 && s.param < 1.0)) throw ConfigError("spec alpha must lie in (0,1)");
      break;
    case RiskKind::ThresholdProb:
      if (j.contains("T_rel")) {
        s.param = need("T_rel");
        s.relative = true;
      } else {
        s.param = need("T");
      }
      break;
  }
  return s;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i) line += text[i] == '\n';
    throw ConfigError(what + " line " + std::to_string(line) + ": " + e.what());
  }
}

std::string env_name(const Json& env) {
  if (env.is_string()) return env.get<std::string>();
  if (env.is_object() && env.contains("name") && env.at("name").is_string()) {
    return env.at("name").get<std::string>();
  }
  if (env.is_object() && env.contains("file")) return "file";
  throw ConfigError("env must be a name or an object with 'name' or 'file'");
}

Json env_params(const Json& env) { return env.is_object() ? env : Json::object(); }

std::vector<ReturnDistribution> coin_lottery_problem() {
  return {ReturnDistribution::from_atoms({{0.0, 0.5}, {1.0, 0.5}}),
          ReturnDistribution::from_atoms({{0.0, 0.99}, {2.0, 0.01}})};
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ExperimentConfig parse_config(const std::string& text, const fs::path& base_dir) {
  Json j = parse_json(text, "config");
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j,
             {"env", "epsilon", "beta_min", "methods", "specs", "seed", "out_dir", "front_file",
              "tp_grid_eps", "evar_grid_points", "precisions", "ensemble"},
             "config");
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  if (!j.contains("env")) throw ConfigError("config needs 'env'");
  cfg.env = j.at("env");
  env_name(cfg.env);
  cfg.epsilon = read(j, "epsilon", cfg.epsilon, "config");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
  cfg.beta_min = read(j, "beta_min", cfg.beta_min, "config");
  if (!(cfg.beta_min < 0.0) || !std::isfinite(cfg.beta_min)) throw ConfigError("beta_min must be negative");
  cfg.methods = read(j, "methods", cfg.methods, "config");
  for (const std::string& m : cfg.methods) {
    if (!kMethods.count(m)) throw ConfigError("unknown method '" + m + "'");
  }
  if (j.contains("specs")) {
    if (!j.at("specs").is_array()) throw ConfigError("specs must be a list");
    for (const Json& s : j.at("specs")) cfg.specs.push_back(parse_spec(s));
  }
  cfg.seed = read<std::uint64_t>(j, "seed", 0, "config");
  cfg.out_dir = base_dir / read<std::string>(j, "out_dir", "out", "config");
  if (j.contains("front_file")) cfg.front_file = base_dir / read<std::string>(j, "front_file", "", "config");
  cfg.tp_grid_eps = read(j, "tp_grid_eps", cfg.tp_grid_eps, "config");
  if (!(cfg.tp_grid_eps > 0.0 && cfg.tp_grid_eps < 1.0)) throw ConfigError("tp_grid_eps must lie in (0,1)");
  cfg.evar_grid_points = read(j, "evar_grid_points", cfg.evar_grid_points, "config");
  if (cfg.evar_grid_points < 1) throw ConfigError("evar_grid_points must be positive");
  cfg.precisions = read(j, "precisions", cfg.precisions, "config");
  for (double p : cfg.precisions) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("precisions must lie in (0,1)");
  }
  if (j.contains("ensemble")) {
    const Json& e = j.at("ensemble");
    if (!e.is_object()) throw ConfigError("ensemble must be an object");
    check_keys(e, {"n_problems", "n_actions", "n_atoms", "beta_lo", "beta_hi"}, "ensemble");
    cfg.ensemble_problems = read(e, "n_problems", cfg.ensemble_problems, "ensemble");
    cfg.ensemble_actions = read(e, "n_actions", cfg.ensemble_actions, "ensemble");
    cfg.ensemble_atoms = read(e, "n_atoms", cfg.ensemble_atoms, "ensemble");
    cfg.ensemble_lo = read(e, "beta_lo", cfg.ensemble_lo, "ensemble");
    cfg.ensemble_hi = read(e, "beta_hi", cfg.ensemble_hi, "ensemble");
    if (cfg.ensemble_problems < 1 || cfg.ensemble_actions < 1 || cfg.ensemble_atoms < 1 ||
        !(cfg.ensemble_lo < cfg.ensemble_hi)) {
      throw ConfigError("ensemble sizes must be positive and beta_lo < beta_hi");
    }
  }
  return cfg;
}

TabularMDP build_env(const Json& env, std::uint64_t seed, const fs::path& base_dir) {
  const std::string name = env_name(env);
  const Json params = env_params(env);
  if (name == "file") {
    check_keys(params, {"file"}, "env");
    const fs::path path = base_dir / read<std::string>(params, "file", "", "env");
    TabularMDP m;
    try {
      m = mdp_from_json(parse_json(read_file(path), path.string()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    auto errors = validate(m);
    if (!errors.empty()) {
      std::string msg = path.string() + ": invalid MDP";
      for (const std::string& e : errors) msg += "\n  " + e;
      throw ConfigError(msg);
    }
    return m;
  }
  try {
    if (name == "inventory") {
      check_keys(params,
                 {"name", "capacity", "horizon", "demand_p", "sale_mult", "maint_coef",
                  "fixed_cost", "var_cost", "fixed_cost_only_if_ordering", "clip_overflow"},
                 "inventory env");
      InventoryParams p;
      p.capacity = read(params, "capacity", p.capacity, "inventory env");
      p.horizon = read(params, "horizon", p.horizon, "inventory env");
      p.demand_p = read(params, "demand_p", p.demand_p, "inventory env");
      p.sale_mult = read(params, "sale_mult", p.sale_mult, "inventory env");
      p.maint_coef = read(params, "maint_coef", p.maint_coef, "inventory env");
      p.fixed_cost = read(params, "fixed_cost", p.fixed_cost, "inventory env");
      p.var_cost = read(params, "var_cost", p.var_cost, "inventory env");
      p.fixed_cost_only_if_ordering =
          read(params, "fixed_cost_only_if_ordering", p.fixed_cost_only_if_ordering, "inventory env");
      p.clip_overflow = read(params, "clip_overflow", p.clip_overflow, "inventory env");
      return inventory_mdp(p);
    }
    if (name == "cliff") {
      check_keys(params, {"name", "width", "height", "slip", "horizon", "cliff_penalty"}, "cliff env");
      CliffParams p;
      p.width = read(params, "width", p.width, "cliff env");
      p.height = read(params, "height", p.height, "cliff env");
      p.slip = read(params, "slip", p.slip, "cliff env");
      p.horizon = read(params, "horizon", p.horizon, "cliff env");
      p.cliff_penalty = read(params, "cliff_penalty", p.cliff_penalty, "cliff env");
      return cliff_mdp(p);
    }
    if (name == "random") {
      check_keys(params, {"name", "n_states", "n_actions", "horizon", "seed"}, "random env");
      return random_mdp(read(params, "n_states", 3, "random env"),
                        read(params, "n_actions", 2, "random env"),
                        read(params, "horizon", 3, "random env"),
                        read<std::uint64_t>(params, "seed", seed, "random env"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown env '" + name + "'");
}

int cmd_front(const ExperimentConfig& cfg, std::ostream& log) {
  TabularMDP mdp = build_env(cfg.env, cfg.seed, cfg.base_dir);
  auto start = std::chrono::steady_clock::now();
  OptimalityFront front = dolfin(mdp, cfg.epsilon, cfg.beta_min);
  const double ms = elapsed_ms(start);
  fs::create_directories(cfg.out_dir);
  Json j = front_to_json(front);
  j["env"] = cfg.env;
  j["n_entries"] = front.entries.size();
  write_json(cfg.out_dir / "front.json", j);
  CsvWriter csv(cfg.out_dir / "front_summary.csv",
                {"entry", "beta_lo", "beta_hi", "mean", "cvar_0.05", "n_atoms"});
  for (std::size_t i = 0; i < front.entries.size(); ++i) {
    const FrontEntry& e = front.entries[i];
    csv.row({std::to_string(i), format_number(e.beta_lo), format_number(e.beta_hi),
             format_number(mean(e.initial_return)), format_number(cvar(e.initial_return, 0.05)),
             std::to_string(e.initial_return.size())});
  }
  log << front.entries.size() << " entries, " << front.total_eval_count << " evaluations, "
      << format_number(ms) << " ms\n";
  return kExitOk;
}

int cmd_evaluate(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.specs.empty()) throw ConfigError("evaluate needs at least one spec");
  for (const std::string& m : cfg.methods) {
    for (const SpecConfig& s : cfg.specs) {
      if (m == "augmented_tp" && s.kind != RiskKind::ThresholdProb) {
        throw ConfigError("augmented_tp only supports threshold specs");
      }
      if (m == "nested" && s.kind == RiskKind::EVaR) {
        throw ConfigError("nested does not support evar specs");
      }
    }
  }
  TabularMDP mdp = build_env(cfg.env, cfg.seed, cfg.base_dir);
  const bool need_front = std::find(cfg.methods.begin(), cfg.methods.end(), "front") != cfg.methods.end();
  OptimalityFront front;
  if (need_front) {
    if (cfg.front_file) {
      try {
        front = front_from_json(parse_json(read_file(*cfg.front_file), cfg.front_file->string()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(cfg.front_file->string() + ": " + e.what());
      }
    } else {
      front = dolfin(mdp, cfg.epsilon, cfg.beta_min);
    }
  }
  const double mu_star = risk_neutral(mdp).mean_value;

  fs::create_directories(cfg.out_dir);
  CsvWriter csv(cfg.out_dir / "metrics.csv",
                {"method", "spec_kind", "spec_param", "value", "beta_star", "interval_lo",
                 "interval_hi", "eval_count", "wall_ms"});
  std::map<double, GridProxyResult> evar_grid_cache;
  const double nan = std::nan("");
  for (const std::string& method : cfg.methods) {
    for (const SpecConfig& sc : cfg.specs) {
      RiskSpec spec{sc.kind, sc.relative ? sc.param * mu_star : sc.param};
      auto start = std::chrono::steady_clock::now();
      double value = nan, beta_star = nan, lo = nan, hi = nan;
      long evals = 0;
      auto score = [&](const MarkovPolicy& pi) {
        return evaluate(initial_return(mdp, pi), spec, cfg.beta_min);
      };
      if (method == "front") {
        GpiChoice c = gpi_select(front, spec, cfg.beta_min);
        value = c.value;
        lo = c.interval.lo;
        hi = c.interval.hi;
        evals = front.total_eval_count;
      } else if (method == "grid_proxy") {
        if (spec.kind == RiskKind::ThresholdProb) {
          GridProxyResult g = grid_proxy_tp(mdp, cfg.tp_grid_eps, cfg.beta_min, spec.param);
          value = score(g.policy);
          beta_star = g.beta;
          evals = g.grid_points;
        } else if (spec.kind == RiskKind::Mean || spec.kind == RiskKind::EntRM) {
          EntrmSolution sol = entrm_value_iteration(mdp, spec.kind == RiskKind::Mean ? 0.0 : spec.param);
          value = score(sol.policy);
          beta_star = sol.beta;
          evals = 1;
        } else {
          auto it = evar_grid_cache.find(spec.param);
          if (it == evar_grid_cache.end()) {
            it = evar_grid_cache
                     .emplace(spec.param, grid_proxy_evar(mdp, cfg.evar_grid_points, cfg.beta_min,
                                                          spec.param))
                     .first;
          }
          value = score(it->second.policy);
          beta_star = it->second.beta;
          evals = it->second.grid_points;
        }
      } else if (method == "risk_neutral") {
        value = score(risk_neutral(mdp).policy);
        beta_star = 0.0;
        evals = 1;
      } else if (method == "nested") {
        value = score(nested_risk_vi(mdp, spec).policy);
        evals = 1;
      } else {
        AugmentedTpResult r = augmented_tp_dp(mdp, spec.param);
        value = r.optimal_prob;
        evals = static_cast<long>(r.n_augmented_states);
      }
      csv.row({method, kind_name(spec.kind), format_number(spec.param), format_number(value),
               format_number(beta_star), format_number(lo), format_number(hi),
               std::to_string(evals), format_number(elapsed_ms(start))});
      log << method << ' ' << kind_name(spec.kind) << '(' << format_number(spec.param)
          << ") = " << format_number(value) << '\n';
    }
  }
  return kExitOk;
}

int cmd_bench(const ExperimentConfig& cfg, std::ostream& log) {
  std::vector<double> precisions = cfg.precisions;
  if (precisions.empty()) {
    for (int i = 0; i < 10; ++i) precisions.push_back(std::pow(10.0, -3.0 + 2.0 * i / 9.0));
  }
  const std::string name = env_name(cfg.env);
  fs::create_directories(cfg.out_dir);
  CsvWriter csv(cfg.out_dir / "bench.csv",
                {"epsilon", "eval_count", "grid_count", "ratio", "n_breakpoints", "wall_ms"});
  auto emit = [&](double eps, long evals, long grid, double n_bp, double ms) {
    const double ratio = evals > 0 ? static_cast<double>(grid) / evals : nan("");
    csv.row({format_number(eps), std::to_string(evals), std::to_string(grid),
             format_number(ratio), format_number(n_bp), format_number(ms)});
    log << "eps " << format_number(eps) << ": " << evals << " vs " << grid << " (ratio "
        << format_number(ratio) << ")\n";
  };

  if (name == "coin_lottery") {
    auto dists = coin_lottery_problem();
    for (double eps : precisions) {
      auto start = std::chrono::steady_clock::now();
      LocalFront lf = find_breaks(std::span<const ReturnDistribution>(dists), 0.0, 8.0, eps);
      emit(eps, lf.eval_count, static_cast<long>(std::ceil(8.0 / eps)),
           static_cast<double>(lf.breakpoints.size()), elapsed_ms(start));
    }
    return kExitOk;
  }
  if (name == "ensemble") {
    std::vector<std::vector<ReturnDistribution>> problems;
    for (int i = 0; i < cfg.ensemble_problems; ++i) {
      problems.push_back(random_simplex_problem(cfg.ensemble_actions, cfg.ensemble_atoms, cfg.seed + i));
    }
    const double range = cfg.ensemble_hi - cfg.ensemble_lo;
    for (double eps : precisions) {
      auto start = std::chrono::steady_clock::now();
      long evals = 0;
      double n_bp = 0.0;
      for (const auto& p : problems) {
        LocalFront lf = find_breaks(std::span<const ReturnDistribution>(p), cfg.ensemble_lo,
                                    cfg.ensemble_hi, eps);
        evals += lf.eval_count;
        n_bp += static_cast<double>(lf.breakpoints.size());
      }
      emit(eps, evals, static_cast<long>(problems.size()) * static_cast<long>(std::ceil(range / eps)),
           n_bp / static_cast<double>(problems.size()), elapsed_ms(start));
    }
    return kExitOk;
  }

  TabularMDP mdp = build_env(cfg.env, cfg.seed, cfg.base_dir);
  long decisions = 0;
  for (int t = 0; t < mdp.horizon; ++t) {
    for (int x = 0; x < mdp.n_states; ++x) decisions += mdp.actions(t, x).size() > 1;
  }
  for (double eps : precisions) {
    auto start = std::chrono::steady_clock::now();
    OptimalityFront front = dolfin(mdp, eps, cfg.beta_min);
    const long grid = static_cast<long>(std::ceil(-cfg.beta_min / eps)) * decisions;
    emit(eps, front.total_eval_count, grid, static_cast<double>(front.breakpoints.size()),
         elapsed_ms(start));
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimality fronts of the entropic risk measure for tabular MDPs", "riskfront"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::map<std::string, int (*)(const ExperimentConfig&, std::ostream&)> commands{
      {"front", cmd_front}, {"evaluate", cmd_evaluate}, {"bench", cmd_bench}};
  std::map<std::string, std::string> help{
      {"front", "compute the optimality front of an environment"},
      {"evaluate", "compare methods on a list of risk measures"},
      {"bench", "count entropic-risk evaluations against a naive grid"}};
  for (const auto& [name, _] : commands) {
    CLI::App* sub = app.add_subcommand(name, help[name]);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory, overrides out_dir");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const fs::path path(config_path);
    ExperimentConfig cfg = parse_config(read_file(path), path.parent_path());
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return commands.at(command)(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace riskfront
