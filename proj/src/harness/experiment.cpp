#include "mfirl/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mfirl/csv.hpp"
#include "mfirl/envs/gridworld.hpp"
#include "mfirl/envs/tictactoe.hpp"
#include "mfirl/eval/solvers.hpp"
#include "mfirl/lstdq.hpp"

namespace mfirl {

namespace {

const std::vector<std::string> kKnownModels = {"rp", "po", "rp-resolve",
                                               "random-baseline"};

Scaling parse_scaling(const std::string& s) {
  if (s == "unit") return Scaling::UnitInterval;
  if (s == "symmetric") return Scaling::Symmetric;
  if (s == "none") return Scaling::None;
  throw ConfigError("features.scaling must be unit, symmetric or none");
}

std::string scaling_name(Scaling s) {
  switch (s) {
    case Scaling::UnitInterval: return "unit";
    case Scaling::Symmetric: return "symmetric";
    case Scaling::None: return "none";
  }
  return "unit";
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out << ',';
    out << items[i];
  }
  return out.str();
}

std::string sanitize_status(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace

std::string env_dir_name(std::string tag) {
  for (char& c : tag)
    if (c == ':') c = '-';
  return tag;
}

ExperimentConfig ExperimentConfig::from_config(const Config& cfg) {
  ExperimentConfig ec;
  ec.env_tag = cfg.get("env", "");
  if (ec.env_tag.empty()) throw ConfigError("config: env is required");

  const bool gridworld = ec.env_tag == "gridworld32";
  ec.models = cfg.get_list("models", kKnownModels);
  ec.episode_counts = cfg.get_int_list("episodes", {10, 100, 1000, 10000});
  ec.runs = cfg.get_int("runs", gridworld ? 10 : 200);
  ec.seed = cfg.get_u64("seed", 1);
  ec.beta = cfg.get_double("beta", 1.0);
  ec.gridworld_discount = cfg.get_double("gridworld.discount", 0.95);
  ec.gridworld_episode_steps = cfg.get_int("gridworld.episode_steps", 8);
  ec.lstdq_gamma =
      cfg.get_double("lstdq.gamma", gridworld ? ec.gridworld_discount : 1.0);
  if (cfg.has("lstdq.ridge") && cfg.get("lstdq.ridge", "") != "auto")
    ec.lstdq_ridge = cfg.get_double("lstdq.ridge", 0.0);
  ec.lstdq_include_terminal = cfg.get_bool("lstdq.include_terminal", true);
  ec.fit.tol_grad = cfg.get_double("fit.tol_grad", 1e-6);
  ec.fit.max_iter = cfg.get_int("fit.max_iter", 500);
  ec.eval_mode = cfg.get("eval.mode", "greedy");
  ec.features.scaling = parse_scaling(cfg.get("features.scaling", "unit"));
  ec.features.blackjack_basis = cfg.get_int("features.blackjack_basis", 10);
  ec.out_dir = cfg.get("out", "out");
  ec.validate();
  return ec;
}

void ExperimentConfig::validate() const {
  if (env_tag != "blackjack" && env_tag != "gridworld32" &&
      env_tag != "tictactoe:random" && env_tag != "tictactoe:minimax")
    throw ConfigError("unknown env: " + env_tag);
  if (models.empty()) throw ConfigError("config: empty model list");
  for (const auto& m : models)
    if (std::find(kKnownModels.begin(), kKnownModels.end(), m) ==
        kKnownModels.end())
      throw ConfigError("unknown model: " + m);
  if (episode_counts.empty())
    throw ConfigError("config: empty episode list");
  for (std::size_t i = 0; i < episode_counts.size(); ++i) {
    if (episode_counts[i] <= 0)
      throw ConfigError("config: episode counts must be positive");
    if (i > 0 && episode_counts[i] <= episode_counts[i - 1])
      throw ConfigError("config: episode counts must be strictly increasing");
  }
  if (runs < 1) throw ConfigError("config: runs must be >= 1");
  if (beta <= 0.0) throw ConfigError("config: beta must be positive");
  if (lstdq_gamma < 0.0 || lstdq_gamma > 1.0)
    throw ConfigError("config: lstdq.gamma must be in [0, 1]");
  if (lstdq_ridge && *lstdq_ridge < 0.0)
    throw ConfigError("config: lstdq.ridge must be non-negative");
  if (eval_mode != "greedy" && eval_mode != "softmax")
    throw ConfigError("config: eval.mode must be greedy or softmax");
  if (features.blackjack_basis != 10 && features.blackjack_basis != 14)
    throw ConfigError("config: features.blackjack_basis must be 10 or 14");
  if (gridworld_episode_steps < 1)
    throw ConfigError("config: gridworld.episode_steps must be >= 1");
  if (gridworld_discount <= 0.0 || gridworld_discount >= 1.0)
    throw ConfigError("config: gridworld.discount must be in (0, 1)");
  if (fit.tol_grad <= 0.0 || fit.max_iter < 1)
    throw ConfigError("config: bad fit tolerances");
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> kv;
  kv["env"] = env_tag;
  kv["models"] = join(models);
  kv["episodes"] = join(episode_counts);
  kv["runs"] = std::to_string(runs);
  kv["seed"] = std::to_string(seed);
  kv["beta"] = csv_double(beta);
  kv["lstdq.gamma"] = csv_double(lstdq_gamma);
  kv["lstdq.ridge"] = lstdq_ridge ? csv_double(*lstdq_ridge) : "auto";
  kv["lstdq.include_terminal"] = lstdq_include_terminal ? "true" : "false";
  kv["fit.tol_grad"] = csv_double(fit.tol_grad);
  kv["fit.max_iter"] = std::to_string(fit.max_iter);
  kv["eval.mode"] = eval_mode;
  kv["features.scaling"] = scaling_name(features.scaling);
  kv["features.blackjack_basis"] = std::to_string(features.blackjack_basis);
  kv["gridworld.discount"] = csv_double(gridworld_discount);
  kv["gridworld.episode_steps"] = std::to_string(gridworld_episode_steps);
  kv["out"] = out_dir;
  return kv;
}

std::shared_ptr<const Environment> build_env(const std::string& tag,
                                             const ExperimentConfig& cfg) {
  if (tag == "gridworld32") {
    GridworldEnv::Params params;
    params.discount = cfg.gridworld_discount;
    return std::make_shared<const GridworldEnv>(params);
  }
  return std::shared_ptr<const Environment>(make_environment(tag));
}

Policy make_expert(const Environment& env) {
  if (const auto* ttt_env = dynamic_cast<const TicTacToeEnv*>(&env)) {
    Eigen::MatrixXd probs =
        Eigen::MatrixXd::Zero(env.n_states(), env.n_actions());
    for (StateId s = 0; s < ttt_env->x_state_count(); ++s) {
      const auto& entry = ttt_env->solution().at(ttt_env->board_of(s));
      const double p = 1.0 / static_cast<double>(entry.optimal_moves.size());
      for (const int cell : entry.optimal_moves) probs(s, cell) = p;
    }
    return Policy::tabular(std::move(probs));
  }
  return value_iteration(env.exact_model()).policy;
}

DemonstrationSet generate_demos(const Environment& env, const Policy& expert,
                                int n_episodes, int max_steps, Rng& rng) {
  if (!env.episodic() && max_steps <= 0)
    throw std::invalid_argument(
        "generate_demos: continuing environment needs a step cap");
  DemonstrationSet demos;
  demos.env_tag = env.tag();
  demos.trajectories.reserve(n_episodes);
  for (int k = 0; k < n_episodes; ++k) {
    Trajectory traj;
    StateId s = env.reset(rng);
    while (true) {
      if (max_steps > 0 && traj.length() >= max_steps) break;
      const std::vector<ActionId> legal = env.legal_actions(s);
      const ActionId a = expert.sample(s, legal, rng);
      traj.steps.emplace_back(s, a);
      const StepResult res = env.step(s, a, rng);
      if (res.done) break;
      s = res.next;
    }
    demos.trajectories.push_back(std::move(traj));
  }
  return demos;
}

std::string demo_env_tag(const std::string& env_tag) {
  if (env_tag.rfind("tictactoe", 0) == 0) return "tictactoe:random";
  return env_tag;
}

namespace {

void write_results_csv(const std::string& path,
                       const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "run,env,model,episodes,loss,fit_ms,eval_mode,seed,status\n";
  for (const ResultRow& r : rows)
    out << r.run << ',' << r.env << ',' << r.model << ',' << r.episodes << ','
        << csv_double(r.loss) << ',' << csv_double(r.fit_ms) << ','
        << r.eval_mode << ',' << r.seed << ',' << r.status << "\n";
}

void write_summary_csv(const std::string& path, const std::string& env,
                       const std::string& model,
                       const std::vector<int>& episode_counts,
                       const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "env,model,episodes,runs,mean_loss,stderr_loss\n";
  for (const int ep : episode_counts) {
    double sum = 0.0;
    int n = 0;
    for (const ResultRow& r : rows)
      if (r.episodes == ep && r.status == "ok") {
        sum += r.loss;
        ++n;
      }
    const double mean = n ? sum / n : std::numeric_limits<double>::quiet_NaN();
    double var = 0.0;
    for (const ResultRow& r : rows)
      if (r.episodes == ep && r.status == "ok")
        var += (r.loss - mean) * (r.loss - mean);
    const double stderr_loss =
        n > 1 ? std::sqrt(var / (n - 1)) / std::sqrt(static_cast<double>(n))
              : 0.0;
    out << env << ',' << model << ',' << ep << ',' << n << ','
        << csv_double(mean) << ',' << csv_double(stderr_loss) << "\n";
  }
}

void write_config_echo(const std::string& path,
                       const std::map<std::string, std::string>& kv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::shared_ptr<const Environment> eval_env =
      build_env(cfg.env_tag, cfg);
  const TabularMDP& eval_model = eval_env->exact_model();
  const std::string demo_tag = demo_env_tag(cfg.env_tag);
  const std::shared_ptr<const Environment> demo_env =
      demo_tag == cfg.env_tag ? eval_env : build_env(demo_tag, cfg);
  const std::shared_ptr<const FeatureMap> features =
      make_feature_map(*eval_env, cfg.features);
  const Policy expert = make_expert(*demo_env);
  const Eigen::VectorXd v_star = value_iteration(eval_model).values.V;

  const bool closure = cfg.lstdq_include_terminal && demo_env->episodic();
  const int max_steps =
      demo_env->episodic() ? 0 : cfg.gridworld_episode_steps;
  const PolicyMode mode = cfg.eval_mode == "softmax" ? PolicyMode::Softmax
                                                     : PolicyMode::Greedy;

  std::vector<ResultRow> all;
  for (const std::string& model : cfg.models) {
    std::vector<ResultRow> rows;
    for (const int episodes : cfg.episode_counts) {
      for (int run = 0; run < cfg.runs; ++run) {
        ResultRow row;
        row.run = run;
        row.env = cfg.env_tag;
        row.model = model;
        row.episodes = episodes;
        row.seed = split_seed(cfg.seed, static_cast<std::uint64_t>(episodes),
                              static_cast<std::uint64_t>(run));
        row.eval_mode = model == "rp-resolve"     ? "resolve"
                        : model == "random-baseline" ? "uniform"
                                                     : cfg.eval_mode;
        try {
          Rng rng(row.seed);
          std::optional<Policy> policy;
          if (model == "random-baseline") {
            policy = Policy::uniform(eval_model);
          } else {
            const DemonstrationSet demos =
                generate_demos(*demo_env, expert, episodes, max_steps, rng);
            const auto t0 = std::chrono::steady_clock::now();
            if (model == "po") {
              const PoFit fit =
                  fit_po(demos, *demo_env, *features, cfg.beta, cfg.fit);
              row.fit_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
              policy = extract_policy(fit.params, features, mode);
            } else {
              LstdqSystem sys = lstdq_accumulate(demos, *features,
                                                 cfg.lstdq_gamma, closure);
              sys.solve(cfg.lstdq_ridge ? *cfg.lstdq_ridge
                                        : sys.default_ridge());
              const auto sys_ptr =
                  std::make_shared<const LstdqSystem>(std::move(sys));
              const RpFit fit = fit_rp(demos, *demo_env, *features, sys_ptr,
                                       cfg.beta, cfg.fit);
              row.fit_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
              if (model == "rp") {
                policy = extract_policy(fit.params, features, mode);
              } else {
                // the fitted reward of each legal step, then plan on it
                Eigen::MatrixXd r_sa = Eigen::MatrixXd::Zero(
                    eval_model.n_states, eval_model.n_actions);
                for (StateId s = 0; s < eval_model.n_states; ++s) {
                  if (eval_model.is_terminal(s)) continue;
                  for (ActionId a = 0; a < eval_model.n_actions; ++a)
                    if (eval_model.legal(s, a))
                      r_sa(s, a) = features->step_reward_features(s, a).dot(
                          fit.params.w_R);
                }
                policy = solve_with_reward(eval_model, r_sa);
              }
            }
          }
          row.loss = loss_with_vstar(eval_model, *policy, v_star).loss;
        } catch (const std::exception& e) {
          row.loss = std::numeric_limits<double>::quiet_NaN();
          row.fit_ms = 0.0;
          row.status = sanitize_status(e.what());
        }
        rows.push_back(std::move(row));
      }
    }
    std::sort(rows.begin(), rows.end(),
              [](const ResultRow& a, const ResultRow& b) {
                return std::tie(a.episodes, a.run) < std::tie(b.episodes, b.run);
              });

    const std::filesystem::path dir = std::filesystem::path(cfg.out_dir) /
                                      env_dir_name(cfg.env_tag) / model;
    std::filesystem::create_directories(dir);
    write_results_csv((dir / "results.csv").string(), rows);
    write_summary_csv((dir / "summary.csv").string(), cfg.env_tag, model,
                      cfg.episode_counts, rows);
    write_config_echo((dir / "config.echo").string(), cfg.echo());
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

}  // namespace mfirl
