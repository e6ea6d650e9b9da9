#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mfirl/envs/environment.hpp"
#include "mfirl/estimators.hpp"
#include "mfirl/features/features.hpp"
#include "mfirl/harness/config.hpp"
#include "mfirl/policy.hpp"
#include "mfirl/rng.hpp"
#include "mfirl/types.hpp"

namespace mfirl {

/// Everything a sweep needs, resolved from a Config plus per-environment
/// defaults (episode counts 10/100/1000/10000; 200 runs, gridworld 10;
/// discount 1 for the episodic domains, 0.95 for gridworld).
struct ExperimentConfig {
  std::string env_tag;
  std::vector<std::string> models;  // rp | po | rp-resolve | random-baseline
  std::vector<int> episode_counts;
  int runs = 0;
  std::uint64_t seed = 1;
  double beta = 1.0;
  double lstdq_gamma = 1.0;
  std::optional<double> lstdq_ridge;  // empty = scale-aware default
  bool lstdq_include_terminal = true;
  FitOptions fit;
  std::string eval_mode = "greedy";  // greedy | softmax, for rp and po rows
  FeatureSpec features;
  double gridworld_discount = 0.95;
  int gridworld_episode_steps = 8;
  std::string out_dir = "out";

  /// Reads every recognized key; `env` must be present in cfg or set
  /// beforehand via the `env` key. Throws std::runtime_error on invalid
  /// values (config errors).
  static ExperimentConfig from_config(const Config& cfg);

  /// The resolved key=value view written to config.echo.
  std::map<std::string, std::string> echo() const;

  void validate() const;
};

struct ResultRow {
  int run = 0;
  std::string env;
  std::string model;
  int episodes = 0;
  double loss = 0.0;
  double fit_ms = 0.0;
  std::string eval_mode;
  std::uint64_t seed = 0;
  std::string status = "ok";
};

/// Environment instance honoring the config's gridworld knobs.
std::shared_ptr<const Environment> build_env(const std::string& tag,
                                             const ExperimentConfig& cfg);

/// Demonstrator policy: value-iteration greedy for blackjack and
/// gridworld; uniform over each position's minimax-optimal moves for
/// tic-tac-toe.
Policy make_expert(const Environment& env);

/// Rolls the expert for n_episodes episodes. Episodic environments run to
/// termination; continuing ones are truncated at max_steps (> 0).
DemonstrationSet generate_demos(const Environment& env, const Policy& expert,
                                int n_episodes, int max_steps, Rng& rng);

/// Demonstrations for fitting always come from the learner-facing task:
/// for the tic-tac-toe variants that is the game against the random
/// opponent; elsewhere it is the evaluation environment itself.
std::string demo_env_tag(const std::string& env_tag);

/// Filesystem-safe form of an environment tag (':' becomes '-').
std::string env_dir_name(std::string tag);

/// Runs every (model, episode count, run) cell: seed split, demo
/// generation, timed fit, policy extraction, exact loss. Writes
/// out/<env>/<model>/{results.csv, summary.csv, config.echo}; errors land
/// in the row's status column and the sweep continues. Returns all rows.
std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg);

}  // namespace mfirl
