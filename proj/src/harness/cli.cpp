#include "mfirl/harness/cli.hpp"

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mfirl/csv.hpp"
#include "mfirl/demo_io.hpp"
#include "mfirl/estimators.hpp"
#include "mfirl/eval/solvers.hpp"
#include "mfirl/features/features.hpp"
#include "mfirl/harness/experiment.hpp"
#include "mfirl/lstdq.hpp"

namespace mfirl {

namespace {

/// Shared flag state; subcommand handlers read what they need.
struct CliArgs {
  std::string env;
  std::string model;
  std::string episodes;  // single count or comma list, per subcommand
  int runs = -1;
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out;
  std::string demos_path;
  std::string params_path;
};

Config load_config(const CliArgs& args) {
  Config cfg;
  if (!args.config_path.empty()) cfg = Config::parse_file(args.config_path);
  if (!args.env.empty()) cfg.set("env", args.env);
  if (!args.model.empty()) cfg.set("models", args.model);
  if (!args.episodes.empty()) cfg.set("episodes", args.episodes);
  if (args.runs >= 0) cfg.set("runs", std::to_string(args.runs));
  if (args.seed) cfg.set("seed", std::to_string(*args.seed));
  if (!args.out.empty()) cfg.set("out", args.out);
  return cfg;
}

int cmd_gen_demos(const CliArgs& args) {
  Config cfg = load_config(args);
  cfg.set("models", "po");  // irrelevant to generation; keep config valid
  const ExperimentConfig ec = ExperimentConfig::from_config(cfg);
  const std::vector<int> counts = parse_int_list(
      args.episodes.empty() ? cfg.get("episodes", "") : args.episodes);
  if (counts.size() != 1)
    throw ConfigError("gen-demos expects a single --episodes count");
  if (args.out.empty()) throw ConfigError("gen-demos requires --out <file>");

  // Demonstrations always come from the canonical demo variant of the env
  // (for tictactoe: the expert plays against the random opponent, whichever
  // opponent is later evaluated).
  const auto env = build_env(demo_env_tag(ec.env_tag), ec);
  const Policy expert = make_expert(*env);
  const int max_steps = env->episodic() ? 0 : ec.gridworld_episode_steps;
  Rng rng(ec.seed);
  const DemonstrationSet demos =
      generate_demos(*env, expert, counts[0], max_steps, rng);
  save_demonstrations(args.out, demos);
  std::cout << "wrote " << demos.trajectories.size() << " episodes ("
            << demos.total_steps() << " steps) to " << args.out << "\n";
  return 0;
}

int cmd_fit(const CliArgs& args) {
  if (args.model != "rp" && args.model != "po")
    throw ConfigError("fit requires --model rp or --model po");
  if (args.out.empty()) throw ConfigError("fit requires --out <params-file>");
  const DemonstrationSet demos = load_demonstrations(args.demos_path);
  if (!args.env.empty() && demo_env_tag(args.env) != demos.env_tag)
    throw ConfigError("demo file is for env " + demos.env_tag +
                      ", not " + args.env);

  Config cfg = load_config(args);
  cfg.set("env", demos.env_tag);
  cfg.set("models", args.model);
  const ExperimentConfig ec = ExperimentConfig::from_config(cfg);
  const auto env = build_env(ec.env_tag, ec);
  const auto features = make_feature_map(*env, ec.features);

  if (args.model == "po") {
    const PoFit fit = fit_po(demos, *env, *features, ec.beta, ec.fit);
    save_params(args.out, "po", fit.params.beta, fit.params.w_Q);
    std::cout << "po fit: objective " << csv_double(fit.report.objective)
              << ", " << fit.report.iterations << " iterations, "
              << csv_double(fit.report.wall_ms) << " ms\n";
  } else {
    LstdqSystem sys = lstdq_accumulate(demos, *features, ec.lstdq_gamma,
                                       ec.lstdq_include_terminal &&
                                           env->episodic());
    sys.solve(ec.lstdq_ridge ? *ec.lstdq_ridge : sys.default_ridge());
    const auto sys_ptr = std::make_shared<const LstdqSystem>(std::move(sys));
    const RpFit fit =
        fit_rp(demos, *env, *features, sys_ptr, ec.beta, ec.fit);
    save_params(args.out, "rp", fit.params.beta, fit.params.w_R);
    std::cout << "rp fit: objective " << csv_double(fit.report.objective)
              << ", " << fit.report.iterations << " iterations, "
              << csv_double(fit.report.wall_ms) << " ms\n";
  }
  return 0;
}

int cmd_eval(const CliArgs& args) {
  std::optional<DemonstrationSet> demos;
  if (!args.demos_path.empty()) demos = load_demonstrations(args.demos_path);

  Config cfg = load_config(args);
  if (!cfg.has("env")) {
    if (!demos)
      throw ConfigError("eval needs --env (params files do not record it)");
    cfg.set("env", demos->env_tag);
  }
  cfg.set("models", "po");  // placate the model-list check
  const ExperimentConfig ec = ExperimentConfig::from_config(cfg);
  if (demos && demo_env_tag(ec.env_tag) != demos->env_tag)
    throw ConfigError("demo file is for env " + demos->env_tag +
                      ", not " + ec.env_tag);
  const auto env = build_env(ec.env_tag, ec);
  const auto features = make_feature_map(*env, ec.features);
  const LoadedParams params = load_params(args.params_path);
  const PolicyMode mode = ec.eval_mode == "softmax" ? PolicyMode::Softmax
                                                    : PolicyMode::Greedy;

  std::optional<Policy> policy;
  if (params.model == "po") {
    PoParams po{params.w, params.beta};
    policy = extract_policy(po, features, mode);
  } else {
    if (!demos)
      throw ConfigError(
          "evaluating rp params needs the demonstration file that defined "
          "the value map (pass it as the second positional argument)");
    LstdqSystem sys = lstdq_accumulate(*demos, *features, ec.lstdq_gamma,
                                       ec.lstdq_include_terminal &&
                                           env->episodic());
    sys.solve(ec.lstdq_ridge ? *ec.lstdq_ridge : sys.default_ridge());
    RpParams rp;
    rp.w_R = params.w;
    rp.beta = params.beta;
    rp.system = std::make_shared<const LstdqSystem>(std::move(sys));
    policy = extract_policy(rp, features, mode);
  }
  const LossReport report = loss(env->exact_model(), *policy);
  std::cout << "loss: " << csv_double(report.loss) << "\n";
  if (!args.out.empty()) write_loss_csv(args.out, report);
  return 0;
}

int cmd_sweep(const CliArgs& args) {
  const Config cfg = load_config(args);
  const ExperimentConfig ec = ExperimentConfig::from_config(cfg);
  run_sweep(ec);
  for (const std::string& model : ec.models)
    std::cout << "wrote " << ec.out_dir << "/" << env_dir_name(ec.env_tag)
              << "/" << model << "/results.csv\n";
  return 0;
}

int cmd_solve_env(const CliArgs& args) {
  Config cfg = load_config(args);
  cfg.set("models", "po");
  const ExperimentConfig ec = ExperimentConfig::from_config(cfg);
  const auto env = build_env(ec.env_tag, ec);
  const ValueIterationResult vi = value_iteration(env->exact_model());
  const double start_value = env->exact_model().start_dist.dot(vi.values.V);
  std::cout << "env: " << ec.env_tag << "\n"
            << "states: " << env->n_states() << "\n"
            << "start-state optimal value: " << csv_double(start_value)
            << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Model-free inverse RL: fit reward or value weights from "
               "demonstrations and benchmark them on exact models"};
  app.require_subcommand(1);
  CliArgs args;

  const auto add_common = [&args](CLI::App* sub) {
    sub->add_option("--env", args.env,
                    "blackjack | gridworld32 | tictactoe:random | "
                    "tictactoe:minimax");
    sub->add_option("--seed", args.seed, "master seed");
    sub->add_option("--config", args.config_path, "key = value config file");
  };

  CLI::App* gen = app.add_subcommand("gen-demos",
                                     "Roll the expert and save episodes");
  add_common(gen);
  gen->add_option("--episodes", args.episodes, "episode count")->required();
  gen->add_option("--out", args.out, "output demo file")->required();

  CLI::App* fit = app.add_subcommand("fit", "Fit model weights from a demo file");
  fit->add_option("demos", args.demos_path, "demonstration file")->required();
  add_common(fit);
  fit->add_option("--model", args.model, "rp | po")->required();
  fit->add_option("--out", args.out, "output params file")->required();

  CLI::App* eval = app.add_subcommand("eval",
                                      "Exact loss of a fitted params file");
  eval->add_option("params", args.params_path, "params file")->required();
  eval->add_option("demos", args.demos_path,
                   "demo file (required for rp params)");
  add_common(eval);
  eval->add_option("--out", args.out, "optional per-state loss CSV");

  CLI::App* sweep = app.add_subcommand("sweep",
                                       "Run the episodes-vs-loss experiment");
  add_common(sweep);
  sweep->add_option("--model", args.model, "model or comma list");
  sweep->add_option("--episodes", args.episodes, "comma list of counts");
  sweep->add_option("--runs", args.runs, "runs per episode count");
  sweep->add_option("--out", args.out, "output directory");

  CLI::App* solve = app.add_subcommand("solve-env",
                                       "Print the optimal start value");
  add_common(solve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message and usage hint
    return 1;
  }

  try {
    if (gen->parsed()) return cmd_gen_demos(args);
    if (fit->parsed()) return cmd_fit(args);
    if (eval->parsed()) return cmd_eval(args);
    if (sweep->parsed()) return cmd_sweep(args);
    if (solve->parsed()) return cmd_solve_env(args);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mfirl
