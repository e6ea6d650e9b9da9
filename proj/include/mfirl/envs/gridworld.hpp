#pragma once

#include "mfirl/envs/environment.hpp"

namespace mfirl {

/// Square gridworld (default 32x32). Five actions: west, east, north, south,
/// still. With probability `slip` the chosen action is replaced by a uniform
/// draw over all five; walls clamp movement. Reward is +1 inside the two
/// corner regions (lower-left and upper-right blocks) and -1 elsewhere,
/// attached to the current state for every action. Continuing task, uniform
/// start distribution.
class GridworldEnv final : public Environment {
 public:
  static constexpr int kWest = 0;
  static constexpr int kEast = 1;
  static constexpr int kNorth = 2;
  static constexpr int kSouth = 3;
  static constexpr int kStill = 4;

  struct Params {
    int size = 32;
    int region = 8;          // corner blocks are region x region
    double slip = 0.3;
    double reward_in = 1.0;  // inside either corner block
    double reward_out = -1.0;
    double discount = 0.95;
  };

  GridworldEnv() : GridworldEnv(Params{}) {}
  explicit GridworldEnv(Params params);

  std::string tag() const override { return "gridworld32"; }
  int n_states() const override { return params_.size * params_.size; }
  int n_actions() const override { return 5; }
  bool episodic() const override { return false; }

  bool is_terminal(StateId) const override { return false; }
  std::vector<ActionId> legal_actions(StateId s) const override;

  StateId reset(Rng& rng) const override;
  StepResult step(StateId s, ActionId a, Rng& rng) const override;
  const TabularMDP& exact_model() const override { return model_; }

  const Params& params() const { return params_; }

  StateId encode(int x, int y) const { return y * params_.size + x; }
  std::pair<int, int> decode(StateId s) const {
    return {s % params_.size, s / params_.size};
  }

  bool in_reward_region(StateId s) const;
  double state_reward(StateId s) const {
    return in_reward_region(s) ? params_.reward_in : params_.reward_out;
  }

 private:
  StateId move(StateId s, ActionId a) const;  // deterministic, clamped
  void build_model();

  Params params_;
  TabularMDP model_;
};

}  // namespace mfirl
