#include "mfirl/envs/gridworld.hpp"

#include <map>
#include <stdexcept>

namespace mfirl {

GridworldEnv::GridworldEnv(Params params) : params_(params) {
  if (params_.size < 2 || params_.region < 1 || params_.region > params_.size)
    throw std::invalid_argument("gridworld: bad geometry");
  if (params_.slip < 0.0 || params_.slip > 1.0)
    throw std::invalid_argument("gridworld: slip must be a probability");
  build_model();
}

std::vector<ActionId> GridworldEnv::legal_actions(StateId) const {
  return {kWest, kEast, kNorth, kSouth, kStill};
}

bool GridworldEnv::in_reward_region(StateId s) const {
  const auto [x, y] = decode(s);
  const int r = params_.region;
  const int n = params_.size;
  const bool lower_left = x < r && y < r;
  const bool upper_right = x >= n - r && y >= n - r;
  return lower_left || upper_right;
}

StateId GridworldEnv::move(StateId s, ActionId a) const {
  auto [x, y] = decode(s);
  const int n = params_.size;
  switch (a) {
    case kWest: x = std::max(0, x - 1); break;
    case kEast: x = std::min(n - 1, x + 1); break;
    case kNorth: y = std::min(n - 1, y + 1); break;
    case kSouth: y = std::max(0, y - 1); break;
    case kStill: break;
    default: throw std::invalid_argument("gridworld: unknown action");
  }
  return encode(x, y);
}

StateId GridworldEnv::reset(Rng& rng) const {
  return rng.uniform_int(n_states());
}

StepResult GridworldEnv::step(StateId s, ActionId a, Rng& rng) const {
  if (a < 0 || a >= n_actions())
    throw std::invalid_argument("gridworld: unknown action");
  ActionId executed = a;
  if (rng.uniform01() < params_.slip) executed = rng.uniform_int(n_actions());
  return {move(s, executed), state_reward(s), false};
}

void GridworldEnv::build_model() {
  model_ = TabularMDP::empty(n_states(), n_actions(), params_.discount);
  const double p_keep = 1.0 - params_.slip;
  const double p_each = params_.slip / n_actions();

  for (StateId s = 0; s < n_states(); ++s) {
    model_.start_dist[s] = 1.0 / n_states();
    for (ActionId a = 0; a < n_actions(); ++a) {
      std::map<StateId, double> next;  // clamping merges outcomes
      next[move(s, a)] += p_keep;
      for (ActionId e = 0; e < n_actions(); ++e) next[move(s, e)] += p_each;
      auto& tr = model_.trans[model_.index(s, a)];
      for (const auto& [ns, prob] : next) tr.push_back({ns, prob});
      model_.reward[model_.index(s, a)] = state_reward(s);
    }
  }
  model_.validate();
}

}  // namespace mfirl
