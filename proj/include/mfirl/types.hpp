#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mfirl {

using StateId = std::int32_t;
using ActionId = std::int32_t;

/// One demonstrated episode: the ordered (state, action) pairs at which the
/// demonstrator acted. Terminal states carry no action and are not recorded.
struct Trajectory {
  std::vector<std::pair<StateId, ActionId>> steps;

  int length() const { return static_cast<int>(steps.size()); }
  bool empty() const { return steps.empty(); }
};

/// A set of demonstrated trajectories, all from the same environment.
struct DemonstrationSet {
  std::string env_tag;
  std::vector<Trajectory> trajectories;

  std::size_t total_steps() const {
    std::size_t n = 0;
    for (const auto& t : trajectories) n += t.steps.size();
    return n;
  }

  /// Throws unless the set is usable as learner input: non-empty, and every
  /// trajectory has at least one step.
  void require_valid_for_fitting() const {
    if (trajectories.empty())
      throw std::invalid_argument("no demonstrations");
    for (const auto& t : trajectories)
      if (t.empty())
        throw std::invalid_argument("demonstration trajectory with no steps");
  }
};

}  // namespace mfirl
