#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mfirl/rng.hpp"
#include "mfirl/tabular_mdp.hpp"
#include "mfirl/types.hpp"

namespace mfirl {

struct StepResult {
  StateId next;
  double reward;  // visible to tests and evaluation, never to the estimators
  bool done;
};

/// A benchmark environment: a sampler for demonstration rollouts plus an
/// exact tabular model for experts and evaluation. Immutable after
/// construction; reset/step draw from a caller-owned Rng, so independent
/// workers can sample concurrently.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string tag() const = 0;
  virtual int n_states() const = 0;
  virtual int n_actions() const = 0;
  virtual bool episodic() const = 0;

  virtual bool is_terminal(StateId s) const = 0;
  virtual std::vector<ActionId> legal_actions(StateId s) const = 0;

  virtual StateId reset(Rng& rng) const = 0;
  virtual StepResult step(StateId s, ActionId a, Rng& rng) const = 0;

  /// The exact model, built eagerly at construction.
  virtual const TabularMDP& exact_model() const = 0;
};

/// Tags: blackjack | gridworld32 | tictactoe:random | tictactoe:minimax.
std::unique_ptr<Environment> make_environment(const std::string& tag);

}  // namespace mfirl
