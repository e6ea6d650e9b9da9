#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "mfirl/types.hpp"

namespace mfirl {

struct Transition {
  StateId next;
  double prob;
};

/// Exact tabular model of an environment: transition kernel, reward table,
/// start distribution, terminal mask. Built only by the benchmark
/// environments and consumed only by experts and evaluation; the estimators
/// never see it.
///
/// Conventions:
///  - transition rows are sparse (next, prob) lists; an empty row for a
///    non-terminal state marks the action illegal there,
///  - terminal states self-loop under every action with reward 0,
///  - start_dist puts no mass on terminal states.
struct TabularMDP {
  int n_states = 0;
  int n_actions = 0;
  double discount = 1.0;
  std::optional<int> horizon;
  Eigen::VectorXd start_dist;
  std::vector<std::uint8_t> terminal;
  std::vector<std::vector<Transition>> trans;  // indexed s * n_actions + a
  std::vector<double> reward;                  // same indexing

  static TabularMDP empty(int n_states, int n_actions, double discount) {
    TabularMDP m;
    m.n_states = n_states;
    m.n_actions = n_actions;
    m.discount = discount;
    m.start_dist = Eigen::VectorXd::Zero(n_states);
    m.terminal.assign(n_states, 0);
    m.trans.assign(static_cast<std::size_t>(n_states) * n_actions, {});
    m.reward.assign(static_cast<std::size_t>(n_states) * n_actions, 0.0);
    return m;
  }

  std::size_t index(StateId s, ActionId a) const {
    return static_cast<std::size_t>(s) * n_actions + a;
  }
  const std::vector<Transition>& row(StateId s, ActionId a) const {
    return trans[index(s, a)];
  }
  double r(StateId s, ActionId a) const { return reward[index(s, a)]; }
  bool is_terminal(StateId s) const { return terminal[s] != 0; }
  bool legal(StateId s, ActionId a) const { return !row(s, a).empty(); }

  std::vector<ActionId> legal_actions(StateId s) const {
    std::vector<ActionId> out;
    for (ActionId a = 0; a < n_actions; ++a)
      if (legal(s, a)) out.push_back(a);
    return out;
  }

  void add_terminal_self_loops(StateId s) {
    terminal[s] = 1;
    for (ActionId a = 0; a < n_actions; ++a) {
      trans[index(s, a)] = {{s, 1.0}};
      reward[index(s, a)] = 0.0;
    }
  }

  /// Checks row stochasticity, the start distribution, and the terminal
  /// conventions. Throws std::logic_error on the first violation.
  void validate(double tol = 1e-12) const;
};

}  // namespace mfirl
