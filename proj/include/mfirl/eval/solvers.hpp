#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mfirl/policy.hpp"
#include "mfirl/tabular_mdp.hpp"
#include "mfirl/types.hpp"

namespace mfirl {

/// State (and state-action) values of some policy or of the optimum.
/// Terminal states carry V = 0; Q entries of illegal actions are NaN.
struct ValueTable {
  Eigen::VectorXd V;
  Eigen::MatrixXd Q;
  double gamma = 1.0;
  std::optional<int> horizon;
};

/// Exact V^pi: finite-horizon backward induction when the model carries a
/// horizon, otherwise a direct sparse linear solve of V = R_pi + gamma
/// P_pi V restricted to non-terminal states. For gamma = 1 the chain must
/// be absorbing; a state that cannot reach a terminal under pi raises
/// "value undefined".
ValueTable policy_evaluation(const TabularMDP& mdp, const Policy& pi);

struct ValueIterationResult {
  ValueTable values;
  Policy policy;  // greedy, ties to the lowest action id
  /// Per state, every legal action whose Q comes within `tie_tol` of the
  /// maximum (empty for terminal states).
  std::vector<std::vector<ActionId>> optimal_actions;
};

/// Bellman-optimality iteration from V = 0 to sup-norm residual `tol`.
/// Throws after `max_sweeps` sweeps without convergence.
ValueIterationResult value_iteration(const TabularMDP& mdp, double tol = 1e-12,
                                     int max_sweeps = 100000,
                                     double tie_tol = 1e-9);

/// The policy's shortfall against the optimum, weighted by the start
/// distribution: sum_s mu(s) (V*(s) - V^pi(s)).
struct LossReport {
  double loss = 0.0;
  Eigen::VectorXd gaps;  // V* - V^pi per state
  Eigen::VectorXd mu;
  Eigen::VectorXd v_star;
  Eigen::VectorXd v_pi;
};

LossReport loss(const TabularMDP& mdp, const Policy& pi);

/// Same, reusing an already-computed V* (the harness solves each model
/// once per sweep).
LossReport loss_with_vstar(const TabularMDP& mdp, const Policy& pi,
                           const Eigen::VectorXd& v_star);

/// Greedy policy of the model with its reward replaced by the state-based
/// table `rho` (terminal states keep reward 0).
Policy solve_with_reward(const TabularMDP& mdp, const Eigen::VectorXd& rho);

/// Same with a per-(state, action) reward table (n_states x n_actions);
/// entries of illegal pairs and terminal states are ignored.
Policy solve_with_reward(const TabularMDP& mdp, const Eigen::MatrixXd& r_sa);

/// CSV rows: state, V*, Vpi, gap, mu.
void write_loss_csv(const std::string& path, const LossReport& report);

}  // namespace mfirl
