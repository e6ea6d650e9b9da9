#pragma once

#include <string>

#include <Eigen/Dense>

#include "mfirl/feature_map.hpp"
#include "mfirl/types.hpp"

namespace mfirl {

/// Linear system tying reward weights to action-value weights, built from
/// demonstrations alone:
///   A = Σ g_Q(s_t,a_t) (g_Q(s_t,a_t) − γ g_Q(s_{t+1},a_{t+1}))ᵀ
///   Z = Σ g_Q(s_t,a_t) r_t ᵀ
/// where r_t are the reward features the map attributes to step t
/// (FeatureMap::step_reward_features: g_R(s_t) for state rewards, the
/// created position's features under the afterstate layout). C solves
/// (A + λI) C = Z, so that w_Q = C w_R.
struct LstdqSystem {
  Eigen::MatrixXd A;  // m_Q x m_Q
  Eigen::MatrixXd Z;  // m_Q x m_R
  Eigen::MatrixXd C;  // empty until solve()
  double gamma = 0.0;
  double ridge = 0.0;       // lambda used by the last solve()
  long sample_count = 0;    // transitions accumulated, closures included

  bool solved() const { return C.size() > 0; }

  /// Scale-aware default regularizer: 1e-6 * trace(A) / m_Q.
  double default_ridge() const;

  /// Fills C by a partial-pivoting dense solve of (A + λI) C = Z, with
  /// iterative refinement until the max-norm residual is at most 1e-10.
  /// Throws std::runtime_error when A + λI has reciprocal condition below
  /// 1e-12, advising a larger ridge.
  void solve(double lambda);

  /// w_Q = C w_R. Requires solve() first and a matching dimension.
  Eigen::VectorXd q_weights(const Eigen::VectorXd& w_R) const;

  /// Max-norm of (A + λI) C − Z, the quantity solve() drives down.
  double residual() const;

  /// Writes A, Z and (when solved) C as CSV matrices.
  void dump_csv(const std::string& path_prefix) const;
};

/// Accumulates the sums over every consecutive demonstration pair. When
/// `include_terminal` is set, each episode's final step also enters the
/// sums with a zero successor vector; callers enable this only for
/// episodic environments, where the episode is known to have ended in the
/// absorbing terminal. Throws on an empty demonstration set and when no
/// transition at all survives (all episodes shorter than 2 with closure
/// off).
LstdqSystem lstdq_accumulate(const DemonstrationSet& demos,
                             const FeatureMap& features, double gamma,
                             bool include_terminal);

}  // namespace mfirl
