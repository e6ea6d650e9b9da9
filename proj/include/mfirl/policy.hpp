#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "mfirl/feature_map.hpp"
#include "mfirl/rng.hpp"
#include "mfirl/tabular_mdp.hpp"
#include "mfirl/types.hpp"

namespace mfirl {

enum class TieBreak { LowestIndex };

/// Softmax action distribution over the legal set:
///   p(a) = exp(beta * g_Q(s,a)^T w) / sum_{a' legal} exp(beta * g_Q(s,a')^T w).
/// Computed with max-subtraction, so scores up to |beta * score| ~ 700 do not
/// overflow. The returned vector is indexed like `legal`.
Eigen::VectorXd softmax_policy_prob(const Eigen::VectorXd& weights, double beta,
                                    const FeatureMap& features, StateId s,
                                    std::span<const ActionId> legal);

/// Argmax of g_Q(s,a)^T w over the legal set; ties go to the lowest action id.
ActionId greedy_action(const Eigen::VectorXd& weights,
                       const FeatureMap& features, StateId s,
                       std::span<const ActionId> legal,
                       TieBreak tie = TieBreak::LowestIndex);

/// A policy, either as an explicit per-state action distribution (zero mass
/// on illegal actions) or parametric over value features (softmax or
/// deterministic greedy).
class Policy {
 public:
  /// Empty tabular policy; usable only after assignment from a factory.
  Policy() = default;

  static Policy tabular(Eigen::MatrixXd probs);
  static Policy softmax(std::shared_ptr<const FeatureMap> features,
                        Eigen::VectorXd weights, double beta);
  /// Deterministic argmax of g_Q(s,a)^T w; ties to the lowest action id.
  static Policy greedy(std::shared_ptr<const FeatureMap> features,
                       Eigen::VectorXd weights);

  /// Uniform distribution over each non-terminal state's legal actions.
  static Policy uniform(const TabularMDP& mdp);

  bool is_tabular() const { return features_ == nullptr; }

  /// Action distribution at s, indexed like `legal`.
  Eigen::VectorXd action_probs(StateId s, std::span<const ActionId> legal) const;

  ActionId sample(StateId s, std::span<const ActionId> legal, Rng& rng) const;

  /// Expands to an explicit table over the MDP's states (rows of terminal
  /// states are left all-zero).
  Eigen::MatrixXd tabulate(const TabularMDP& mdp) const;

  /// Tabular representation; throws for parametric policies.
  const Eigen::MatrixXd& probs() const;

  /// Asserts rows of a tabular policy are distributions within tol.
  void validate(const TabularMDP& mdp, double tol = 1e-9) const;

 private:
  Eigen::MatrixXd probs_;  // tabular representation
  std::shared_ptr<const FeatureMap> features_;  // parametric representation
  Eigen::VectorXd weights_;
  double beta_ = 1.0;
  bool greedy_ = false;
};

}  // namespace mfirl
