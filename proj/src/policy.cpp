#include "mfirl/policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace mfirl {

Eigen::VectorXd softmax_policy_prob(const Eigen::VectorXd& weights, double beta,
                                    const FeatureMap& features, StateId s,
                                    std::span<const ActionId> legal) {
  if (legal.empty())
    throw std::invalid_argument("softmax_policy_prob: empty legal action set");
  if (!weights.allFinite())
    throw std::invalid_argument("softmax_policy_prob: non-finite weights");

  const int k = static_cast<int>(legal.size());
  Eigen::VectorXd scores(k);
  for (int i = 0; i < k; ++i) {
    const BlockVec bv = features.value_features_block(s, legal[i]);
    scores[i] =
        beta * bv.values.dot(weights.segment(bv.offset, bv.values.size()));
  }
  const double m = scores.maxCoeff();
  Eigen::VectorXd p = (scores.array() - m).exp();
  p /= p.sum();
  return p;
}

ActionId greedy_action(const Eigen::VectorXd& weights,
                       const FeatureMap& features, StateId s,
                       std::span<const ActionId> legal, TieBreak) {
  if (legal.empty())
    throw std::invalid_argument("greedy_action: empty legal action set");
  ActionId best = legal[0];
  double best_score = -std::numeric_limits<double>::infinity();
  for (const ActionId a : legal) {
    const BlockVec bv = features.value_features_block(s, a);
    const double score =
        bv.values.dot(weights.segment(bv.offset, bv.values.size()));
    // strict > keeps the lowest action id on ties (legal is id-sorted)
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

Policy Policy::tabular(Eigen::MatrixXd probs) {
  Policy p;
  p.probs_ = std::move(probs);
  return p;
}

Policy Policy::softmax(std::shared_ptr<const FeatureMap> features,
                       Eigen::VectorXd weights, double beta) {
  if (!features) throw std::invalid_argument("Policy::softmax: null features");
  Policy p;
  p.features_ = std::move(features);
  p.weights_ = std::move(weights);
  p.beta_ = beta;
  return p;
}

Policy Policy::greedy(std::shared_ptr<const FeatureMap> features,
                      Eigen::VectorXd weights) {
  if (!features) throw std::invalid_argument("Policy::greedy: null features");
  Policy p;
  p.features_ = std::move(features);
  p.weights_ = std::move(weights);
  p.greedy_ = true;
  return p;
}

Policy Policy::uniform(const TabularMDP& mdp) {
  Eigen::MatrixXd probs =
      Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_actions);
  for (StateId s = 0; s < mdp.n_states; ++s) {
    if (mdp.is_terminal(s)) continue;
    const auto legal = mdp.legal_actions(s);
    for (const ActionId a : legal)
      probs(s, a) = 1.0 / static_cast<double>(legal.size());
  }
  return tabular(std::move(probs));
}

Eigen::VectorXd Policy::action_probs(StateId s,
                                     std::span<const ActionId> legal) const {
  if (legal.empty())
    throw std::invalid_argument("Policy::action_probs: empty legal set");
  if (is_tabular()) {
    Eigen::VectorXd p(static_cast<int>(legal.size()));
    for (int i = 0; i < p.size(); ++i) p[i] = probs_(s, legal[i]);
    const double sum = p.sum();
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::logic_error("Policy: tabular row is not a distribution");
    return p;
  }
  if (greedy_) {
    const ActionId best = greedy_action(weights_, *features_, s, legal);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<int>(legal.size()));
    for (int i = 0; i < p.size(); ++i)
      if (legal[i] == best) p[i] = 1.0;
    return p;
  }
  return softmax_policy_prob(weights_, beta_, *features_, s, legal);
}

ActionId Policy::sample(StateId s, std::span<const ActionId> legal,
                        Rng& rng) const {
  const Eigen::VectorXd p = action_probs(s, legal);
  const int i = rng.sample({p.data(), static_cast<std::size_t>(p.size())});
  return legal[i];
}

Eigen::MatrixXd Policy::tabulate(const TabularMDP& mdp) const {
  if (is_tabular()) return probs_;
  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_actions);
  for (StateId s = 0; s < mdp.n_states; ++s) {
    if (mdp.is_terminal(s)) continue;
    const auto legal = mdp.legal_actions(s);
    const Eigen::VectorXd p = action_probs(s, legal);
    for (int i = 0; i < p.size(); ++i) probs(s, legal[i]) = p[i];
  }
  return probs;
}

const Eigen::MatrixXd& Policy::probs() const {
  if (!is_tabular())
    throw std::logic_error("Policy: parametric policy has no stored table");
  return probs_;
}

void Policy::validate(const TabularMDP& mdp, double tol) const {
  const Eigen::MatrixXd table = tabulate(mdp);
  for (StateId s = 0; s < mdp.n_states; ++s) {
    if (mdp.is_terminal(s)) continue;
    double sum = 0.0;
    for (ActionId a = 0; a < mdp.n_actions; ++a) {
      const double p = table(s, a);
      if (p < 0.0) throw std::logic_error("Policy: negative probability");
      if (!mdp.legal(s, a) && p != 0.0)
        throw std::logic_error("Policy: mass on illegal action");
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol)
      throw std::logic_error("Policy: row does not sum to 1");
  }
}

}  // namespace mfirl
