#include <cmath>
#include <map>
#include <stdexcept>

#include "mfirl/estimators.hpp"

namespace mfirl {

void SoftmaxObjective::compress(
    const DemonstrationSet& demos, const Environment& env,
    const std::function<Eigen::VectorXd(StateId, ActionId)>& phi) {
  demos.require_valid_for_fitting();

  // state id -> (block index, legal-action position lookup)
  std::map<StateId, int> block_of;
  std::vector<std::vector<int>> pos_of_action;

  linear_ = Eigen::VectorXd::Zero(dim_);
  for (const Trajectory& traj : demos.trajectories) {
    for (const auto& [s, a] : traj.steps) {
      auto it = block_of.find(s);
      if (it == block_of.end()) {
        const std::vector<ActionId> legal = env.legal_actions(s);
        StateBlock block;
        block.phi.resize(static_cast<int>(legal.size()), dim_);
        block.counts = Eigen::VectorXd::Zero(static_cast<int>(legal.size()));
        std::vector<int> pos(env.n_actions(), -1);
        for (int i = 0; i < static_cast<int>(legal.size()); ++i) {
          block.phi.row(i) = phi(s, legal[i]).transpose();
          pos[legal[i]] = i;
        }
        if (!block.phi.allFinite())
          throw std::invalid_argument("objective: non-finite feature values");
        it = block_of.emplace(s, static_cast<int>(blocks_.size())).first;
        blocks_.push_back(std::move(block));
        pos_of_action.push_back(std::move(pos));
      }
      const int b = it->second;
      const int i = pos_of_action[b][a];
      if (i < 0)
        throw std::invalid_argument("objective: demonstrated action illegal");
      blocks_[b].counts[i] += 1.0;
      blocks_[b].visits += 1.0;
      linear_ += blocks_[b].phi.row(i).transpose();
      ++step_count_;
    }
  }
}

SoftmaxObjective SoftmaxObjective::for_po(const DemonstrationSet& demos,
                                          const Environment& env,
                                          const FeatureMap& features,
                                          double beta) {
  SoftmaxObjective obj;
  obj.dim_ = features.value_dim();
  obj.beta_ = beta;
  obj.compress(demos, env, [&features](StateId s, ActionId a) {
    return features.value_features(s, a);
  });
  return obj;
}

SoftmaxObjective SoftmaxObjective::for_rp(const DemonstrationSet& demos,
                                          const Environment& env,
                                          const FeatureMap& features,
                                          const LstdqSystem& system,
                                          double beta) {
  if (!system.solved())
    throw std::logic_error("rp objective: lstdq system not solved");
  SoftmaxObjective obj;
  obj.dim_ = static_cast<int>(system.C.cols());
  obj.beta_ = beta;
  obj.compress(demos, env, [&features, &system](StateId s, ActionId a) {
    const BlockVec g = features.value_features_block(s, a);
    // phi = C^T g_Q, using only the nonzero block of g_Q.
    return Eigen::VectorXd(
        system.C.middleRows(g.offset, g.values.size()).transpose() * g.values);
  });
  return obj;
}

double SoftmaxObjective::value(const Eigen::VectorXd& w) const {
  Eigen::VectorXd grad;
  return value_and_gradient(w, grad);
}

double SoftmaxObjective::value_and_gradient(const Eigen::VectorXd& w,
                                            Eigen::VectorXd& grad) const {
  if (w.size() != dim_)
    throw std::invalid_argument("objective: weight dimension mismatch");
  if (!w.allFinite())
    throw std::invalid_argument("objective: non-finite weights");

  double value = beta_ * linear_.dot(w);
  grad = beta_ * linear_;
  for (const StateBlock& block : blocks_) {
    const Eigen::VectorXd scores = beta_ * (block.phi * w);
    const double m = scores.maxCoeff();
    const Eigen::VectorXd e = (scores.array() - m).exp();
    const double sum = e.sum();
    value -= block.visits * (m + std::log(sum));
    // pi(a|s) = e / sum; each of the visits pulls the expected feature.
    grad -= (beta_ * block.visits / sum) * (block.phi.transpose() * e);
  }
  if (prior_) value += prior_(w, grad);
  return value;
}

Eigen::MatrixXd SoftmaxObjective::curvature_at_zero() const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const StateBlock& block : blocks_) {
    const Eigen::RowVectorXd mean = block.phi.colwise().mean();
    const Eigen::MatrixXd centered = block.phi.rowwise() - mean;
    h.noalias() += (block.visits / static_cast<double>(block.phi.rows())) *
                   (centered.transpose() * centered);
  }
  return (beta_ * beta_) * h;
}

std::pair<double, Eigen::VectorXd> rp_objective_and_gradient(
    const Eigen::VectorXd& w_R, const DemonstrationSet& demos,
    const LstdqSystem& system, const Environment& env,
    const FeatureMap& features, double beta) {
  const SoftmaxObjective obj =
      SoftmaxObjective::for_rp(demos, env, features, system, beta);
  Eigen::VectorXd grad;
  const double value = obj.value_and_gradient(w_R, grad);
  return {value, std::move(grad)};
}

std::pair<double, Eigen::VectorXd> po_objective_and_gradient(
    const Eigen::VectorXd& w_Q, const DemonstrationSet& demos,
    const Environment& env, const FeatureMap& features, double beta) {
  const SoftmaxObjective obj =
      SoftmaxObjective::for_po(demos, env, features, beta);
  Eigen::VectorXd grad;
  const double value = obj.value_and_gradient(w_Q, grad);
  return {value, std::move(grad)};
}

}  // namespace mfirl
