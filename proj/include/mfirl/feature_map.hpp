#pragma once

#include <Eigen/Dense>

#include "mfirl/types.hpp"

namespace mfirl {

/// Target range of the per-component affine feature scaling.
enum class Scaling { UnitInterval, Symmetric, None };

/// A contiguous nonzero segment of an otherwise-zero vector. Value features
/// that replicate a state basis per action are zero outside one block, and
/// the LSTDQ accumulator exploits that.
struct BlockVec {
  int offset = 0;
  Eigen::VectorXd values;

  Eigen::VectorXd to_dense(int full_dim) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(full_dim);
    v.segment(offset, values.size()) = values;
    return v;
  }
};

/// The pair (g_R, g_Q): state features for the reward model and state-action
/// features for the value model. Implementations are immutable after
/// construction and safe to share across threads.
class FeatureMap {
 public:
  virtual ~FeatureMap() = default;

  virtual int reward_dim() const = 0;
  virtual int value_dim() const = 0;

  /// g_R(s). Terminal states yield the zero vector.
  virtual Eigen::VectorXd reward_features(StateId s) const = 0;

  /// Reward features attributed to a demonstrated step (s, a). For maps
  /// whose reward is a function of the state this is reward_features(s).
  /// The afterstate map attributes the step to the position the move
  /// creates, so the reward class can tell a winning move from a drawing
  /// one out of the same position.
  virtual Eigen::VectorXd step_reward_features(StateId s, ActionId a) const {
    (void)a;
    return reward_features(s);
  }

  /// g_Q(s, a) as a dense vector of value_dim() components.
  Eigen::VectorXd value_features(StateId s, ActionId a) const {
    return value_features_block(s, a).to_dense(value_dim());
  }

  /// g_Q(s, a) as (offset, nonzero segment). The default for maps without
  /// block structure is a full-width block at offset 0.
  virtual BlockVec value_features_block(StateId s, ActionId a) const = 0;

  virtual Scaling scaling() const = 0;
};

}  // namespace mfirl
