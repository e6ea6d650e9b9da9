#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mfirl/envs/environment.hpp"
#include "mfirl/envs/tictactoe_board.hpp"
#include "mfirl/feature_map.hpp"
#include "mfirl/features/scaling.hpp"

namespace mfirl {

/// Declarative description of a feature construction for one domain.
struct FeatureSpec {
  Scaling scaling = Scaling::UnitInterval;
  /// Blackjack only: 10 keeps the quadratic monomial basis, 14 adds the
  /// cubic terms p*d*u, p^3, d^3 and a natural-hand indicator.
  int blackjack_basis = 10;

  static FeatureSpec defaults() { return {}; }
};

// Raw (pre-scaling) basis generators. Exposed for tests and CSV export.

/// Monomial basis over p = (sum-12)/9, d = (card-1)/9, u = usable ace flag.
/// basis = 10: [1, p, d, u, p^2, d^2, u^2, p*d, p*u, d*u].
/// basis = 14 appends [p*d*u, p^3, d^3, natural] where natural marks the
/// hands a two-card natural can produce (sum 21 with a usable ace).
Eigen::VectorXd blackjack_raw_features(int player_sum, int dealer_card,
                                       bool usable_ace, int basis);

/// [x/(n-1), y/(n-1)] followed by threshold indicators 1{x<k}, 1{y<k} for
/// k = 1..n-1. Dimension 2n.
Eigen::VectorXd gridworld_raw_features(int x, int y, int size);

/// Per-line pattern counts for one player's marks.
struct LineCounts {
  int singlets = 0;    // lines holding exactly one of the player's marks
  int doublets = 0;    // lines holding exactly two, third cell empty
  int triplets = 0;    // completed lines
  int diversity = 0;   // distinct directions among the singlet lines (0..3)
  int crosspoints = 0; // empty cells shared by two or more singlet lines
};
LineCounts ttt_line_counts(const ttt::Board& b, std::uint8_t mark);

/// [10 pattern counts for X then O] + all 55 degree-2 products of those
/// counts + 9 raw cells (X=1, O=-1, empty=0). 74 columns before dedup.
Eigen::VectorXd tictactoe_raw_features(const ttt::Board& b);

/// Feature map whose reward features are tabulated rows of a matrix and
/// whose value features either replicate the state row into a per-action
/// block or look up a per-(state, action) afterstate row. Rows are stored
/// as given; make_feature_map scales them before construction. States with
/// id >= the row count (the absorbing terminals) get a zero reward vector.
class TabulatedFeatures final : public FeatureMap {
 public:
  /// Replicated layout: value_dim = n_actions * reward_dim, block offset
  /// a * reward_dim. `state_rows` has one row per non-terminal state.
  static std::shared_ptr<const TabulatedFeatures> replicated(
      Eigen::MatrixXd state_rows, int n_actions, Scaling scaling);

  /// Afterstate layout: value features of (s, a) are `afterstate_rows` row
  /// `pair_row[s * n_actions + a]` (dense, offset 0). Entries of -1 mark
  /// illegal pairs. value_dim = reward_dim.
  static std::shared_ptr<const TabulatedFeatures> afterstate(
      Eigen::MatrixXd state_rows, Eigen::MatrixXd afterstate_rows,
      std::vector<int> pair_row, int n_actions, Scaling scaling);

  int reward_dim() const override { return static_cast<int>(state_rows_.cols()); }
  int value_dim() const override { return value_dim_; }
  Eigen::VectorXd reward_features(StateId s) const override;
  Eigen::VectorXd step_reward_features(StateId s, ActionId a) const override;
  BlockVec value_features_block(StateId s, ActionId a) const override;
  Scaling scaling() const override { return scaling_; }

  const Eigen::MatrixXd& state_rows() const { return state_rows_; }

 private:
  TabulatedFeatures() = default;
  Eigen::MatrixXd state_rows_;
  Eigen::MatrixXd afterstate_rows_;  // empty in replicated mode
  std::vector<int> pair_row_;        // empty in replicated mode
  int n_actions_ = 0;
  int value_dim_ = 0;
  bool replicated_ = false;
  Scaling scaling_ = Scaling::None;
};

/// Builds the feature map matching `env.tag()`. Raw features are generated
/// over the whole state space and the scaler fitted to the result. The
/// tic-tac-toe construction additionally drops duplicate columns before
/// scaling; the fixed blackjack and gridworld bases keep every declared
/// column.
std::shared_ptr<const FeatureMap> make_feature_map(const Environment& env,
                                                   const FeatureSpec& spec);

/// CSV with one row per state: state id then the scaled reward features.
void write_reward_feature_csv(const std::string& path, const Environment& env,
                              const FeatureMap& fm);

/// CSV with one row per legal (state, action): ids then the dense scaled
/// value features.
void write_value_feature_csv(const std::string& path, const Environment& env,
                             const FeatureMap& fm);

}  // namespace mfirl
