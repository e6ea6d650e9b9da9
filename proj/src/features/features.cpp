#include "mfirl/features/features.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "mfirl/csv.hpp"
#include "mfirl/envs/blackjack.hpp"
#include "mfirl/envs/gridworld.hpp"
#include "mfirl/envs/tictactoe.hpp"

namespace mfirl {

Eigen::VectorXd blackjack_raw_features(int player_sum, int dealer_card,
                                       bool usable_ace, int basis) {
  if (basis != 10 && basis != 14)
    throw std::invalid_argument("blackjack basis must be 10 or 14");
  const double p = (player_sum - 12) / 9.0;
  const double d = (dealer_card - 1) / 9.0;
  const double u = usable_ace ? 1.0 : 0.0;
  Eigen::VectorXd f(basis);
  f[0] = 1.0;
  f[1] = p;
  f[2] = d;
  f[3] = u;
  f[4] = p * p;
  f[5] = d * d;
  f[6] = u * u;
  f[7] = p * d;
  f[8] = p * u;
  f[9] = d * u;
  if (basis == 14) {
    f[10] = p * d * u;
    f[11] = p * p * p;
    f[12] = d * d * d;
    f[13] = (player_sum == 21 && usable_ace) ? 1.0 : 0.0;
  }
  return f;
}

Eigen::VectorXd gridworld_raw_features(int x, int y, int size) {
  const int n = size;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * n);
  f[0] = static_cast<double>(x) / (n - 1);
  f[1] = static_cast<double>(y) / (n - 1);
  for (int k = 1; k < n; ++k) {
    f[1 + k] = (x < k) ? 1.0 : 0.0;
    f[n + k] = (y < k) ? 1.0 : 0.0;
  }
  return f;
}

LineCounts ttt_line_counts(const ttt::Board& b, std::uint8_t mark) {
  const std::uint8_t opp = (mark == ttt::kX) ? ttt::kO : ttt::kX;
  LineCounts c;
  std::array<bool, 8> singlet{};
  for (int i = 0; i < 8; ++i) {
    int own = 0, other = 0;
    for (const int cell : ttt::kLines[i]) {
      own += (b[cell] == mark);
      other += (b[cell] == opp);
    }
    if (own == 3) {
      ++c.triplets;
    } else if (own == 2 && other == 0) {
      ++c.doublets;
    } else if (own == 1 && other == 0) {
      ++c.singlets;
      singlet[i] = true;
    }
  }
  // kLines order: three rows, three columns, two diagonals.
  bool dirs[3] = {false, false, false};
  for (int i = 0; i < 8; ++i)
    if (singlet[i]) dirs[i < 3 ? 0 : (i < 6 ? 1 : 2)] = true;
  c.diversity = dirs[0] + dirs[1] + dirs[2];
  for (int cell = 0; cell < 9; ++cell) {
    if (b[cell] != ttt::kEmpty) continue;
    int through = 0;
    for (int i = 0; i < 8; ++i) {
      if (!singlet[i]) continue;
      for (const int lc : ttt::kLines[i]) through += (lc == cell);
    }
    if (through >= 2) ++c.crosspoints;
  }
  return c;
}

Eigen::VectorXd tictactoe_raw_features(const ttt::Board& b) {
  const LineCounts cx = ttt_line_counts(b, ttt::kX);
  const LineCounts co = ttt_line_counts(b, ttt::kO);
  Eigen::VectorXd base(10);
  base << cx.singlets, cx.doublets, cx.triplets, cx.diversity, cx.crosspoints,
      co.singlets, co.doublets, co.triplets, co.diversity, co.crosspoints;

  Eigen::VectorXd f(10 + 55 + 9);
  f.head(10) = base;
  int k = 10;
  for (int i = 0; i < 10; ++i)
    for (int j = i; j < 10; ++j) f[k++] = base[i] * base[j];
  for (int cell = 0; cell < 9; ++cell)
    f[k++] = (b[cell] == ttt::kX) ? 1.0 : (b[cell] == ttt::kO ? -1.0 : 0.0);
  return f;
}

std::shared_ptr<const TabulatedFeatures> TabulatedFeatures::replicated(
    Eigen::MatrixXd state_rows, int n_actions, Scaling scaling) {
  auto fm = std::shared_ptr<TabulatedFeatures>(new TabulatedFeatures());
  fm->state_rows_ = std::move(state_rows);
  fm->n_actions_ = n_actions;
  fm->value_dim_ = n_actions * static_cast<int>(fm->state_rows_.cols());
  fm->replicated_ = true;
  fm->scaling_ = scaling;
  return fm;
}

std::shared_ptr<const TabulatedFeatures> TabulatedFeatures::afterstate(
    Eigen::MatrixXd state_rows, Eigen::MatrixXd afterstate_rows,
    std::vector<int> pair_row, int n_actions, Scaling scaling) {
  if (afterstate_rows.cols() != state_rows.cols())
    throw std::invalid_argument("afterstate rows: dimension mismatch");
  if (static_cast<int>(pair_row.size()) !=
      static_cast<int>(state_rows.rows()) * n_actions)
    throw std::invalid_argument("afterstate rows: pair table size mismatch");
  auto fm = std::shared_ptr<TabulatedFeatures>(new TabulatedFeatures());
  fm->state_rows_ = std::move(state_rows);
  fm->afterstate_rows_ = std::move(afterstate_rows);
  fm->pair_row_ = std::move(pair_row);
  fm->n_actions_ = n_actions;
  fm->value_dim_ = static_cast<int>(fm->state_rows_.cols());
  fm->replicated_ = false;
  fm->scaling_ = scaling;
  return fm;
}

Eigen::VectorXd TabulatedFeatures::reward_features(StateId s) const {
  if (s < 0) throw std::invalid_argument("reward_features: bad state");
  if (s >= state_rows_.rows()) return Eigen::VectorXd::Zero(reward_dim());
  return state_rows_.row(s).transpose();
}

Eigen::VectorXd TabulatedFeatures::step_reward_features(StateId s,
                                                        ActionId a) const {
  if (replicated_) return reward_features(s);
  return value_features_block(s, a).values;  // the created position's row
}

BlockVec TabulatedFeatures::value_features_block(StateId s, ActionId a) const {
  if (s < 0 || s >= state_rows_.rows() || a < 0 || a >= n_actions_)
    throw std::invalid_argument("value_features: bad state-action");
  if (replicated_)
    return {a * reward_dim(), state_rows_.row(s).transpose()};
  const int row = pair_row_[static_cast<int>(s) * n_actions_ + a];
  if (row < 0) throw std::invalid_argument("value_features: illegal action");
  return {0, afterstate_rows_.row(row).transpose()};
}

namespace {

std::shared_ptr<const FeatureMap> blackjack_features(const BlackjackEnv& env,
                                                     const FeatureSpec& spec) {
  const int n = BlackjackEnv::terminal_state();
  Eigen::MatrixXd raw(n, spec.blackjack_basis);
  for (StateId s = 0; s < n; ++s) {
    const auto [p, d, u] = BlackjackEnv::decode(s);
    raw.row(s) =
        blackjack_raw_features(p, d, u != 0, spec.blackjack_basis).transpose();
  }
  const AffineScaler scaler = AffineScaler::fit(raw, spec.scaling);
  return TabulatedFeatures::replicated(scaler.apply_rows(raw), env.n_actions(),
                                       spec.scaling);
}

std::shared_ptr<const FeatureMap> gridworld_features(const GridworldEnv& env,
                                                     const FeatureSpec& spec) {
  const int size = env.params().size;
  Eigen::MatrixXd raw(env.n_states(), 2 * size);
  for (StateId s = 0; s < env.n_states(); ++s) {
    const auto [x, y] = env.decode(s);
    raw.row(s) = gridworld_raw_features(x, y, size).transpose();
  }
  const AffineScaler scaler = AffineScaler::fit(raw, spec.scaling);
  return TabulatedFeatures::replicated(scaler.apply_rows(raw), env.n_actions(),
                                       spec.scaling);
}

std::shared_ptr<const FeatureMap> tictactoe_features(const TicTacToeEnv& env,
                                                     const FeatureSpec& spec) {
  const std::vector<int> codes = ttt::enumerate_reachable_codes();
  Eigen::MatrixXd raw(static_cast<int>(codes.size()), 74);
  std::unordered_map<int, int> row_of;
  row_of.reserve(codes.size());
  for (int i = 0; i < static_cast<int>(codes.size()); ++i) {
    raw.row(i) = tictactoe_raw_features(ttt::from_code(codes[i])).transpose();
    row_of[codes[i]] = i;
  }
  const std::vector<int> keep = dedup_columns(raw);
  Eigen::MatrixXd reduced(raw.rows(), static_cast<int>(keep.size()));
  for (int j = 0; j < static_cast<int>(keep.size()); ++j)
    reduced.col(j) = raw.col(keep[j]);
  const AffineScaler scaler = AffineScaler::fit(reduced, spec.scaling);
  const Eigen::MatrixXd all_rows = scaler.apply_rows(reduced);

  const int n_x = env.x_state_count();
  Eigen::MatrixXd state_rows(n_x, all_rows.cols());
  std::vector<int> pair_row(static_cast<std::size_t>(n_x) * 9, -1);
  for (StateId s = 0; s < n_x; ++s) {
    const ttt::Board b = env.board_of(s);
    state_rows.row(s) = all_rows.row(row_of.at(ttt::code(b)));
    for (const int cell : ttt::empty_cells(b)) {
      const ttt::Board after = ttt::apply_move(b, cell, ttt::kX);
      pair_row[static_cast<std::size_t>(s) * 9 + cell] =
          row_of.at(ttt::code(after));
    }
  }
  return TabulatedFeatures::afterstate(std::move(state_rows), all_rows,
                                       std::move(pair_row), 9, spec.scaling);
}

}  // namespace

std::shared_ptr<const FeatureMap> make_feature_map(const Environment& env,
                                                   const FeatureSpec& spec) {
  if (const auto* bj = dynamic_cast<const BlackjackEnv*>(&env))
    return blackjack_features(*bj, spec);
  if (const auto* gw = dynamic_cast<const GridworldEnv*>(&env))
    return gridworld_features(*gw, spec);
  if (const auto* tt = dynamic_cast<const TicTacToeEnv*>(&env))
    return tictactoe_features(*tt, spec);
  throw std::invalid_argument("no feature map for environment " + env.tag());
}

void write_reward_feature_csv(const std::string& path, const Environment& env,
                              const FeatureMap& fm) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "state";
  for (int j = 0; j < fm.reward_dim(); ++j) out << ",f" << j;
  out << "\n";
  for (StateId s = 0; s < env.n_states(); ++s) {
    const Eigen::VectorXd f = fm.reward_features(s);
    out << s;
    for (int j = 0; j < f.size(); ++j) out << ',' << csv_double(f[j]);
    out << "\n";
  }
}

void write_value_feature_csv(const std::string& path, const Environment& env,
                             const FeatureMap& fm) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "state,action";
  for (int j = 0; j < fm.value_dim(); ++j) out << ",f" << j;
  out << "\n";
  for (StateId s = 0; s < env.n_states(); ++s) {
    if (env.is_terminal(s)) continue;
    for (const ActionId a : env.legal_actions(s)) {
      const Eigen::VectorXd f = fm.value_features(s, a);
      out << s << ',' << a;
      for (int j = 0; j < f.size(); ++j) out << ',' << csv_double(f[j]);
      out << "\n";
    }
  }
}

}  // namespace mfirl
