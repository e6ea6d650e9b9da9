#pragma once

#include <memory>
#include <unordered_map>

#include "mfirl/envs/environment.hpp"
#include "mfirl/envs/tictactoe_board.hpp"
#include "mfirl/eval/minimax.hpp"

namespace mfirl {

/// Tic-tac-toe from X's side, with the opponent folded into the transition
/// kernel: after X places a mark, O replies immediately (uniformly over the
/// empty cells, or uniformly over its minimax-optimal moves). States are the
/// reachable X-to-move positions plus one absorbing terminal; actions are
/// board cells. Rewards: +1 X win, -1 loss, 0 draw.
///
/// The state indexing enumerates positions reachable under *any* legal play,
/// so both opponent variants share ids and feature tables.
class TicTacToeEnv final : public Environment {
 public:
  enum class Opponent { Random, Minimax };

  explicit TicTacToeEnv(Opponent opponent);

  std::string tag() const override {
    return opponent_ == Opponent::Random ? "tictactoe:random"
                                         : "tictactoe:minimax";
  }
  int n_states() const override { return x_state_count_ + 1; }
  int n_actions() const override { return 9; }
  bool episodic() const override { return true; }

  bool is_terminal(StateId s) const override { return s == terminal_state(); }
  std::vector<ActionId> legal_actions(StateId s) const override;

  StateId reset(Rng&) const override { return state_of(ttt::Board{}); }
  StepResult step(StateId s, ActionId a, Rng& rng) const override;
  const TabularMDP& exact_model() const override { return model_; }

  Opponent opponent() const { return opponent_; }
  StateId terminal_state() const { return x_state_count_; }
  int x_state_count() const { return x_state_count_; }

  ttt::Board board_of(StateId s) const;
  StateId state_of(const ttt::Board& board) const;

  /// O's reply distribution at an O-to-move position, as (cell, prob) pairs.
  std::vector<std::pair<int, double>> opponent_distribution(
      const ttt::Board& board) const;

  /// The shared game solution (used for the minimax opponent and by experts).
  const GameSolution& solution() const { return solution_; }

 private:
  void enumerate_states();
  void build_model();

  Opponent opponent_;
  GameSolution solution_;
  std::vector<int> x_codes_;                    // state id -> board code
  std::unordered_map<int, StateId> x_index_;    // board code -> state id
  int x_state_count_ = 0;
  TabularMDP model_;
};

}  // namespace mfirl
