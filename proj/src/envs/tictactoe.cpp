#include "mfirl/envs/tictactoe.hpp"

#include <map>
#include <stdexcept>

namespace mfirl {

using ttt::Board;

TicTacToeEnv::TicTacToeEnv(Opponent opponent)
    : opponent_(opponent), solution_(minimax_solve()) {
  enumerate_states();
  build_model();
}

void TicTacToeEnv::enumerate_states() {
  for (const int code : ttt::enumerate_reachable_codes()) {
    const Board b = ttt::from_code(code);
    if (!ttt::terminal(b) && ttt::to_move(b) == ttt::kX)
      x_codes_.push_back(code);
  }
  x_state_count_ = static_cast<int>(x_codes_.size());
  for (StateId s = 0; s < x_state_count_; ++s) x_index_[x_codes_[s]] = s;
}

Board TicTacToeEnv::board_of(StateId s) const {
  if (s < 0 || s >= x_state_count_)
    throw std::invalid_argument("tictactoe: not an X-to-move state");
  return ttt::from_code(x_codes_[s]);
}

StateId TicTacToeEnv::state_of(const Board& board) const {
  const auto it = x_index_.find(ttt::code(board));
  if (it == x_index_.end())
    throw std::invalid_argument("tictactoe: board is not an X-to-move state");
  return it->second;
}

std::vector<ActionId> TicTacToeEnv::legal_actions(StateId s) const {
  if (is_terminal(s))
    throw std::invalid_argument("legal_actions: terminal state");
  const Board b = board_of(s);
  const auto cells = ttt::empty_cells(b);
  return {cells.begin(), cells.end()};
}

std::vector<std::pair<int, double>> TicTacToeEnv::opponent_distribution(
    const Board& board) const {
  if (ttt::to_move(board) != ttt::kO || ttt::terminal(board))
    throw std::invalid_argument("opponent_distribution: O is not to move");
  std::vector<int> moves;
  if (opponent_ == Opponent::Random)
    moves = ttt::empty_cells(board);
  else
    moves = solution_.at(board).optimal_moves;
  const double p = 1.0 / static_cast<double>(moves.size());
  std::vector<std::pair<int, double>> dist;
  dist.reserve(moves.size());
  for (const int cell : moves) dist.emplace_back(cell, p);
  return dist;
}

StepResult TicTacToeEnv::step(StateId s, ActionId a, Rng& rng) const {
  if (is_terminal(s)) throw std::invalid_argument("step: terminal state");
  Board b = board_of(s);
  if (a < 0 || a >= 9 || b[a] != ttt::kEmpty)
    throw std::invalid_argument("step: illegal move");

  b = ttt::apply_move(b, a, ttt::kX);
  if (ttt::winner(b) == ttt::kX) return {terminal_state(), 1.0, true};
  if (ttt::full(b)) return {terminal_state(), 0.0, true};

  const auto dist = opponent_distribution(b);
  const int idx = rng.uniform_int(static_cast<int>(dist.size()));
  b = ttt::apply_move(b, dist[idx].first, ttt::kO);
  if (ttt::winner(b) == ttt::kO) return {terminal_state(), -1.0, true};
  return {state_of(b), 0.0, false};
}

void TicTacToeEnv::build_model() {
  model_ = TabularMDP::empty(n_states(), n_actions(), /*discount=*/1.0);
  for (StateId s = 0; s < x_state_count_; ++s) {
    const Board b = board_of(s);
    for (const int cell : ttt::empty_cells(b)) {
      const Board after = ttt::apply_move(b, cell, ttt::kX);
      auto& row = model_.trans[model_.index(s, cell)];
      double& reward = model_.reward[model_.index(s, cell)];
      if (ttt::winner(after) == ttt::kX) {
        row = {{terminal_state(), 1.0}};
        reward = 1.0;
        continue;
      }
      if (ttt::full(after)) {
        row = {{terminal_state(), 1.0}};
        reward = 0.0;
        continue;
      }
      std::map<StateId, double> next;
      for (const auto& [reply, prob] : opponent_distribution(after)) {
        const Board b2 = ttt::apply_move(after, reply, ttt::kO);
        if (ttt::winner(b2) == ttt::kO) {
          next[terminal_state()] += prob;
          reward -= prob;  // loss
        } else {
          next[state_of(b2)] += prob;  // O can never fill the board
        }
      }
      for (const auto& [ns, prob] : next) row.push_back({ns, prob});
    }
  }
  model_.add_terminal_self_loops(terminal_state());
  model_.start_dist[state_of(Board{})] = 1.0;
  model_.validate();
}

}  // namespace mfirl
