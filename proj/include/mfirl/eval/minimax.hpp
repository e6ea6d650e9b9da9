#pragma once

#include <unordered_map>
#include <vector>

#include "mfirl/envs/tictactoe_board.hpp"

namespace mfirl {

/// Exhaustive negamax solution of tic-tac-toe: the game value and the full
/// set of value-achieving moves for every reachable non-terminal position.
class GameSolution {
 public:
  struct Entry {
    int value;                       // from the perspective of the side to move
    std::vector<int> optimal_moves;  // all cells achieving `value`
  };

  /// Position value for the side to move; terminal positions score -1 if the
  /// opponent just completed a line, 0 on a full board.
  int value_to_move(const ttt::Board& board) const;

  /// The same value with X's sign convention regardless of who moves.
  int value_for_x(const ttt::Board& board) const;

  const Entry& at(const ttt::Board& board) const;
  const std::unordered_map<int, Entry>& table() const { return table_; }

 private:
  friend GameSolution minimax_solve();
  std::unordered_map<int, Entry> table_;  // keyed by board code
};

/// Solves the full game from the empty board (memoized negamax over every
/// position reachable by legal play).
GameSolution minimax_solve();

}  // namespace mfirl
