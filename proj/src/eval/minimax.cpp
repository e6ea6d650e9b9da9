#include "mfirl/eval/minimax.hpp"

#include <stdexcept>

namespace mfirl {

namespace {

using ttt::Board;

int negamax(const Board& board, std::unordered_map<int, GameSolution::Entry>& table) {
  const std::uint8_t mover = ttt::to_move(board);
  const std::uint8_t opponent = mover == ttt::kX ? ttt::kO : ttt::kX;
  if (ttt::winner(board) == opponent) return -1;
  if (ttt::full(board)) return 0;

  const int key = ttt::code(board);
  if (const auto it = table.find(key); it != table.end())
    return it->second.value;

  GameSolution::Entry entry;
  entry.value = -2;
  for (const int cell : ttt::empty_cells(board)) {
    const Board child = ttt::apply_move(board, cell, mover);
    int v;
    if (ttt::winner(child) == mover)
      v = 1;
    else if (ttt::full(child))
      v = 0;
    else
      v = -negamax(child, table);
    if (v > entry.value) {
      entry.value = v;
      entry.optimal_moves.clear();
    }
    if (v == entry.value) entry.optimal_moves.push_back(cell);
  }
  table.emplace(key, std::move(entry));
  return table.at(key).value;
}

}  // namespace

GameSolution minimax_solve() {
  GameSolution solution;
  negamax(Board{}, solution.table_);
  return solution;
}

int GameSolution::value_to_move(const ttt::Board& board) const {
  const std::uint8_t mover = ttt::to_move(board);
  const std::uint8_t opponent = mover == ttt::kX ? ttt::kO : ttt::kX;
  if (ttt::winner(board) == opponent) return -1;
  if (ttt::full(board)) return 0;
  return at(board).value;
}

int GameSolution::value_for_x(const ttt::Board& board) const {
  const int v = value_to_move(board);
  return ttt::to_move(board) == ttt::kX ? v : -v;
}

const GameSolution::Entry& GameSolution::at(const ttt::Board& board) const {
  const auto it = table_.find(ttt::code(board));
  if (it == table_.end())
    throw std::out_of_range("minimax: position not reachable by legal play");
  return it->second;
}

}  // namespace mfirl
