#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <vector>

namespace mfirl::ttt {

using Board = std::array<std::uint8_t, 9>;  // row-major cells

constexpr std::uint8_t kEmpty = 0;
constexpr std::uint8_t kX = 1;
constexpr std::uint8_t kO = 2;

// rows, columns, then the two diagonals
constexpr std::array<std::array<int, 3>, 8> kLines = {{{0, 1, 2},
                                                       {3, 4, 5},
                                                       {6, 7, 8},
                                                       {0, 3, 6},
                                                       {1, 4, 7},
                                                       {2, 5, 8},
                                                       {0, 4, 8},
                                                       {2, 4, 6}}};

inline int code(const Board& b) {
  int c = 0;
  for (int i = 8; i >= 0; --i) c = c * 3 + b[i];
  return c;
}

inline Board from_code(int c) {
  Board b{};
  for (int i = 0; i < 9; ++i) {
    b[i] = static_cast<std::uint8_t>(c % 3);
    c /= 3;
  }
  return b;
}

inline int mark_count(const Board& b, std::uint8_t mark) {
  int n = 0;
  for (const auto cell : b) n += (cell == mark);
  return n;
}

/// kEmpty if nobody has a completed line, else the winning mark.
inline std::uint8_t winner(const Board& b) {
  for (const auto& line : kLines) {
    const std::uint8_t m = b[line[0]];
    if (m != kEmpty && b[line[1]] == m && b[line[2]] == m) return m;
  }
  return kEmpty;
}

inline bool full(const Board& b) {
  for (const auto cell : b)
    if (cell == kEmpty) return false;
  return true;
}

inline bool terminal(const Board& b) { return winner(b) != kEmpty || full(b); }

inline std::vector<int> empty_cells(const Board& b) {
  std::vector<int> cells;
  for (int i = 0; i < 9; ++i)
    if (b[i] == kEmpty) cells.push_back(i);
  return cells;
}

/// X moves first, so X is to move whenever the counts are equal.
inline std::uint8_t to_move(const Board& b) {
  return mark_count(b, kX) == mark_count(b, kO) ? kX : kO;
}

inline Board apply_move(Board b, int cell, std::uint8_t mark) {
  b[cell] = mark;
  return b;
}

namespace detail {
inline void visit_reachable(const Board& board, std::set<int>& seen) {
  if (!seen.insert(code(board)).second) return;
  if (terminal(board)) return;
  const std::uint8_t mover = to_move(board);
  for (const int cell : empty_cells(board))
    visit_reachable(apply_move(board, cell, mover), seen);
}
}  // namespace detail

/// Codes of every position reachable from the empty board under legal
/// alternating play, terminals included, sorted ascending. 5478 positions.
inline std::vector<int> enumerate_reachable_codes() {
  std::set<int> seen;
  detail::visit_reachable(Board{}, seen);
  return {seen.begin(), seen.end()};
}

}  // namespace mfirl::ttt
