#include "mfirl/envs/environment.hpp"

#include <stdexcept>

#include "mfirl/envs/blackjack.hpp"
#include "mfirl/envs/gridworld.hpp"
#include "mfirl/envs/tictactoe.hpp"

namespace mfirl {

std::unique_ptr<Environment> make_environment(const std::string& tag) {
  if (tag == "blackjack") return std::make_unique<BlackjackEnv>();
  if (tag == "gridworld32") return std::make_unique<GridworldEnv>();
  if (tag == "tictactoe:random")
    return std::make_unique<TicTacToeEnv>(TicTacToeEnv::Opponent::Random);
  if (tag == "tictactoe:minimax")
    return std::make_unique<TicTacToeEnv>(TicTacToeEnv::Opponent::Minimax);
  throw std::invalid_argument("unknown environment tag '" + tag + "'");
}

}  // namespace mfirl
