#pragma once

#include <array>

#include "mfirl/envs/environment.hpp"

namespace mfirl {

/// Infinite-deck blackjack. Decision states are (player_sum 12..21,
/// dealer upcard 1..10, usable ace), 200 of them, plus one absorbing
/// terminal: 201 states. Actions: 0 = hit, 1 = stick.
///
/// A natural (ace + ten on the initial deal) pays +1.5 and settles before
/// the player ever acts; reset() redeals in that case and the exact model's
/// start distribution is accordingly conditioned on a non-natural deal.
/// Hands below 12 are hit automatically during the deal.
class BlackjackEnv final : public Environment {
 public:
  static constexpr int kHit = 0;
  static constexpr int kStick = 1;
  static constexpr double kNaturalReward = 1.5;

  BlackjackEnv();

  std::string tag() const override { return "blackjack"; }
  int n_states() const override { return 201; }
  int n_actions() const override { return 2; }
  bool episodic() const override { return true; }

  bool is_terminal(StateId s) const override { return s == terminal_state(); }
  std::vector<ActionId> legal_actions(StateId s) const override;

  StateId reset(Rng& rng) const override;
  StepResult step(StateId s, ActionId a, Rng& rng) const override;
  const TabularMDP& exact_model() const override { return model_; }

  static StateId terminal_state() { return 200; }
  static StateId encode(int player_sum, int dealer_card, bool usable_ace);
  /// (player_sum, dealer_card, usable_ace); s must be non-terminal.
  static std::array<int, 3> decode(StateId s);

  /// Outcome of dealing one hand: either a natural (settled +1.5 with no
  /// decision) or the first decision state.
  struct Deal {
    bool natural;
    StateId state;  // valid iff !natural
  };
  Deal deal_initial(Rng& rng) const;

  /// Probability that a fresh deal is a natural (= 8/169).
  static double natural_probability();

  /// Probability of each card value 1..10 (index 0 unused).
  static double card_prob(int value);

 private:
  int draw_card(Rng& rng) const;
  /// Plays out the dealer from the upcard; returns the settle reward for a
  /// player standing on `player_sum`.
  double dealer_playout(int player_sum, int dealer_card, Rng& rng) const;

  void build_model();

  TabularMDP model_;
};

}  // namespace mfirl
