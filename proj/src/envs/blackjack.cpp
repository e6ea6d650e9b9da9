#include "mfirl/envs/blackjack.hpp"

#include <map>
#include <stdexcept>

namespace mfirl {

namespace {

struct Hand {
  int sum = 0;
  bool usable = false;  // an ace currently counted as 11
  bool bust() const { return sum > 21; }
};

Hand add_card(Hand h, int card) {
  h.sum += card;  // ace enters as 1
  if (card == 1 && !h.usable && h.sum + 10 <= 21) {
    h.sum += 10;
    h.usable = true;
  } else if (h.sum > 21 && h.usable) {
    h.sum -= 10;
    h.usable = false;
  }
  return h;
}

constexpr int kDealerStand = 17;
constexpr int kBust = 0;  // dealer-outcome key for a busted dealer

/// Exact distribution over the dealer's final total {17..21, bust}, starting
/// from a visible upcard; the hole card is just the first draw. Probability
/// mass is merged per (sum, usable) hand, and the hand graph is acyclic, so
/// a worklist sweep terminates.
std::map<int, double> dealer_final_dist(int upcard) {
  std::map<int, double> out;
  std::map<std::pair<int, int>, double> hands;  // (sum, usable) -> prob
  hands[{add_card(Hand{}, upcard).sum, add_card(Hand{}, upcard).usable}] = 1.0;
  while (!hands.empty()) {
    const auto [key, prob] = *hands.begin();
    hands.erase(hands.begin());
    const Hand hand{key.first, key.second != 0};
    if (hand.bust()) {
      out[kBust] += prob;
    } else if (hand.sum >= kDealerStand) {  // stands on all 17s
      out[hand.sum] += prob;
    } else {
      for (int c = 1; c <= 10; ++c) {
        const Hand h = add_card(hand, c);
        hands[{h.sum, h.usable ? 1 : 0}] += prob * BlackjackEnv::card_prob(c);
      }
    }
  }
  return out;
}

double settle(int player_sum, int dealer_outcome) {
  if (dealer_outcome == kBust) return 1.0;
  if (player_sum > dealer_outcome) return 1.0;
  if (player_sum < dealer_outcome) return -1.0;
  return 0.0;
}

}  // namespace

double BlackjackEnv::card_prob(int value) {
  if (value < 1 || value > 10) throw std::invalid_argument("bad card value");
  return value == 10 ? 4.0 / 13.0 : 1.0 / 13.0;
}

double BlackjackEnv::natural_probability() {
  // ace then ten or ten then ace
  return 2.0 * (1.0 / 13.0) * (4.0 / 13.0);
}

StateId BlackjackEnv::encode(int player_sum, int dealer_card, bool usable_ace) {
  if (player_sum < 12 || player_sum > 21 || dealer_card < 1 || dealer_card > 10)
    throw std::invalid_argument("blackjack state out of range");
  return static_cast<StateId>((player_sum - 12) * 20 + (dealer_card - 1) * 2 +
                              (usable_ace ? 1 : 0));
}

std::array<int, 3> BlackjackEnv::decode(StateId s) {
  if (s < 0 || s >= 200)
    throw std::invalid_argument("decode: not a blackjack decision state");
  return {12 + s / 20, 1 + (s % 20) / 2, s % 2};
}

BlackjackEnv::BlackjackEnv() { build_model(); }

std::vector<ActionId> BlackjackEnv::legal_actions(StateId s) const {
  if (is_terminal(s))
    throw std::invalid_argument("legal_actions: terminal state");
  return {kHit, kStick};
}

int BlackjackEnv::draw_card(Rng& rng) const {
  const int r = rng.uniform_int(13);  // ranks A,2..9 and four ten-values
  return r >= 9 ? 10 : r + 1;
}

BlackjackEnv::Deal BlackjackEnv::deal_initial(Rng& rng) const {
  Hand hand = add_card(add_card(Hand{}, draw_card(rng)), draw_card(rng));
  if (hand.sum == 21) {
    // only ace + ten reaches 21 in two cards: a natural, settled at +1.5
    return {true, terminal_state()};
  }
  while (hand.sum < 12) hand = add_card(hand, draw_card(rng));
  const int upcard = draw_card(rng);
  return {false, encode(hand.sum, upcard, hand.usable)};
}

StateId BlackjackEnv::reset(Rng& rng) const {
  Deal d = deal_initial(rng);
  while (d.natural) d = deal_initial(rng);
  return d.state;
}

double BlackjackEnv::dealer_playout(int player_sum, int dealer_card,
                                    Rng& rng) const {
  Hand hand = add_card(Hand{}, dealer_card);
  while (!hand.bust() && hand.sum < kDealerStand)
    hand = add_card(hand, draw_card(rng));
  return settle(player_sum, hand.bust() ? kBust : hand.sum);
}

StepResult BlackjackEnv::step(StateId s, ActionId a, Rng& rng) const {
  if (is_terminal(s)) throw std::invalid_argument("step: terminal state");
  const auto [p, d, u] = decode(s);
  if (a == kHit) {
    const Hand next = add_card(Hand{p, u != 0}, draw_card(rng));
    if (next.bust()) return {terminal_state(), -1.0, true};
    return {encode(next.sum, d, next.usable), 0.0, false};
  }
  if (a == kStick) return {terminal_state(), dealer_playout(p, d, rng), true};
  throw std::invalid_argument("step: unknown action");
}

void BlackjackEnv::build_model() {
  model_ = TabularMDP::empty(n_states(), n_actions(), /*discount=*/1.0);

  // dealer settle values, one distribution per upcard
  std::array<std::map<int, double>, 11> dealer_dist;
  for (int d = 1; d <= 10; ++d) dealer_dist[d] = dealer_final_dist(d);

  for (int p = 12; p <= 21; ++p) {
    for (int d = 1; d <= 10; ++d) {
      for (int u = 0; u <= 1; ++u) {
        const StateId s = encode(p, d, u != 0);

        // hit: card convolution, busts fold into the terminal state
        std::map<StateId, double> next_probs;
        double bust_prob = 0.0;
        for (int c = 1; c <= 10; ++c) {
          const Hand h = add_card(Hand{p, u != 0}, c);
          if (h.bust())
            bust_prob += card_prob(c);
          else
            next_probs[encode(h.sum, d, h.usable)] += card_prob(c);
        }
        auto& hit_row = model_.trans[model_.index(s, kHit)];
        for (const auto& [ns, prob] : next_probs) hit_row.push_back({ns, prob});
        if (bust_prob > 0.0) hit_row.push_back({terminal_state(), bust_prob});
        model_.reward[model_.index(s, kHit)] = -bust_prob;

        // stick: settled against the exact dealer distribution
        double expected = 0.0;
        for (const auto& [outcome, prob] : dealer_dist[d])
          expected += prob * settle(p, outcome);
        model_.trans[model_.index(s, kStick)] = {{terminal_state(), 1.0}};
        model_.reward[model_.index(s, kStick)] = expected;
      }
    }
  }

  model_.add_terminal_self_loops(terminal_state());

  // start distribution: exact two-card deal + auto-hit convolution,
  // conditioned on the deal not being a natural
  std::map<std::pair<int, int>, double> hands;  // (sum, usable) -> prob
  for (int c1 = 1; c1 <= 10; ++c1)
    for (int c2 = 1; c2 <= 10; ++c2) {
      const Hand h = add_card(add_card(Hand{}, c1), c2);
      if (h.sum == 21) continue;  // natural, settled before any decision
      hands[{h.sum, h.usable ? 1 : 0}] += card_prob(c1) * card_prob(c2);
    }
  // auto-hit while below 12 (no ace can be usable below 12, and no bust
  // is possible from a sum of at most 11)
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = hands.begin(); it != hands.end(); ++it) {
      if (it->first.first >= 12) continue;
      const auto [sum, usable] = it->first;
      const double prob = it->second;
      hands.erase(it);
      for (int c = 1; c <= 10; ++c) {
        const Hand h = add_card(Hand{sum, usable != 0}, c);
        hands[{h.sum, h.usable ? 1 : 0}] += prob * card_prob(c);
      }
      changed = true;
      break;
    }
  }
  double total = 0.0;
  for (const auto& [hand, prob] : hands) total += prob;
  for (const auto& [hand, prob] : hands)
    for (int d = 1; d <= 10; ++d)
      model_.start_dist[encode(hand.first, d, hand.second != 0)] +=
          prob * card_prob(d) / total;

  model_.validate();
}

}  // namespace mfirl
