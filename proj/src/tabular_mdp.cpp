#include "mfirl/tabular_mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfirl {

void TabularMDP::validate(double tol) const {
  if (n_states <= 0 || n_actions <= 0)
    throw std::logic_error("TabularMDP: empty state or action space");
  if (start_dist.size() != n_states)
    throw std::logic_error("TabularMDP: start_dist size mismatch");
  if (discount <= 0.0 || discount > 1.0)
    throw std::logic_error("TabularMDP: discount must lie in (0, 1]");

  double mu_sum = 0.0;
  for (StateId s = 0; s < n_states; ++s) {
    const double mu = start_dist[s];
    if (mu < 0.0) throw std::logic_error("TabularMDP: negative start mass");
    if (is_terminal(s) && mu != 0.0)
      throw std::logic_error("TabularMDP: start mass on terminal state " +
                             std::to_string(s));
    mu_sum += mu;
  }
  if (std::abs(mu_sum - 1.0) > tol)
    throw std::logic_error("TabularMDP: start_dist sums to " +
                           std::to_string(mu_sum));

  for (StateId s = 0; s < n_states; ++s) {
    bool any_legal = false;
    for (ActionId a = 0; a < n_actions; ++a) {
      const auto& tr = row(s, a);
      if (tr.empty()) continue;  // illegal action
      any_legal = true;
      double p_sum = 0.0;
      for (const auto& t : tr) {
        if (t.prob < 0.0 || t.next < 0 || t.next >= n_states)
          throw std::logic_error("TabularMDP: bad transition entry");
        p_sum += t.prob;
      }
      if (std::abs(p_sum - 1.0) > tol)
        throw std::logic_error("TabularMDP: row (" + std::to_string(s) + "," +
                               std::to_string(a) + ") sums to " +
                               std::to_string(p_sum));
      if (is_terminal(s)) {
        if (tr.size() != 1 || tr[0].next != s || r(s, a) != 0.0)
          throw std::logic_error(
              "TabularMDP: terminal state must self-loop with zero reward");
      }
    }
    if (!any_legal)
      throw std::logic_error("TabularMDP: state " + std::to_string(s) +
                             " has no legal action");
  }
}

}  // namespace mfirl
