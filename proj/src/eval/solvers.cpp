#include "mfirl/eval/solvers.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "mfirl/csv.hpp"

namespace mfirl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// R_pi and the sparse P_pi of the policy-averaged chain.
struct AveragedChain {
  Eigen::VectorXd r;
  Eigen::SparseMatrix<double> P;  // row s -> successor columns
};

AveragedChain average_chain(const TabularMDP& mdp,
                            const Eigen::MatrixXd& probs) {
  AveragedChain chain;
  chain.r = Eigen::VectorXd::Zero(mdp.n_states);
  std::vector<Eigen::Triplet<double>> trips;
  for (StateId s = 0; s < mdp.n_states; ++s) {
    if (mdp.is_terminal(s)) continue;
    for (ActionId a = 0; a < mdp.n_actions; ++a) {
      const double p = probs(s, a);
      if (p == 0.0) continue;
      if (!mdp.legal(s, a))
        throw std::invalid_argument("policy puts mass on an illegal action");
      chain.r[s] += p * mdp.r(s, a);
      for (const Transition& t : mdp.row(s, a))
        trips.emplace_back(s, t.next, p * t.prob);
    }
  }
  chain.P.resize(mdp.n_states, mdp.n_states);
  chain.P.setFromTriplets(trips.begin(), trips.end());  // sums duplicates
  return chain;
}

/// True for every state that reaches a terminal with positive probability
/// under the chain (reverse BFS from the terminal set).
std::vector<char> reaches_terminal(const TabularMDP& mdp,
                                   const Eigen::SparseMatrix<double>& P) {
  std::vector<std::vector<StateId>> rev(mdp.n_states);
  for (int s = 0; s < P.outerSize(); ++s)
    for (Eigen::SparseMatrix<double>::InnerIterator it(P, s); it; ++it)
      if (it.value() > 0.0 && it.row() != it.col())
        rev[it.col()].push_back(static_cast<StateId>(it.row()));
  std::vector<char> hit(mdp.n_states, 0);
  std::deque<StateId> queue;
  for (StateId s = 0; s < mdp.n_states; ++s)
    if (mdp.is_terminal(s)) {
      hit[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (const StateId p : rev[s])
      if (!hit[p]) {
        hit[p] = 1;
        queue.push_back(p);
      }
  }
  return hit;
}

/// Solves (I - gamma P) V = r over the non-terminal states.
Eigen::VectorXd solve_transient(const TabularMDP& mdp,
                                const AveragedChain& chain, double gamma) {
  std::vector<int> idx(mdp.n_states, -1);
  std::vector<StateId> states;
  for (StateId s = 0; s < mdp.n_states; ++s)
    if (!mdp.is_terminal(s)) {
      idx[s] = static_cast<int>(states.size());
      states.push_back(s);
    }
  const int n = static_cast<int>(states.size());

  // chain.P is column-major; its transpose exposes each row s as a column.
  const Eigen::SparseMatrix<double> Pt = chain.P.transpose();
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    const StateId s = states[i];
    rhs[i] = chain.r[s];
    trips.emplace_back(i, i, 1.0);
    for (Eigen::SparseMatrix<double>::InnerIterator it(Pt, s); it; ++it) {
      const StateId next = static_cast<StateId>(it.row());
      if (idx[next] < 0) continue;  // terminal successor contributes 0
      trips.emplace_back(i, idx[next], -gamma * it.value());
    }
  }

  Eigen::SparseMatrix<double> M(n, n);
  M.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("policy evaluation: singular system");
  const Eigen::VectorXd x = lu.solve(rhs);

  Eigen::VectorXd V = Eigen::VectorXd::Zero(mdp.n_states);
  for (int i = 0; i < n; ++i) V[states[i]] = x[i];
  return V;
}

Eigen::MatrixXd q_from_v(const TabularMDP& mdp, const Eigen::VectorXd& V) {
  Eigen::MatrixXd Q =
      Eigen::MatrixXd::Constant(mdp.n_states, mdp.n_actions, kNaN);
  for (StateId s = 0; s < mdp.n_states; ++s) {
    for (ActionId a = 0; a < mdp.n_actions; ++a) {
      if (!mdp.legal(s, a)) continue;
      if (mdp.is_terminal(s)) {
        Q(s, a) = 0.0;
        continue;
      }
      double q = mdp.r(s, a);
      for (const Transition& t : mdp.row(s, a))
        q += mdp.discount * t.prob * V[t.next];
      Q(s, a) = q;
    }
  }
  return Q;
}

}  // namespace

ValueTable policy_evaluation(const TabularMDP& mdp, const Policy& pi) {
  const Eigen::MatrixXd probs = pi.tabulate(mdp);
  const AveragedChain chain = average_chain(mdp, probs);

  ValueTable table;
  table.gamma = mdp.discount;
  table.horizon = mdp.horizon;

  if (mdp.horizon.has_value()) {
    Eigen::VectorXd V = Eigen::VectorXd::Zero(mdp.n_states);
    for (int t = 0; t < *mdp.horizon; ++t) {
      Eigen::VectorXd next = chain.r + mdp.discount * (chain.P * V);
      for (StateId s = 0; s < mdp.n_states; ++s)
        if (mdp.is_terminal(s)) next[s] = 0.0;
      V = std::move(next);
    }
    table.V = std::move(V);
  } else {
    if (mdp.discount >= 1.0) {
      const std::vector<char> hit = reaches_terminal(mdp, chain.P);
      for (StateId s = 0; s < mdp.n_states; ++s)
        if (!hit[s])
          throw std::runtime_error(
              "value undefined: state cannot reach a terminal under the "
              "policy at discount 1");
    }
    table.V = solve_transient(mdp, chain, mdp.discount);
  }
  table.Q = q_from_v(mdp, table.V);
  return table;
}

ValueIterationResult value_iteration(const TabularMDP& mdp, double tol,
                                     int max_sweeps, double tie_tol) {
  Eigen::VectorXd V = Eigen::VectorXd::Zero(mdp.n_states);
  const bool finite = mdp.horizon.has_value();
  const int sweeps = finite ? *mdp.horizon : max_sweeps;

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double residual = 0.0;
    Eigen::VectorXd next = V;
    for (StateId s = 0; s < mdp.n_states; ++s) {
      if (mdp.is_terminal(s)) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (ActionId a = 0; a < mdp.n_actions; ++a) {
        if (!mdp.legal(s, a)) continue;
        double q = mdp.r(s, a);
        for (const Transition& t : mdp.row(s, a))
          q += mdp.discount * t.prob * V[t.next];
        best = std::max(best, q);
      }
      residual = std::max(residual, std::abs(best - V[s]));
      next[s] = best;
    }
    V = std::move(next);
    if (!finite && residual <= tol) break;
    if (!finite && sweep + 1 == sweeps)
      throw std::runtime_error("value iteration did not converge");
  }

  ValueIterationResult out;
  out.values.V = V;
  out.values.Q = q_from_v(mdp, V);
  out.values.gamma = mdp.discount;
  out.values.horizon = mdp.horizon;
  out.optimal_actions.resize(mdp.n_states);

  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_actions);
  for (StateId s = 0; s < mdp.n_states; ++s) {
    if (mdp.is_terminal(s)) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (ActionId a = 0; a < mdp.n_actions; ++a)
      if (mdp.legal(s, a)) best = std::max(best, out.values.Q(s, a));
    bool first = true;
    for (ActionId a = 0; a < mdp.n_actions; ++a) {
      if (!mdp.legal(s, a)) continue;
      if (out.values.Q(s, a) >= best - tie_tol) {
        out.optimal_actions[s].push_back(a);
        if (first) probs(s, a) = 1.0;  // lowest-index tie-break
        first = false;
      }
    }
  }
  out.policy = Policy::tabular(std::move(probs));
  return out;
}

LossReport loss_with_vstar(const TabularMDP& mdp, const Policy& pi,
                           const Eigen::VectorXd& v_star) {
  const ValueTable vpi = policy_evaluation(mdp, pi);
  LossReport report;
  report.v_star = v_star;
  report.v_pi = vpi.V;
  report.gaps = v_star - vpi.V;
  report.mu = mdp.start_dist;
  report.loss = report.mu.dot(report.gaps);
  return report;
}

LossReport loss(const TabularMDP& mdp, const Policy& pi) {
  const ValueIterationResult vi = value_iteration(mdp);
  return loss_with_vstar(mdp, pi, vi.values.V);
}

Policy solve_with_reward(const TabularMDP& mdp, const Eigen::VectorXd& rho) {
  if (rho.size() != mdp.n_states)
    throw std::invalid_argument("solve_with_reward: reward table size");
  TabularMDP modified = mdp;
  for (StateId s = 0; s < mdp.n_states; ++s) {
    if (mdp.is_terminal(s)) continue;
    for (ActionId a = 0; a < mdp.n_actions; ++a)
      if (mdp.legal(s, a)) modified.reward[modified.index(s, a)] = rho[s];
  }
  return value_iteration(modified).policy;
}

Policy solve_with_reward(const TabularMDP& mdp, const Eigen::MatrixXd& r_sa) {
  if (r_sa.rows() != mdp.n_states || r_sa.cols() != mdp.n_actions)
    throw std::invalid_argument("solve_with_reward: reward table size");
  TabularMDP modified = mdp;
  for (StateId s = 0; s < mdp.n_states; ++s) {
    if (mdp.is_terminal(s)) continue;
    for (ActionId a = 0; a < mdp.n_actions; ++a)
      if (mdp.legal(s, a)) modified.reward[modified.index(s, a)] = r_sa(s, a);
  }
  return value_iteration(modified).policy;
}

void write_loss_csv(const std::string& path, const LossReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "state,v_star,v_pi,gap,mu\n";
  for (Eigen::Index s = 0; s < report.gaps.size(); ++s)
    out << s << ',' << csv_double(report.v_star[s]) << ','
        << csv_double(report.v_pi[s]) << ',' << csv_double(report.gaps[s])
        << ',' << csv_double(report.mu[s]) << "\n";
}

}  // namespace mfirl
