#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include "mfirl/envs/blackjack.hpp"
#include "mfirl/envs/gridworld.hpp"
#include "mfirl/envs/tictactoe.hpp"
#include "mfirl/estimators.hpp"
#include "mfirl/features/features.hpp"
#include "test_support.hpp"

using namespace mfirl;

namespace {

/// Uniform-random rollouts; enough to touch a spread of states.
DemonstrationSet roll_demos(const Environment& env, int episodes,
                            int max_steps, Rng& rng) {
  DemonstrationSet d;
  d.env_tag = env.tag();
  for (int e = 0; e < episodes; ++e) {
    Trajectory traj;
    StateId s = env.reset(rng);
    for (int t = 0; max_steps == 0 || t < max_steps; ++t) {
      const auto legal = env.legal_actions(s);
      const ActionId a = legal[rng.uniform_int(static_cast<int>(legal.size()))];
      traj.steps.emplace_back(s, a);
      const StepResult res = env.step(s, a, rng);
      if (res.done) break;
      s = res.next;
    }
    d.trajectories.push_back(std::move(traj));
  }
  return d;
}

Eigen::VectorXd random_point(int dim, double radius, Rng& rng) {
  Eigen::VectorXd w(dim);
  for (int i = 0; i < dim; ++i) w[i] = radius * (2.0 * rng.uniform01() - 1.0);
  return w;
}

/// Log-likelihood recomputed step by step through the public policy kernel,
/// ignoring the objective's state compression entirely.
double naive_log_likelihood(const DemonstrationSet& demos,
                            const Environment& env, const FeatureMap& fm,
                            double beta, const Eigen::VectorXd& w_Q) {
  double total = 0.0;
  for (const Trajectory& traj : demos.trajectories)
    for (const auto& [s, a] : traj.steps) {
      const auto legal = env.legal_actions(s);
      const Eigen::VectorXd p = softmax_policy_prob(w_Q, beta, fm, s, legal);
      for (std::size_t i = 0; i < legal.size(); ++i)
        if (legal[i] == a) total += std::log(p[static_cast<int>(i)]);
    }
  return total;
}

struct Domain {
  std::unique_ptr<Environment> env;
  std::shared_ptr<const FeatureMap> fm;
  DemonstrationSet demos;
  std::shared_ptr<LstdqSystem> system;
};

Domain make_domain(const std::string& tag, int episodes, Rng& rng) {
  Domain d;
  d.env = make_environment(tag);
  d.fm = make_feature_map(*d.env, FeatureSpec{});
  const int max_steps = d.env->episodic() ? 0 : 8;
  d.demos = roll_demos(*d.env, episodes, max_steps, rng);
  const double gamma = d.env->exact_model().discount;
  d.system = std::make_shared<LstdqSystem>(
      lstdq_accumulate(d.demos, *d.fm, gamma, d.env->episodic()));
  d.system->solve(d.system->default_ridge());
  return d;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("at zero weights the likelihood counts the legal sets") {
  Rng rng(5);
  const Domain d = make_domain("blackjack", 30, rng);

  const SoftmaxObjective po =
      SoftmaxObjective::for_po(d.demos, *d.env, *d.fm, 1.0);
  CHECK(po.dim() == 20);
  CHECK(po.beta() == 1.0);
  CHECK(po.step_count() == static_cast<long>(d.demos.total_steps()));

  // two legal actions everywhere: L(0) = -N log 2
  const double at_zero = po.value(Eigen::VectorXd::Zero(20));
  const double want = -static_cast<double>(d.demos.total_steps()) * std::log(2.0);
  CHECK(at_zero == doctest::Approx(want).epsilon(1e-12));

  // gradient at zero: per step, phi(chosen) minus the legal-set mean
  Eigen::VectorXd grad;
  po.value_and_gradient(Eigen::VectorXd::Zero(20), grad);
  Eigen::VectorXd want_grad = Eigen::VectorXd::Zero(20);
  for (const Trajectory& traj : d.demos.trajectories)
    for (const auto& [s, a] : traj.steps) {
      want_grad += d.fm->value_features(s, a);
      for (const ActionId b : d.env->legal_actions(s))
        want_grad -= 0.5 * d.fm->value_features(s, b);
    }
  CHECK((grad - want_grad).cwiseAbs().maxCoeff() <= 1e-10);

  // the tic-tac-toe legal sets shrink as the board fills
  Rng rng2(6);
  const Domain t = make_domain("tictactoe:random", 20, rng2);
  const SoftmaxObjective tpo =
      SoftmaxObjective::for_po(t.demos, *t.env, *t.fm, 1.0);
  double w = 0.0;
  for (const Trajectory& traj : t.demos.trajectories)
    for (const auto& [s, a] : traj.steps)
      w -= std::log(static_cast<double>(t.env->legal_actions(s).size()));
  CHECK(tpo.value(Eigen::VectorXd::Zero(tpo.dim())) ==
        doctest::Approx(w).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central differences") {
  int seed = 100;
  for (const char* tag : {"blackjack", "gridworld32", "tictactoe:random"}) {
    Rng rng(seed++);
    const Domain d = make_domain(tag, 10, rng);
    const SoftmaxObjective po =
        SoftmaxObjective::for_po(d.demos, *d.env, *d.fm, 1.0);
    const SoftmaxObjective rp =
        SoftmaxObjective::for_rp(d.demos, *d.env, *d.fm, *d.system, 1.0);
    for (const SoftmaxObjective* obj : {&po, &rp}) {
      for (int rep = 0; rep < 3; ++rep) {
        const Eigen::VectorXd w =
            rep == 0 ? Eigen::VectorXd::Zero(obj->dim())
                     : random_point(obj->dim(), 1.5, rng);
        Eigen::VectorXd grad;
        obj->value_and_gradient(w, grad);
        const Eigen::VectorXd fd = test::fd_gradient(
            [&](const Eigen::VectorXd& x) { return obj->value(x); }, w);
        CHECK(test::rel_gap(grad, fd) <= 1e-5);
      }
    }
  }
}

TEST_CASE("the objective is concave along every probed segment") {
  int seed = 200;
  for (const char* tag : {"blackjack", "gridworld32", "tictactoe:random"}) {
    Rng rng(seed++);
    const Domain d = make_domain(tag, 10, rng);
    const SoftmaxObjective po =
        SoftmaxObjective::for_po(d.demos, *d.env, *d.fm, 1.0);
    const SoftmaxObjective rp =
        SoftmaxObjective::for_rp(d.demos, *d.env, *d.fm, *d.system, 1.0);
    for (const SoftmaxObjective* obj : {&po, &rp}) {
      for (int rep = 0; rep < 20; ++rep) {
        const Eigen::VectorXd x = random_point(obj->dim(), 2.0, rng);
        const Eigen::VectorXd y = random_point(obj->dim(), 2.0, rng);
        const double mid = obj->value(0.5 * (x + y));
        CHECK(mid >= 0.5 * (obj->value(x) + obj->value(y)) - 1e-10);

        // the directional derivative is non-increasing along [x, y]
        Eigen::VectorXd g0, g1, gh;
        obj->value_and_gradient(x, g0);
        obj->value_and_gradient(0.5 * (x + y), gh);
        obj->value_and_gradient(y, g1);
        const Eigen::VectorXd dXY = y - x;
        CHECK(g0.dot(dXY) >= gh.dot(dXY) - 1e-10);
        CHECK(gh.dot(dXY) >= g1.dot(dXY) - 1e-10);
      }
    }
  }
}

TEST_CASE("reward-side and direct objectives are linked through C") {
  Rng rng(301);
  const Domain d = make_domain("blackjack", 25, rng);
  const SoftmaxObjective po =
      SoftmaxObjective::for_po(d.demos, *d.env, *d.fm, 1.0);
  const SoftmaxObjective rp =
      SoftmaxObjective::for_rp(d.demos, *d.env, *d.fm, *d.system, 1.0);
  CHECK(rp.dim() == 10);

  // L_rp(w_R) = L_po(C w_R) and grad L_rp = C^T grad L_po(C w_R)
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::VectorXd w = random_point(10, 2.0, rng);
    const Eigen::VectorXd wq = d.system->q_weights(w);
    CHECK(rp.value(w) == doctest::Approx(po.value(wq)).epsilon(1e-12));
    Eigen::VectorXd gr, gq;
    rp.value_and_gradient(w, gr);
    po.value_and_gradient(wq, gq);
    CHECK(test::rel_gap(gr, d.system->C.transpose() * gq) <= 1e-10);
  }

  // with C = I (square feature map) the two objectives coincide
  Rng trng(302);
  const Domain t = make_domain("tictactoe:random", 15, trng);
  const int m = t.fm->value_dim();
  REQUIRE(m == t.fm->reward_dim());
  auto eye = std::make_shared<LstdqSystem>();
  eye->A = Eigen::MatrixXd::Identity(m, m);
  eye->Z = Eigen::MatrixXd::Identity(m, m);
  eye->solve(0.0);
  const SoftmaxObjective tpo =
      SoftmaxObjective::for_po(t.demos, *t.env, *t.fm, 1.0);
  const SoftmaxObjective trp =
      SoftmaxObjective::for_rp(t.demos, *t.env, *t.fm, *eye, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::VectorXd w = random_point(m, 1.0, trng);
    CHECK(trp.value(w) == doctest::Approx(tpo.value(w)).epsilon(1e-12));
  }
}

TEST_CASE("temperature and weight scale are interchangeable") {
  Rng rng(41);
  const Domain d = make_domain("blackjack", 20, rng);
  const SoftmaxObjective base =
      SoftmaxObjective::for_po(d.demos, *d.env, *d.fm, 1.0);
  for (const double c : {0.5, 2.0, 10.0}) {
    const SoftmaxObjective hot =
        SoftmaxObjective::for_po(d.demos, *d.env, *d.fm, c);
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::VectorXd w = random_point(20, 0.8, rng);
      const double a = hot.value(w);
      const double b = base.value(c * w);
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
      Eigen::VectorXd gh, gb;
      hot.value_and_gradient(w, gh);
      base.value_and_gradient(c * w, gb);
      CHECK(test::rel_gap(gh, c * gb) <= 1e-12);
    }
  }
}

TEST_CASE("state compression changes nothing against a per-step recount") {
  Rng rng(51);
  const Domain d = make_domain("blackjack", 40, rng);
  const SoftmaxObjective po =
      SoftmaxObjective::for_po(d.demos, *d.env, *d.fm, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::VectorXd w = random_point(20, 1.5, rng);
    const double naive =
        naive_log_likelihood(d.demos, *d.env, *d.fm, 1.0, w);
    CHECK(po.value(w) ==
          doctest::Approx(naive).epsilon(1e-10));
  }
}

TEST_CASE("one free parameter recovers the logistic closed form") {
  TabularMDP mdp = TabularMDP::empty(1, 2, 0.9);
  mdp.trans[mdp.index(0, 0)] = {{0, 1.0}};
  mdp.trans[mdp.index(0, 1)] = {{0, 1.0}};
  mdp.start_dist[0] = 1.0;
  mdp.validate();
  const test::MdpEnv env(std::move(mdp));

  Eigen::MatrixXd pair_rows(2, 1);
  pair_rows << 1.0, 0.0;
  const auto fm = std::make_shared<test::PairFeatures>(
      pair_rows, Eigen::MatrixXd::Ones(1, 1), 2);

  DemonstrationSet demos;
  demos.env_tag = env.tag();
  demos.trajectories.push_back(
      Trajectory{{{0, 0}, {0, 0}, {0, 0}, {0, 1}}});  // three picks vs one

  const PoFit fit = fit_po(demos, env, *fm, 1.0);
  CHECK(std::abs(fit.params.w_Q[0] - std::log(3.0)) <= 1e-4);
  CHECK(fit.report.grad_max_norm <= 1e-6);
  CHECK(!fit.report.line_search_warning);
  CHECK(fit.report.wall_ms >= 0.0);

  const Policy pi = extract_policy(fit.params, fm, PolicyMode::Softmax);
  const std::vector<ActionId> legal{0, 1};
  CHECK(pi.action_probs(0, legal)[0] == doctest::Approx(0.75).epsilon(1e-5));
}

TEST_CASE("the fitted point beats a fine grid in two dimensions") {
  Rng rng(61);
  TabularMDP mdp = TabularMDP::empty(2, 2, 0.9);
  for (StateId s = 0; s < 2; ++s) {
    mdp.start_dist[s] = 0.5;
    for (ActionId a = 0; a < 2; ++a)
      mdp.trans[mdp.index(s, a)] = {{0, 0.5}, {1, 0.5}};
  }
  mdp.validate();
  const test::MdpEnv env(std::move(mdp));

  Eigen::MatrixXd pair_rows(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) pair_rows(i, j) = 2.0 * rng.uniform01() - 1.0;
  const test::PairFeatures fm(pair_rows, Eigen::MatrixXd::Ones(2, 1), 2);

  DemonstrationSet demos;
  demos.env_tag = env.tag();
  Trajectory traj;
  for (int i = 0; i < 5; ++i) traj.steps.emplace_back(0, 0);
  for (int i = 0; i < 2; ++i) traj.steps.emplace_back(0, 1);
  for (int i = 0; i < 4; ++i) traj.steps.emplace_back(1, 1);
  traj.steps.emplace_back(1, 0);
  demos.trajectories.push_back(std::move(traj));

  const PoFit fit = fit_po(demos, env, fm, 1.0);
  const SoftmaxObjective obj = SoftmaxObjective::for_po(demos, env, fm, 1.0);
  CHECK(fit.report.objective ==
        doctest::Approx(obj.value(fit.params.w_Q)).epsilon(1e-12));

  double best = -1e300;
  Eigen::VectorXd w(2);
  for (w[0] = -4.0; w[0] <= 4.0; w[0] += 0.01)
    for (w[1] = -4.0; w[1] <= 4.0; w[1] += 0.01)
      best = std::max(best, obj.value(w));
  CHECK(fit.report.objective >= best - 1e-4);
  CHECK(fit.report.objective >= obj.value(Eigen::VectorXd::Zero(2)));
}

TEST_CASE("quasi-newton ascent solves quadratics to tolerance") {
  Rng rng(71);
  Eigen::MatrixXd B(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) B(i, j) = rng.uniform01() - 0.5;
  const Eigen::MatrixXd M = B * B.transpose() + Eigen::MatrixXd::Identity(5, 5);
  const Eigen::VectorXd target = random_point(5, 2.0, rng);

  const auto f = [&](const Eigen::VectorXd& w, Eigen::VectorXd& grad) {
    grad = -M * (w - target);
    return -0.5 * (w - target).dot(M * (w - target));
  };
  const MaximizeResult res = maximize(f, Eigen::VectorXd::Zero(5));
  CHECK(res.report.grad_max_norm <= 1e-6);
  CHECK((res.w - target).cwiseAbs().maxCoeff() <= 1e-5);
  CHECK(res.report.objective <= 0.0);
  CHECK(res.report.objective >= -1e-10);
  CHECK(res.report.iterations <= 100);
  CHECK(!res.report.line_search_warning);

  // iteration cap is respected
  FitOptions capped;
  capped.max_iter = 3;
  const MaximizeResult short_run = maximize(f, Eigen::VectorXd::Zero(5), capped);
  CHECK(short_run.report.iterations <= 3);
}

TEST_CASE("both fitters improve on the zero start and agree on blackjack") {
  Rng rng(81);
  const Domain d = make_domain("blackjack", 50, rng);
  const double at_zero =
      -static_cast<double>(d.demos.total_steps()) * std::log(2.0);

  const PoFit po = fit_po(d.demos, *d.env, *d.fm, 1.0);
  CHECK(po.report.objective >= at_zero);
  CHECK(po.report.grad_max_norm <= 1e-6);
  CHECK(po.params.w_Q.size() == 20);

  const RpFit rp = fit_rp(d.demos, *d.env, *d.fm, d.system, 1.0);
  CHECK(rp.report.objective >= at_zero);
  CHECK(rp.params.w_R.size() == 10);
  CHECK(rp.params.system == d.system);

  // the reward-side optimum can do no better than the direct one, and on
  // this domain the value map is rich enough to nearly close the gap
  CHECK(rp.report.objective <= po.report.objective + 1e-6);
  CHECK(po.report.objective - rp.report.objective <= 0.05);

  auto unsolved = std::make_shared<LstdqSystem>();
  unsolved->A = Eigen::MatrixXd::Identity(20, 20);
  unsolved->Z = Eigen::MatrixXd::Ones(20, 10);
  CHECK_THROWS_AS(fit_rp(d.demos, *d.env, *d.fm, unsolved, 1.0),
                  std::logic_error);
}

TEST_CASE("separable demonstrations drive the greedy policy to the data") {
  TabularMDP mdp = TabularMDP::empty(4, 3, 0.9);
  for (StateId s = 0; s < 4; ++s) {
    mdp.start_dist[s] = 0.25;
    for (ActionId a = 0; a < 3; ++a)
      mdp.trans[mdp.index(s, a)] = {{(s + 1) % 4, 1.0}};
  }
  mdp.validate();
  const test::MdpEnv env(std::move(mdp));
  const auto fm = std::make_shared<test::PairFeatures>(
      Eigen::MatrixXd::Identity(12, 12), Eigen::MatrixXd::Identity(4, 4), 3);

  DemonstrationSet demos;
  demos.env_tag = env.tag();
  Trajectory traj;
  for (int rep = 0; rep < 5; ++rep)
    for (StateId s = 0; s < 4; ++s) traj.steps.emplace_back(s, s % 3);
  demos.trajectories.push_back(std::move(traj));

  const PoFit fit = fit_po(demos, env, *fm, 1.0);
  const Policy greedy = extract_policy(fit.params, fm, PolicyMode::Greedy);
  const std::vector<ActionId> legal{0, 1, 2};
  for (StateId s = 0; s < 4; ++s) {
    const Eigen::VectorXd p = greedy.action_probs(s, legal);
    CHECK(p[s % 3] == 1.0);
    CHECK(p.sum() == 1.0);
  }

  // greedy extraction ignores positive rescaling of the weights
  PoParams scaled = fit.params;
  scaled.w_Q *= 7.5;
  const Policy same = extract_policy(scaled, fm, PolicyMode::Greedy);
  for (StateId s = 0; s < 4; ++s)
    CHECK((same.action_probs(s, legal) - greedy.action_probs(s, legal))
              .cwiseAbs()
              .maxCoeff() == 0.0);

  // softmax extraction gives a full-support distribution
  const Policy soft = extract_policy(fit.params, fm, PolicyMode::Softmax);
  const Eigen::VectorXd p = soft.action_probs(0, legal);
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.minCoeff() > 0.0);
}

TEST_CASE("a log-prior shifts value and gradient additively") {
  Rng rng(91);
  const Domain d = make_domain("blackjack", 15, rng);
  const SoftmaxObjective plain =
      SoftmaxObjective::for_po(d.demos, *d.env, *d.fm, 1.0);
  SoftmaxObjective primed =
      SoftmaxObjective::for_po(d.demos, *d.env, *d.fm, 1.0);
  primed.set_log_prior([](const Eigen::VectorXd& w, Eigen::VectorXd& grad) {
    grad -= w;
    return -0.5 * w.squaredNorm();
  });

  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::VectorXd w = random_point(20, 1.0, rng);
    CHECK(primed.value(w) ==
          doctest::Approx(plain.value(w) - 0.5 * w.squaredNorm())
              .epsilon(1e-12));
    Eigen::VectorXd gp, gq;
    primed.value_and_gradient(w, gp);
    plain.value_and_gradient(w, gq);
    CHECK(test::rel_gap(gp, gq - w) <= 1e-12);
    const Eigen::VectorXd fd = test::fd_gradient(
        [&](const Eigen::VectorXd& x) { return primed.value(x); }, w);
    CHECK(test::rel_gap(gp, fd) <= 1e-5);
  }

  // the prior makes the problem strictly concave, so ascent converges even
  // on data the plain likelihood cannot pin down
  const MaximizeResult res = maximize(
      [&](const Eigen::VectorXd& w, Eigen::VectorXd& g) {
        return primed.value_and_gradient(w, g);
      },
      Eigen::VectorXd::Zero(20));
  CHECK(res.report.grad_max_norm <= 1e-6);
}

TEST_CASE("malformed inputs are rejected with clear errors") {
  Rng rng(95);
  const Domain d = make_domain("blackjack", 5, rng);
  const SoftmaxObjective po =
      SoftmaxObjective::for_po(d.demos, *d.env, *d.fm, 1.0);

  CHECK_THROWS(po.value(Eigen::VectorXd::Zero(7)));  // wrong dimension
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(20);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(po.value(bad));

  // demonstrated action outside the legal set
  TabularMDP mdp = TabularMDP::empty(2, 2, 0.9);
  mdp.start_dist[0] = 1.0;
  mdp.trans[mdp.index(0, 0)] = {{1, 1.0}};  // action 1 illegal at state 0
  mdp.trans[mdp.index(1, 0)] = {{0, 1.0}};
  mdp.trans[mdp.index(1, 1)] = {{0, 1.0}};
  mdp.validate();
  const test::MdpEnv env(std::move(mdp));
  const test::PairFeatures fm(Eigen::MatrixXd::Ones(4, 2),
                              Eigen::MatrixXd::Ones(2, 1), 2);
  DemonstrationSet demos;
  demos.env_tag = env.tag();
  demos.trajectories.push_back(Trajectory{{{0, 1}}});
  CHECK_THROWS_WITH_AS(SoftmaxObjective::for_po(demos, env, fm, 1.0),
                       "objective: demonstrated action illegal",
                       std::invalid_argument);

  // non-finite feature values are caught at construction; state 1 has both
  // actions legal, so its scores are materialized
  Eigen::MatrixXd poisoned = Eigen::MatrixXd::Ones(4, 2);
  poisoned(2, 0) = std::numeric_limits<double>::infinity();
  const test::PairFeatures bad_fm(poisoned, Eigen::MatrixXd::Ones(2, 1), 2);
  DemonstrationSet ok;
  ok.env_tag = env.tag();
  ok.trajectories.push_back(Trajectory{{{1, 0}}});
  CHECK_THROWS_WITH_AS(SoftmaxObjective::for_po(ok, env, bad_fm, 1.0),
                       "objective: non-finite feature values",
                       std::invalid_argument);
}

TEST_CASE("learned rewards are the linear functional of the state basis") {
  Rng rng(97);
  const BlackjackEnv env;
  const auto fm = make_feature_map(env, FeatureSpec{});

  RpParams params;
  params.w_R = Eigen::VectorXd::Zero(10);
  Eigen::VectorXd rho = learned_reward(params, *fm, env.n_states());
  CHECK(rho.size() == env.n_states());
  CHECK(rho.cwiseAbs().maxCoeff() == 0.0);

  params.w_R = random_point(10, 1.0, rng);
  rho = learned_reward(params, *fm, env.n_states());
  for (StateId s = 0; s < env.n_states(); s += 11)
    CHECK(rho[s] == doctest::Approx(fm->reward_features(s).dot(params.w_R))
                        .epsilon(1e-14));
  CHECK(rho[BlackjackEnv::terminal_state()] == 0.0);

  RpParams doubled = params;
  doubled.w_R *= 2.0;
  const Eigen::VectorXd rho2 = learned_reward(doubled, *fm, env.n_states());
  CHECK((rho2 - 2.0 * rho).cwiseAbs().maxCoeff() <= 1e-14);

}

// Only the reward-side model defines a reward; the direct-value overload is
// deleted, which the concept observes as a failed substitution.
template <typename P>
concept DefinesReward = requires(const P& p, const FeatureMap& f) {
  learned_reward(p, f, 201);
};
static_assert(DefinesReward<RpParams>);
static_assert(!DefinesReward<PoParams>);

TEST_CASE("weights survive the parameter file round trip") {
  const std::string dir = "/tmp/mfirl_estimators_test";
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/params.txt";

  Eigen::VectorXd w(5);
  w << 1.0 / 3.0, -0.0, 1e-300, 6.02214076e23, -17.125;
  save_params(path, "rp", 1.0, w);
  const LoadedParams in = load_params(path);
  CHECK(in.model == "rp");
  CHECK(in.beta == 1.0);
  REQUIRE(in.w.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(in.w[i] == w[i]);  // bitwise

  save_params(path, "po", 2.5, Eigen::VectorXd::Zero(2));
  CHECK(load_params(path).model == "po");
  CHECK(load_params(path).beta == 2.5);

  CHECK_THROWS(load_params(dir + "/missing.txt"));
  {
    std::ofstream out(path);
    out << "not a header\n1.0\n";
  }
  CHECK_THROWS(load_params(path));
}

}  // TEST_SUITE("estimators")
