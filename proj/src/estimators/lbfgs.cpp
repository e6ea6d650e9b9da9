#include <chrono>
#include <cmath>
#include <deque>

#include "mfirl/estimators.hpp"

// Standard limited-memory BFGS with a strong-Wolfe line search
// (sufficient-decrease c1 = 1e-4, curvature c2 = 0.9), written as a
// minimizer; maximize() hands it the negated objective. The zoom stage
// interpolates cubically, which lands on the exact minimizer for
// quadratic objectives.

namespace mfirl {

namespace {

using ValueGrad =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

constexpr double kC1 = 1e-4;
constexpr double kC2 = 0.9;

/// Minimizer of the cubic interpolant through (a, fa, da), (b, fb, db);
/// bisects when the interpolant has no interior minimum in (a, b).
double cubic_step(double a, double fa, double da, double b, double fb,
                  double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (!(disc >= 0.0)) return 0.5 * (a + b);
  const double sign = (b > a) ? 1.0 : -1.0;
  const double d2 = sign * std::sqrt(disc);
  const double denom = db - da + 2.0 * d2;
  if (denom == 0.0) return 0.5 * (a + b);
  const double x = b - (b - a) * (db + d2 - d1) / denom;
  const double lo = std::min(a, b), hi = std::max(a, b);
  if (!std::isfinite(x) || x <= lo || x >= hi) return 0.5 * (a + b);
  return x;
}

struct LineSearchResult {
  double alpha = 0.0;
  double f = 0.0;
  Eigen::VectorXd g;
  bool wolfe = false;  // both conditions met
};

/// Strong-Wolfe search along d from w (phi(a) = F(w + a d)); d must be a
/// descent direction (g0d < 0). Returns the best point evaluated when the
/// conditions cannot be met.
LineSearchResult line_search(const ValueGrad& F, const Eigen::VectorXd& w,
                             const Eigen::VectorXd& d, double f0, double g0d,
                             double alpha_init) {
  LineSearchResult best;
  best.f = f0;

  Eigen::VectorXd g;
  const auto eval = [&](double a, double& f, double& slope) {
    f = F(w + a * d, g);
    slope = g.dot(d);
    if (f < best.f) {
      best.alpha = a;
      best.f = f;
      best.g = g;
    }
  };

  const auto zoom = [&](double lo, double f_lo, double d_lo, double hi,
                        double f_hi, double d_hi) {
    for (int i = 0; i < 30; ++i) {
      const double a = cubic_step(lo, f_lo, d_lo, hi, f_hi, d_hi);
      double f, slope;
      eval(a, f, slope);
      if (f > f0 + kC1 * a * g0d || f >= f_lo) {
        hi = a;
        f_hi = f;
        d_hi = slope;
      } else {
        if (std::abs(slope) <= -kC2 * g0d) {
          best.alpha = a;
          best.f = f;
          best.g = g;
          best.wolfe = true;
          return;
        }
        if (slope * (hi - lo) >= 0.0) {
          hi = lo;
          f_hi = f_lo;
          d_hi = d_lo;
        }
        lo = a;
        f_lo = f;
        d_lo = slope;
      }
      if (std::abs(hi - lo) < 1e-16 * std::max(1.0, std::abs(lo))) return;
    }
  };

  double a_prev = 0.0, f_prev = f0, d_prev = g0d;
  double a = alpha_init;
  for (int i = 0; i < 20; ++i) {
    double f, slope;
    eval(a, f, slope);
    if (f > f0 + kC1 * a * g0d || (i > 0 && f >= f_prev)) {
      zoom(a_prev, f_prev, d_prev, a, f, slope);
      return best;
    }
    if (std::abs(slope) <= -kC2 * g0d) {
      best.alpha = a;
      best.f = f;
      best.g = g;
      best.wolfe = true;
      return best;
    }
    if (slope >= 0.0) {
      zoom(a, f, slope, a_prev, f_prev, d_prev);
      return best;
    }
    a_prev = a;
    f_prev = f;
    d_prev = slope;
    a = std::min(2.0 * a, 1e6);
  }
  return best;
}

}  // namespace

MaximizeResult maximize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>&
        value_and_gradient,
    Eigen::VectorXd w0, const FitOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const ValueGrad F = [&value_and_gradient](const Eigen::VectorXd& w,
                                            Eigen::VectorXd& g) {
    const double L = value_and_gradient(w, g);
    g = -g;
    return -L;
  };

  Eigen::VectorXd w = std::move(w0), g;
  double f = F(w, g);

  Eigen::VectorXd w_best = w, g_best = g;
  double f_best = f;

  std::deque<Eigen::VectorXd> S, Y;
  std::deque<double> rho;
  int iter = 0;
  bool warn = false;

  while (iter < opts.max_iter &&
         g.lpNorm<Eigen::Infinity>() > opts.tol_grad) {
    // Two-loop recursion for d = -H g.
    Eigen::VectorXd q = g;
    std::vector<double> alpha(S.size());
    for (int i = static_cast<int>(S.size()) - 1; i >= 0; --i) {
      alpha[i] = rho[i] * S[i].dot(q);
      q -= alpha[i] * Y[i];
    }
    if (!S.empty()) q *= S.back().dot(Y.back()) / Y.back().squaredNorm();
    for (int i = 0; i < static_cast<int>(S.size()); ++i) {
      const double beta = rho[i] * Y[i].dot(q);
      q += (alpha[i] - beta) * S[i];
    }
    Eigen::VectorXd d = -q;
    double g0d = g.dot(d);
    if (g0d >= 0.0) {
      // Curvature memory went stale; restart from steepest descent.
      S.clear();
      Y.clear();
      rho.clear();
      d = -g;
      g0d = -g.squaredNorm();
      if (g0d == 0.0) break;
    }

    const double a0 = S.empty() ? 1.0 / std::max(1.0, g.norm()) : 1.0;
    const LineSearchResult ls = line_search(F, w, d, f, g0d, a0);
    if (!(ls.f < f)) {
      warn = true;  // no progress; keep the best iterate found so far
      break;
    }
    const Eigen::VectorXd w_new = w + ls.alpha * d;
    const Eigen::VectorXd s = w_new - w;
    const Eigen::VectorXd y = ls.g - g;
    const double sy = s.dot(y);
    if (ls.wolfe && sy > 1e-12 * s.norm() * y.norm()) {
      S.push_back(s);
      Y.push_back(y);
      rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > opts.memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }
    w = w_new;
    f = ls.f;
    g = ls.g;
    ++iter;
    if (f < f_best) {
      f_best = f;
      w_best = w;
      g_best = g;
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  MaximizeResult out;
  out.w = std::move(w_best);
  out.report.objective = -f_best;
  out.report.grad_max_norm = g_best.lpNorm<Eigen::Infinity>();
  out.report.iterations = iter;
  out.report.wall_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  out.report.line_search_warning = warn;
  return out;
}

}  // namespace mfirl
