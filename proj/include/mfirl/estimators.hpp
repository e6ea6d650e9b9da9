#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mfirl/envs/environment.hpp"
#include "mfirl/feature_map.hpp"
#include "mfirl/lstdq.hpp"
#include "mfirl/policy.hpp"
#include "mfirl/types.hpp"

namespace mfirl {

/// Reward-side parameters: the fitted reward weights plus the linear system
/// mapping them to action-value weights (w_Q = C w_R).
struct RpParams {
  Eigen::VectorXd w_R;
  double beta = 1.0;
  std::shared_ptr<const LstdqSystem> system;
};

/// Direct action-value parameters.
struct PoParams {
  Eigen::VectorXd w_Q;
  double beta = 1.0;
};

struct FitReport {
  double objective = 0.0;
  double grad_max_norm = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
  /// Set when a line search stalled; the best iterate is still returned.
  bool line_search_warning = false;
};

/// Optional additive differentiable log-prior: returns log p(w) and adds
/// its gradient into the second argument.
using LogPrior =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Log-likelihood of the demonstrated actions under the softmax policy
///   p(a | s) = exp(beta phi(s,a)^T w) / sum_{a' legal} exp(beta phi(s,a')^T w),
/// summed over every demonstration step. States are deduplicated: each
/// visited state stores its legal-action score matrix and per-action
/// counts once, which keeps evaluation cost independent of the episode
/// count for small state spaces.
class SoftmaxObjective {
 public:
  /// phi(s, a) = g_Q(s, a); weight dimension m_Q.
  static SoftmaxObjective for_po(const DemonstrationSet& demos,
                                 const Environment& env,
                                 const FeatureMap& features, double beta);
  /// phi(s, a) = C^T g_Q(s, a); weight dimension m_R. The system must be
  /// solved.
  static SoftmaxObjective for_rp(const DemonstrationSet& demos,
                                 const Environment& env,
                                 const FeatureMap& features,
                                 const LstdqSystem& system, double beta);

  int dim() const { return dim_; }
  double beta() const { return beta_; }
  long step_count() const { return step_count_; }

  double value(const Eigen::VectorXd& w) const;
  /// Returns the objective and fills `grad` (resized to dim()).
  double value_and_gradient(const Eigen::VectorXd& w,
                            Eigen::VectorXd& grad) const;

  /// Adds a differentiable log-prior term to value and gradient.
  void set_log_prior(LogPrior prior) { prior_ = std::move(prior); }

  /// Negated Hessian at w = 0 (the uniform-policy point):
  ///   beta^2 Σ_s visits_s Cov_uniform[phi(s, ·)].
  /// Positive semidefinite; a direction it annihilates leaves every
  /// per-state score gap unchanged, so the objective is flat along it.
  Eigen::MatrixXd curvature_at_zero() const;

 private:
  struct StateBlock {
    Eigen::MatrixXd phi;     // one row per legal action
    Eigen::VectorXd counts;  // demonstrated picks per legal action
    double visits = 0.0;     // counts.sum()
  };

  SoftmaxObjective() = default;
  void compress(const DemonstrationSet& demos, const Environment& env,
                const std::function<Eigen::VectorXd(StateId, ActionId)>& phi);

  std::vector<StateBlock> blocks_;
  Eigen::VectorXd linear_;  // sum over steps of phi(s_t, a_t)
  int dim_ = 0;
  double beta_ = 1.0;
  long step_count_ = 0;
  LogPrior prior_;
};

/// Convenience single-shot forms of the two objectives.
std::pair<double, Eigen::VectorXd> rp_objective_and_gradient(
    const Eigen::VectorXd& w_R, const DemonstrationSet& demos,
    const LstdqSystem& system, const Environment& env,
    const FeatureMap& features, double beta);
std::pair<double, Eigen::VectorXd> po_objective_and_gradient(
    const Eigen::VectorXd& w_Q, const DemonstrationSet& demos,
    const Environment& env, const FeatureMap& features, double beta);

struct FitOptions {
  double tol_grad = 1e-6;  // max-norm stopping threshold
  int max_iter = 500;
  int memory = 10;  // curvature pairs kept by the two-loop recursion
};

struct MaximizeResult {
  Eigen::VectorXd w;
  FitReport report;
};

/// Limited-memory quasi-Newton ascent with a strong-Wolfe line search.
/// Returns the best iterate seen; a stalled line search sets the warning
/// flag instead of failing.
MaximizeResult maximize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>&
        value_and_gradient,
    Eigen::VectorXd w0, const FitOptions& opts = {});

struct RpFit {
  RpParams params;
  FitReport report;
};
struct PoFit {
  PoParams params;
  FitReport report;
};

/// Builds the rp objective from the demonstrations and maximizes it from
/// w = 0, in coordinates whitened by the curvature there; without that a
/// near-singular C stalls the line search far from the optimum. The
/// system must be solved.
RpFit fit_rp(const DemonstrationSet& demos, const Environment& env,
             const FeatureMap& features,
             std::shared_ptr<const LstdqSystem> system, double beta = 1.0,
             const FitOptions& opts = {});

/// Builds the po objective and maximizes it from w = 0.
PoFit fit_po(const DemonstrationSet& demos, const Environment& env,
             const FeatureMap& features, double beta = 1.0,
             const FitOptions& opts = {});

enum class PolicyMode { Softmax, Greedy };

/// Policy over value features with effective weights C w_R (RP) or w_Q (PO).
Policy extract_policy(const RpParams& params,
                      std::shared_ptr<const FeatureMap> features,
                      PolicyMode mode);
Policy extract_policy(const PoParams& params,
                      std::shared_ptr<const FeatureMap> features,
                      PolicyMode mode);

/// rho(s) = g_R(s)^T w_R over all states. Only the reward-side model
/// defines a reward; the deleted overload turns a PO call into a compile
/// error.
Eigen::VectorXd learned_reward(const RpParams& params,
                               const FeatureMap& features, int n_states);
Eigen::VectorXd learned_reward(const PoParams&, const FeatureMap&,
                               int) = delete;

/// Text round-trip: header `model=<rp|po> beta=<..> dim=<..>`, then one
/// weight per line at full precision.
void save_params(const std::string& path, const std::string& model,
                 double beta, const Eigen::VectorXd& w);
struct LoadedParams {
  std::string model;
  double beta;
  Eigen::VectorXd w;
};
LoadedParams load_params(const std::string& path);

}  // namespace mfirl
