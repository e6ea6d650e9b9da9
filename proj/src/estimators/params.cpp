#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mfirl/csv.hpp"
#include "mfirl/estimators.hpp"

namespace mfirl {
namespace {

// Inverse square root of the curvature at w = 0, eigenvalues floored at
// 1e-10 of the largest so flat directions stay bounded instead of blowing
// up the metric.  Maximizing over v with w = M v is a Newton step at the
// start point baked into the coordinates; it rescues L-BFGS when the
// basis is badly conditioned, which happens to rp whenever the action
// value map C is near singular.  The po basis is already well scaled, and
// the floor would inject anisotropy it does not have, so po stays raw.
Eigen::MatrixXd newton_metric(const SoftmaxObjective& obj) {
  const Eigen::MatrixXd h = obj.curvature_at_zero();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double lambda_max = lambda.maxCoeff();
  if (!(lambda_max > 0.0))
    return Eigen::MatrixXd::Identity(obj.dim(), obj.dim());
  const double floor = 1e-10 * lambda_max;
  Eigen::VectorXd inv_sqrt(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    inv_sqrt[i] = 1.0 / std::sqrt(std::max(lambda[i], floor));
  return eig.eigenvectors() * inv_sqrt.asDiagonal() *
         eig.eigenvectors().transpose();
}

MaximizeResult maximize_preconditioned(const SoftmaxObjective& obj,
                                       const FitOptions& opts) {
  const Eigen::MatrixXd m = newton_metric(obj);
  MaximizeResult res = maximize(
      [&obj, &m](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
        Eigen::VectorXd gw(obj.dim());
        const double val = obj.value_and_gradient(m * v, gw);
        g.noalias() = m * gw;
        return val;
      },
      Eigen::VectorXd::Zero(obj.dim()), opts);
  res.w = m * res.w;
  return res;
}

}  // namespace

RpFit fit_rp(const DemonstrationSet& demos, const Environment& env,
             const FeatureMap& features,
             std::shared_ptr<const LstdqSystem> system, double beta,
             const FitOptions& opts) {
  if (!system || !system->solved())
    throw std::logic_error("fit_rp: lstdq system not solved");
  const SoftmaxObjective obj =
      SoftmaxObjective::for_rp(demos, env, features, *system, beta);
  MaximizeResult res = maximize_preconditioned(obj, opts);
  RpFit fit;
  fit.params.w_R = std::move(res.w);
  fit.params.beta = beta;
  fit.params.system = std::move(system);
  fit.report = res.report;
  return fit;
}

PoFit fit_po(const DemonstrationSet& demos, const Environment& env,
             const FeatureMap& features, double beta, const FitOptions& opts) {
  const SoftmaxObjective obj =
      SoftmaxObjective::for_po(demos, env, features, beta);
  MaximizeResult res = maximize(
      [&obj](const Eigen::VectorXd& w, Eigen::VectorXd& g) {
        return obj.value_and_gradient(w, g);
      },
      Eigen::VectorXd::Zero(obj.dim()), opts);
  PoFit fit;
  fit.params.w_Q = std::move(res.w);
  fit.params.beta = beta;
  fit.report = res.report;
  return fit;
}

Policy extract_policy(const RpParams& params,
                      std::shared_ptr<const FeatureMap> features,
                      PolicyMode mode) {
  if (!params.system || !params.system->solved())
    throw std::logic_error("extract_policy: lstdq system not solved");
  Eigen::VectorXd w_eff = params.system->q_weights(params.w_R);
  if (mode == PolicyMode::Greedy)
    return Policy::greedy(std::move(features), std::move(w_eff));
  return Policy::softmax(std::move(features), std::move(w_eff), params.beta);
}

Policy extract_policy(const PoParams& params,
                      std::shared_ptr<const FeatureMap> features,
                      PolicyMode mode) {
  if (mode == PolicyMode::Greedy)
    return Policy::greedy(std::move(features), params.w_Q);
  return Policy::softmax(std::move(features), params.w_Q, params.beta);
}

Eigen::VectorXd learned_reward(const RpParams& params,
                               const FeatureMap& features, int n_states) {
  if (params.w_R.size() != features.reward_dim())
    throw std::invalid_argument("learned_reward: dimension mismatch");
  Eigen::VectorXd rho(n_states);
  for (StateId s = 0; s < n_states; ++s)
    rho[s] = features.reward_features(s).dot(params.w_R);
  return rho;
}

void save_params(const std::string& path, const std::string& model,
                 double beta, const Eigen::VectorXd& w) {
  if (model != "rp" && model != "po")
    throw std::invalid_argument("save_params: model must be rp or po");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "model=" << model << " beta=" << csv_double(beta)
      << " dim=" << w.size() << "\n";
  for (Eigen::Index i = 0; i < w.size(); ++i) out << csv_double(w[i]) << "\n";
}

LoadedParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("params file: missing header");
  std::istringstream hs(header);
  std::string model_kv, beta_kv, dim_kv;
  if (!(hs >> model_kv >> beta_kv >> dim_kv) ||
      model_kv.rfind("model=", 0) != 0 || beta_kv.rfind("beta=", 0) != 0 ||
      dim_kv.rfind("dim=", 0) != 0)
    throw std::runtime_error("params file: malformed header");
  LoadedParams p;
  p.model = model_kv.substr(6);
  if (p.model != "rp" && p.model != "po")
    throw std::runtime_error("params file: unknown model " + p.model);
  p.beta = std::stod(beta_kv.substr(5));
  const int dim = std::stoi(dim_kv.substr(4));
  if (dim < 0) throw std::runtime_error("params file: negative dim");
  p.w.resize(dim);
  std::string line;
  for (int i = 0; i < dim; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("params file: fewer weights than dim");
    p.w[i] = std::stod(line);
  }
  return p;
}

}  // namespace mfirl
