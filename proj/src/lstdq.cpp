#include "mfirl/lstdq.hpp"

#include <fstream>
#include <stdexcept>

#include "mfirl/csv.hpp"

namespace mfirl {

namespace {

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << csv_double(m(i, j));
    }
    out << "\n";
  }
}

}  // namespace

LstdqSystem lstdq_accumulate(const DemonstrationSet& demos,
                             const FeatureMap& features, double gamma,
                             bool include_terminal) {
  demos.require_valid_for_fitting();
  const int mq = features.value_dim();
  const int mr = features.reward_dim();

  LstdqSystem sys;
  sys.A = Eigen::MatrixXd::Zero(mq, mq);
  sys.Z = Eigen::MatrixXd::Zero(mq, mr);
  sys.gamma = gamma;

  for (const Trajectory& traj : demos.trajectories) {
    const int T = traj.length();
    for (int t = 0; t < T; ++t) {
      const bool last = (t + 1 == T);
      if (last && !include_terminal) break;
      const auto [s, a] = traj.steps[t];
      const BlockVec g = features.value_features_block(s, a);
      const int m = static_cast<int>(g.values.size());
      const Eigen::VectorXd gr = features.step_reward_features(s, a);

      sys.A.block(g.offset, g.offset, m, m) += g.values * g.values.transpose();
      if (!last) {
        const auto [s2, a2] = traj.steps[t + 1];
        const BlockVec g2 = features.value_features_block(s2, a2);
        sys.A.block(g.offset, g2.offset, m, g2.values.size()) -=
            gamma * (g.values * g2.values.transpose());
      }
      sys.Z.block(g.offset, 0, m, mr) += g.values * gr.transpose();
      ++sys.sample_count;
    }
  }
  if (sys.sample_count == 0)
    throw std::invalid_argument(
        "demonstrations contain no usable transitions");
  return sys;
}

double LstdqSystem::default_ridge() const {
  return 1e-6 * A.trace() / static_cast<double>(A.rows());
}

void LstdqSystem::solve(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("ridge must be non-negative");
  const Eigen::MatrixXd M =
      A + lambda * Eigen::MatrixXd::Identity(A.rows(), A.cols());
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  if (lu.rcond() < 1e-12)
    throw std::runtime_error(
        "lstdq system is numerically singular; increase the ridge "
        "regularizer");
  ridge = lambda;
  C = lu.solve(Z);
  // Refinement keeps the absolute residual small even when A holds sums
  // over millions of transitions.
  for (int pass = 0; pass < 4; ++pass) {
    const Eigen::MatrixXd R = Z - M * C;
    if (R.cwiseAbs().maxCoeff() <= 1e-10) break;
    C += lu.solve(R);
  }
}

Eigen::VectorXd LstdqSystem::q_weights(const Eigen::VectorXd& w_R) const {
  if (!solved()) throw std::logic_error("q_weights: system not solved");
  if (w_R.size() != C.cols())
    throw std::invalid_argument("q_weights: reward weight dimension mismatch");
  return C * w_R;
}

double LstdqSystem::residual() const {
  if (!solved()) throw std::logic_error("residual: system not solved");
  const Eigen::MatrixXd M =
      A + ridge * Eigen::MatrixXd::Identity(A.rows(), A.cols());
  return (M * C - Z).cwiseAbs().maxCoeff();
}

void LstdqSystem::dump_csv(const std::string& path_prefix) const {
  write_matrix_csv(path_prefix + "_A.csv", A);
  write_matrix_csv(path_prefix + "_Z.csv", Z);
  if (solved()) write_matrix_csv(path_prefix + "_C.csv", C);
}

}  // namespace mfirl
