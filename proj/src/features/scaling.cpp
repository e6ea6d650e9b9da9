#include "mfirl/features/scaling.hpp"

#include <stdexcept>

namespace mfirl {

AffineScaler AffineScaler::identity(int dim) {
  return AffineScaler(Eigen::VectorXd::Ones(dim), Eigen::VectorXd::Zero(dim));
}

AffineScaler AffineScaler::fit(const Eigen::MatrixXd& rows, Scaling target) {
  const int dim = static_cast<int>(rows.cols());
  if (rows.rows() == 0) throw std::invalid_argument("scaler fit: no rows");
  if (target == Scaling::None) return identity(dim);

  const double lo = (target == Scaling::Symmetric) ? -1.0 : 0.0;
  const double hi = 1.0;
  const double mid = 0.5 * (lo + hi);

  Eigen::VectorXd mn = rows.colwise().minCoeff();
  Eigen::VectorXd mx = rows.colwise().maxCoeff();
  Eigen::VectorXd scale(dim), offset(dim);
  for (int j = 0; j < dim; ++j) {
    const double span = mx[j] - mn[j];
    if (span > 0.0) {
      scale[j] = (hi - lo) / span;
      offset[j] = lo - mn[j] * scale[j];
    } else if (mn[j] == 1.0) {
      // Bias component: keep it at 1 so the reward basis retains an intercept.
      scale[j] = 1.0;
      offset[j] = 0.0;
    } else {
      scale[j] = 0.0;
      offset[j] = mid;
    }
  }
  return AffineScaler(std::move(scale), std::move(offset));
}

Eigen::MatrixXd AffineScaler::apply_rows(const Eigen::MatrixXd& rows) const {
  return (rows.array().rowwise() * scale_.transpose().array()).rowwise() +
         offset_.transpose().array();
}

std::vector<int> dedup_columns(const Eigen::MatrixXd& rows) {
  std::vector<int> keep;
  for (int j = 0; j < rows.cols(); ++j) {
    bool dup = false;
    for (int k : keep) {
      if (rows.col(j) == rows.col(k)) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(j);
  }
  return keep;
}

}  // namespace mfirl
