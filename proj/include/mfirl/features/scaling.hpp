#pragma once

#include <Eigen/Dense>

#include "mfirl/feature_map.hpp"

namespace mfirl {

/// Per-component affine map v' = scale .* v + offset fitted so that each
/// component covers the target range over a sample of the full feature
/// domain. Constant components map to the range midpoint, except an
/// all-ones component (a bias), which is left at 1.
class AffineScaler {
 public:
  static AffineScaler identity(int dim);

  /// `rows`: one feature vector per row, covering the whole domain.
  static AffineScaler fit(const Eigen::MatrixXd& rows, Scaling target);

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    return (v.array() * scale_.array() + offset_.array()).matrix();
  }
  /// Applies the map to every row.
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& rows) const;

  int dim() const { return static_cast<int>(scale_.size()); }

 private:
  AffineScaler(Eigen::VectorXd scale, Eigen::VectorXd offset)
      : scale_(std::move(scale)), offset_(std::move(offset)) {}
  Eigen::VectorXd scale_, offset_;
};

/// Drops every column identical to an earlier one (exact comparison; the
/// raw feature columns are small integers). Returns the kept column indices
/// in their original order.
std::vector<int> dedup_columns(const Eigen::MatrixXd& rows);

}  // namespace mfirl
