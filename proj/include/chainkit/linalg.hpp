#pragma once

#include <Eigen/Dense>

namespace chainkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Determinant as sign and log-magnitude, for values that under- or overflow.
struct SignedLogDet {
  int sign = 1;  // -1, 0 or +1
  double log_abs = 0.0;

  double value() const;
};

/// Partial-pivoting LU determinant. An empty matrix has determinant 1.
double determinant(const Matrix& a);
SignedLogDet signed_log_det(const Matrix& a);

/// Largest absolute entry; 0 for an empty matrix.
double max_abs(const Matrix& a);

/// 2-norm condition number via SVD.
double condition_number(const Matrix& a);

}  // namespace chainkit
