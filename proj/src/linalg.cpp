#include "chainkit/linalg.hpp"

#include <cmath>
#include <limits>

namespace chainkit {

double SignedLogDet::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

SignedLogDet signed_log_det(const Matrix& a) {
  SignedLogDet out;
  if (a.rows() == 0) return out;
  Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix& f = lu.matrixLU();
  out.sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double d = f(i, i);
    if (d == 0.0) return {0, -std::numeric_limits<double>::infinity()};
    if (d < 0.0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(d));
  }
  return out;
}

double determinant(const Matrix& a) {
  if (a.rows() == 0) return 1.0;
  if (a.rows() == 1) return a(0, 0);
  return Eigen::PartialPivLU<Matrix>(a).determinant();
}

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double condition_number(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace chainkit
