#include "chainkit/biorthogonal.hpp"

#include <cmath>
#include <string>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

constexpr double kConditionWarning = 1e12;

// N x n matrix of basis monomials times e^{-V/2} on a level grid.
Matrix weighted_monomials(const ChainSpec& spec, int level) {
  const auto xs = spec.spaces[level].nodes();
  const int n = spec.particles;
  Matrix out(n, xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double w = half_weight(spec, level, xs[i]);
    for (int k = 0; k < n; ++k) out(k, i) = std::pow(xs[i], basis_degree(spec.basis, k)) * w;
  }
  return out;
}

Vector as_vector(std::span<const double> s) {
  return Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(s.size()));
}

}  // namespace

ChainMomentMatrix chain_moment_matrix(const ChainSpec& spec) {
  const int m = spec.levels;
  // rows: basis index, columns: level nodes
  Matrix u = weighted_monomials(spec, 0);
  for (int j = 0; j + 1 < m; ++j) {
    const Vector mu = as_vector(spec.spaces[j].weights());
    u = (u * mu.asDiagonal()) * transfer_matrix(spec, j).transpose();
    if (!u.allFinite()) throw NumericalError("overflow while propagating moments to level " + std::to_string(j + 2));
  }
  const Vector mu_m = as_vector(spec.spaces[m - 1].weights());
  const Matrix end = weighted_monomials(spec, m - 1);
  ChainMomentMatrix out;
  out.entries = u * mu_m.asDiagonal() * end.transpose();
  if (!out.entries.allFinite()) throw NumericalError("chain moment matrix is not finite");
  out.condition = condition_number(out.entries);
  return out;
}

LduFactors ldu_no_pivot(const Matrix& t, double rel_tol) {
  const Eigen::Index n = t.rows();
  if (t.cols() != n) throw ArgumentError("ldu_no_pivot: matrix must be square");
  Matrix lu = t;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double scale = max_abs(t.topLeftCorner(k + 1, k + 1));
    const double pivot = lu(k, k);
    if (!(std::abs(pivot) > rel_tol * scale))
      throw DegenerateEnsembleError("leading principal minor " + std::to_string(k + 1) +
                                        " of the moment matrix vanishes; no biorthogonal system of this size",
                                    static_cast<int>(k + 1));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      lu(i, k) /= pivot;
      for (Eigen::Index j = k + 1; j < n; ++j) lu(i, j) -= lu(i, k) * lu(k, j);
    }
  }
  LduFactors f;
  f.lower = Matrix::Identity(n, n);
  f.upper = Matrix::Identity(n, n);
  f.diagonal = lu.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) f.lower(i, j) = lu(i, j);
    for (Eigen::Index j = i + 1; j < n; ++j) f.upper(i, j) = lu(i, j) / f.diagonal(i);
  }
  return f;
}

Vector BiorthogonalSystem::monomials(double x) const {
  Vector v(particles);
  for (int k = 0; k < particles; ++k) v(k) = std::pow(x, basis_degree(basis, k));
  return v;
}

BiorthogonalSystem biorthogonalize(const ChainSpec& spec, const ChainMomentMatrix& t) {
  const int n = spec.particles;
  const LduFactors f = ldu_no_pivot(t.entries);

  BiorthogonalSystem bio;
  bio.basis = spec.basis;
  bio.particles = n;
  // Triangular inverses keep the degree structure exact.
  const Matrix eye = Matrix::Identity(n, n);
  bio.p = f.lower.triangularView<Eigen::UnitLower>().solve(eye);
  const Matrix u_inv = f.upper.triangularView<Eigen::UnitUpper>().solve(eye);
  bio.s = u_inv * f.diagonal.cwiseInverse().asDiagonal();
  bio.p.triangularView<Eigen::StrictlyUpper>().setZero();
  bio.p.diagonal().setOnes();
  bio.s.triangularView<Eigen::StrictlyLower>().setZero();

  bio.residual = max_abs(bio.p * t.entries * bio.s - eye);
  bio.condition = t.condition;
  if (t.condition > kConditionWarning)
    bio.warnings.push_back("moment matrix condition number " + std::to_string(t.condition) + " exceeds 1e12");

  bio.psi1 = bio.p * weighted_monomials(spec, 0);
  bio.phim = bio.s.transpose() * weighted_monomials(spec, spec.levels - 1);
  return bio;
}

BiorthogonalSystem build_biorthogonal_system(const ChainSpec& spec) {
  return biorthogonalize(spec, chain_moment_matrix(spec));
}

Vector psi_first(const ChainSpec& spec, const BiorthogonalSystem& bio, double x) {
  return bio.p_values(x) * half_weight(spec, 0, x);
}

Vector phi_last(const ChainSpec& spec, const BiorthogonalSystem& bio, double x) {
  return bio.s_values(x) * half_weight(spec, spec.levels - 1, x);
}

}  // namespace chainkit
