#include "chainkit/kernel.hpp"

#include <cmath>
#include <string>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

Vector level_weights(const ChainSpec& spec, int j) {
  const auto w = spec.spaces[j].weights();
  return Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
}

}  // namespace

PropagatedSystem propagate(const ChainSpec& spec, const BiorthogonalSystem& bio) {
  const int m = spec.levels;
  PropagatedSystem out;
  out.psi.resize(m);
  out.phi.resize(m);
  std::vector<Matrix> transfers;
  for (int j = 0; j + 1 < m; ++j) transfers.push_back(transfer_matrix(spec, j));

  out.psi[0] = bio.psi1;
  for (int j = 0; j + 1 < m; ++j) {
    out.psi[j + 1] = out.psi[j] * level_weights(spec, j).asDiagonal() * transfers[j].transpose();
    if (!out.psi[j + 1].allFinite())
      throw NumericalError("psi propagation overflow at level " + std::to_string(j + 2));
  }
  out.phi[m - 1] = bio.phim;
  for (int j = m - 2; j >= 0; --j) {
    out.phi[j] = out.phi[j + 1] * level_weights(spec, j + 1).asDiagonal() * transfers[j];
    if (!out.phi[j].allFinite())
      throw NumericalError("phi propagation overflow at level " + std::to_string(j + 1));
  }

  const Matrix eye = Matrix::Identity(spec.particles, spec.particles);
  for (int j = 0; j < m; ++j) {
    const Matrix gram = out.psi[j] * level_weights(spec, j).asDiagonal() * out.phi[j].transpose();
    out.dualization_residual = std::max(out.dualization_residual, max_abs(gram - eye));
  }
  return out;
}

BlockKernel build_block_kernel(const ChainSpec& spec, const PropagatedSystem& prop) {
  const int m = spec.levels;
  BlockKernel bk;
  for (int j = 0; j < m; ++j) bk.level_sizes.push_back(spec.spaces[j].size());
  bk.k_blocks.resize(m * m);
  bk.w_blocks.resize(m * m);
  bk.kcheck_blocks.resize(m * m);

  std::vector<Matrix> transfers;
  for (int j = 0; j + 1 < m; ++j) transfers.push_back(transfer_matrix(spec, j));

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const auto ni = static_cast<Eigen::Index>(bk.level_sizes[i]);
      const auto nj = static_cast<Eigen::Index>(bk.level_sizes[j]);
      bk.k_blocks[i * m + j] = prop.psi[i].transpose() * prop.phi[j];
      Matrix& w = bk.w_blocks[i * m + j];
      if (i <= j) {
        w = Matrix::Zero(ni, nj);
      } else if (i == j + 1) {
        w = transfers[j];
      } else {
        w = transfers[i - 1] * level_weights(spec, i - 1).asDiagonal() * bk.w_blocks[(i - 1) * m + j];
      }
      bk.kcheck_blocks[i * m + j] = bk.k_blocks[i * m + j] - w;
    }
  }
  return bk;
}

Ensemble build_ensemble(ChainSpec spec) {
  Ensemble e;
  e.spec = require_valid(std::move(spec));
  e.bio = build_biorthogonal_system(e.spec);
  e.prop = propagate(e.spec, e.bio);
  e.kernel = build_block_kernel(e.spec, e.prop);
  return e;
}

KernelEvaluator::KernelEvaluator(const Ensemble& e) : e_(e) {
  for (int j = 0; j < e.spec.levels; ++j) mu_.push_back(level_weights(e.spec, j));
  for (int j = 0; j + 1 < e.spec.levels; ++j) transfers_.push_back(e.kernel.w(j + 1, j));
}

Vector KernelEvaluator::psi(int level, double x) const {
  if (level == 0) return psi_first(e_.spec, e_.bio, x);
  const auto ys = e_.spec.spaces[level - 1].nodes();
  Vector row(ys.size());
  for (std::size_t p = 0; p < ys.size(); ++p)
    row(p) = coupling_weight(e_.spec, level - 1, x, ys[p]) * mu_[level - 1](p);
  return e_.prop.psi[level - 1] * row;
}

Vector KernelEvaluator::phi(int level, double x) const {
  const int m = e_.spec.levels;
  if (level == m - 1) return phi_last(e_.spec, e_.bio, x);
  const auto xs = e_.spec.spaces[level + 1].nodes();
  Vector col(xs.size());
  for (std::size_t q = 0; q < xs.size(); ++q)
    col(q) = coupling_weight(e_.spec, level, xs[q], x) * mu_[level + 1](q);
  return e_.prop.phi[level + 1] * col;
}

double KernelEvaluator::composite(int i, int j, double x, double y) const {
  if (i <= j) return 0.0;
  if (i == j + 1) return coupling_weight(e_.spec, j, x, y);
  // v(z) = w_{j+1,j}(z, y) on level j+1, then pushed up to level i-1
  const auto zs = e_.spec.spaces[j + 1].nodes();
  Vector v(zs.size());
  for (std::size_t q = 0; q < zs.size(); ++q) v(q) = coupling_weight(e_.spec, j, zs[q], y);
  for (int l = j + 1; l + 1 < i; ++l) v = transfers_[l] * mu_[l].cwiseProduct(v);
  const auto us = e_.spec.spaces[i - 1].nodes();
  double sum = 0.0;
  for (std::size_t q = 0; q < us.size(); ++q) sum += coupling_weight(e_.spec, i - 1, x, us[q]) * mu_[i - 1](q) * v(q);
  return sum;
}

Matrix KernelEvaluator::kcheck_matrix(const std::vector<LevelPoint>& rows, const std::vector<LevelPoint>& cols) const {
  std::vector<Vector> psis;
  std::vector<Vector> phis;
  psis.reserve(rows.size());
  phis.reserve(cols.size());
  for (const auto& r : rows) psis.push_back(psi(r.level, r.x));
  for (const auto& c : cols) phis.push_back(phi(c.level, c.x));
  Matrix out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      out(a, b) = psis[a].dot(phis[b]) - composite(rows[a].level, cols[b].level, rows[a].x, cols[b].x);
  return out;
}

double KernelEvaluator::kcheck_determinant(const std::vector<LevelPoint>& points) const {
  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const std::size_t n = points.size();
  if (n == 0) return 1.0;
  std::vector<Vector> psis;
  std::vector<Vector> phis;
  for (const auto& p : points) {
    psis.push_back(psi(p.level, p.x));
    phis.push_back(phi(p.level, p.x));
  }
  LMatrix out(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      long double sum = 0.0L;
      for (Eigen::Index c = 0; c < psis[a].size(); ++c)
        sum += static_cast<long double>(psis[a](c)) * phis[b](c);
      out(a, b) = sum - composite(points[a].level, points[b].level, points[a].x, points[b].x);
    }
  return static_cast<double>(out.partialPivLu().determinant());
}

}  // namespace chainkit
