#pragma once

#include <vector>

#include "chainkit/biorthogonal.hpp"
#include "chainkit/chain_model.hpp"
#include "chainkit/linalg.hpp"

namespace chainkit {

/// psi_a^{(j)} and phi_a^{(j)} on every level grid (zero-based level index).
struct PropagatedSystem {
  std::vector<Matrix> psi;  // N x n_j
  std::vector<Matrix> phi;  // N x n_j
  double dualization_residual = 0.0;  // max_j max_ab |<psi_a, phi_b>_j - delta_ab|
};

/// psi moves up the chain through w_{j+1,j}, phi moves down through its
/// transpose; both act as [kernel value] x [node weight] on grid functions.
PropagatedSystem propagate(const ChainSpec& spec, const BiorthogonalSystem& bio);

/// Dense m x m block kernel on the level grids.
struct BlockKernel {
  std::vector<std::size_t> level_sizes;
  std::vector<Matrix> k_blocks;       // K_ij, row-major over (i, j)
  std::vector<Matrix> w_blocks;       // composite w_ij, exactly zero for i <= j
  std::vector<Matrix> kcheck_blocks;  // K_ij - w_ij

  int levels() const { return static_cast<int>(level_sizes.size()); }
  const Matrix& k(int i, int j) const { return k_blocks[i * levels() + j]; }
  const Matrix& w(int i, int j) const { return w_blocks[i * levels() + j]; }
  const Matrix& kcheck(int i, int j) const { return kcheck_blocks[i * levels() + j]; }
};

BlockKernel build_block_kernel(const ChainSpec& spec, const PropagatedSystem& prop);

/// Everything derived from one validated chain.
struct Ensemble {
  ChainSpec spec;
  BiorthogonalSystem bio;
  PropagatedSystem prop;
  BlockKernel kernel;
};

/// Validates the chain, biorthogonalizes, propagates and assembles the kernel.
Ensemble build_ensemble(ChainSpec spec);

/// Point evaluation of the kernel pieces at arbitrary coordinates, consistent
/// with the discretized operators: off-grid psi/phi are one Nystrom step from
/// the neighbouring level grid, composite couplings are nested quadrature.
/// Holds a reference; the Ensemble must outlive it.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const Ensemble& e);

  Vector psi(int level, double x) const;
  Vector phi(int level, double x) const;
  /// w_ij(x, y); zero for i <= j.
  double composite(int i, int j, double x, double y) const;
  double k(int i, int j, double x, double y) const { return psi(i, x).dot(phi(j, y)); }
  double kcheck(int i, int j, double x, double y) const { return k(i, j, x, y) - composite(i, j, x, y); }

  /// Matrix of kcheck between two lists of (level, coordinate) points.
  struct LevelPoint {
    int level;
    double x;
  };
  Matrix kcheck_matrix(const std::vector<LevelPoint>& rows, const std::vector<LevelPoint>& cols) const;
  /// det of the square kcheck matrix, summed and factored in long double.
  double kcheck_determinant(const std::vector<LevelPoint>& points) const;

 private:
  const Ensemble& e_;
  std::vector<Vector> mu_;
  std::vector<Matrix> transfers_;
};

}  // namespace chainkit
