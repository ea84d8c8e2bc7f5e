#pragma once

#include <vector>

#include "chainkit/kernel.hpp"
#include "chainkit/linalg.hpp"
#include "chainkit/measure.hpp"

namespace chainkit {

/// Union of closed intervals. A node subset of a discrete space is a union of
/// degenerate intervals [x, x].
struct Region {
  std::vector<Interval> intervals;

  static Region of(std::vector<Interval> intervals) { return Region{std::move(intervals)}; }
  static Region nodes(const std::vector<double>& xs);

  bool contains(double x) const;
  bool empty() const { return intervals.empty(); }
  bool operator==(const Region&) const = default;
};

/// Point mass `weight * delta_location` inside rho_j.
struct Atom {
  double weight = 0.0;
  double location = 0.0;
  bool operator==(const Atom&) const = default;
};

/// `weight * chi_region` inside rho_j.
struct IndicatorTerm {
  double weight = 0.0;
  Region region;
  bool operator==(const IndicatorTerm&) const = default;
};

/// rho_j = sum of atoms + sum of weighted indicators.
struct LevelRho {
  std::vector<Atom> atoms;
  std::vector<IndicatorTerm> sets;

  /// Indicator part of rho_j at x (atoms excluded).
  double set_value(double x) const;
};

struct RhoSpec {
  std::vector<LevelRho> levels;

  static RhoSpec zero(int m) { return RhoSpec{std::vector<LevelRho>(m)}; }
  /// rho_j = weight * chi_{J_j}.
  static RhoSpec indicator(const std::vector<Region>& regions, double weight = 1.0);
};

/// Throws ArgumentError on a wrong level count, repeated atom locations in a
/// level, atoms off the node set of a discrete space, or malformed intervals.
void validate_rho(const ChainSpec& spec, const RhoSpec& rho);

/// m lists of coordinates, one per level.
using LevelPoints = std::vector<std::vector<double>>;

/// det(psi_a^{(1)}(x_b^{(1)})) det(phi_a^{(m)}(x_b^{(m)})) prod_j det(w_{j+1,j}(x_a^{(j+1)}, x_b^{(j)})),
/// evaluated from the end polynomials and couplings only. Density with
/// respect to the product of level measures on unordered configurations.
double joint_density_product(const ChainSpec& spec, const BiorthogonalSystem& bio, const LevelPoints& points);

/// Same density as the Nm x Nm determinant of Kcheck with (level, particle)
/// indices ordered level-major.
double joint_density_kernel(const Ensemble& e, const LevelPoints& points);

/// Bare correlation determinant det(Kcheck_ij(x_a^{(i)}, x_b^{(j)})) for k_j
/// points on level j. The empty determinant is 1.
double correlator(const Ensemble& e, const LevelPoints& points);

/// G_ab = <psi_a^{(1)}| (1-rho_1) w*_{21} (1-rho_2) ... w*_{m,m-1} (1-rho_m) |phi_b^{(m)}>,
/// by sequential weighted transfers over grid nodes plus atom locations.
/// Uses only the end polynomials and couplings, never the block kernel.
Matrix weighted_G(const ChainSpec& spec, const BiorthogonalSystem& bio, const RhoSpec& rho);

/// det(I - Kcheck o rho) on the direct sum of level grids, with atoms bordered
/// in as extra rank-one columns.
SignedLogDet fredholm_log_det(const Ensemble& e, const RhoSpec& rho);
double fredholm_det(const Ensemble& e, const RhoSpec& rho);

struct IdentityReport {
  double lhs = 0.0;  // det G
  double rhs = 0.0;  // det(I - Kcheck o rho)
  double abs_diff = 0.0;
  double rel_diff = 0.0;  // abs_diff / max(1, |lhs|)
  int particles = 0;
  int levels = 0;
  std::vector<std::size_t> grid_sizes;
};

IdentityReport verify_identity(const Ensemble& e, const RhoSpec& rho);

/// Probability that level j has no points in J_j for every j:
/// det(I - Kcheck o chi_J), normalization constant 1.
double gap_probability(const Ensemble& e, const std::vector<Region>& regions);

struct JanossyDensity {
  double relative = 0.0;  // det of the resolvent kernel at the points
  double absolute = 0.0;  // relative * gap probability
};

/// Density of finding points exactly at `points` inside J with all others
/// outside J. The resolvent kernel is [(I - Kcheck chi_J)^{-1} Kcheck](x, y) chi_J(y).
/// Throws NumericalError when the gap probability is zero.
JanossyDensity janossy_density(const Ensemble& e, const std::vector<Region>& regions, const LevelPoints& points);

namespace detail {

struct GridPoint {
  int level;
  std::size_t index;
};

/// Kcheck restricted to a list of grid points (rows and columns).
Matrix grid_kernel(const BlockKernel& k, const std::vector<GridPoint>& pts);

}  // namespace detail

}  // namespace chainkit
