#include "chainkit/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

using LevelPoint = KernelEvaluator::LevelPoint;

void check_level_count(const ChainSpec& spec, std::size_t n, const char* what) {
  if (n != static_cast<std::size_t>(spec.levels))
    throw ArgumentError(std::string(what) + ": expected " + std::to_string(spec.levels) + " levels, got " +
                        std::to_string(n));
}

std::vector<LevelPoint> flatten(const LevelPoints& points) {
  std::vector<LevelPoint> out;
  for (std::size_t j = 0; j < points.size(); ++j)
    for (double x : points[j]) out.push_back({static_cast<int>(j), x});
  return out;
}

// One level's measure (1 - rho_j) dmu_j as weighted evaluation points:
// grid nodes carry mu (1 - s), atoms carry -c.
struct WeightedPoints {
  std::vector<double> x;
  std::vector<double> w;
};

WeightedPoints perturbed_measure(const MeasureSpace& space, const LevelRho& rho) {
  WeightedPoints out;
  const auto xs = space.nodes();
  const auto mu = space.weights();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.x.push_back(xs[i]);
    out.w.push_back(mu[i] * (1.0 - rho.set_value(xs[i])));
  }
  for (const auto& a : rho.atoms) {
    out.x.push_back(a.location);
    out.w.push_back(-a.weight);
  }
  return out;
}

// Points where rho_j acts, with their rho-weights. Grid nodes where the
// indicator part vanishes are dropped: their columns of Kcheck o rho are zero.
struct RhoSupport {
  std::vector<detail::GridPoint> grid;
  std::vector<double> grid_weight;
  std::vector<LevelPoint> atoms;
  std::vector<double> atom_weight;
};

RhoSupport rho_support(const ChainSpec& spec, const RhoSpec& rho) {
  RhoSupport out;
  for (int j = 0; j < spec.levels; ++j) {
    const auto xs = spec.spaces[j].nodes();
    const auto mu = spec.spaces[j].weights();
    const auto& lr = rho.levels[j];
    if (!lr.sets.empty()) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double s = lr.set_value(xs[i]);
        if (s != 0.0) {
          out.grid.push_back({j, i});
          out.grid_weight.push_back(mu[i] * s);
        }
      }
    }
    for (const auto& a : lr.atoms) {
      out.atoms.push_back({j, a.location});
      out.atom_weight.push_back(a.weight);
    }
  }
  return out;
}

}  // namespace

// --- Regions and rho ---------------------------------------------------------

Region Region::nodes(const std::vector<double>& xs) {
  Region r;
  for (double x : xs) r.intervals.push_back({x, x});
  return r;
}

bool Region::contains(double x) const {
  return std::any_of(intervals.begin(), intervals.end(), [x](const Interval& iv) { return iv.contains(x); });
}

double LevelRho::set_value(double x) const {
  double s = 0.0;
  for (const auto& t : sets)
    if (t.region.contains(x)) s += t.weight;
  return s;
}

RhoSpec RhoSpec::indicator(const std::vector<Region>& regions, double weight) {
  RhoSpec r;
  for (const auto& reg : regions) {
    LevelRho lr;
    if (!reg.empty()) lr.sets.push_back({weight, reg});
    r.levels.push_back(std::move(lr));
  }
  return r;
}

void validate_rho(const ChainSpec& spec, const RhoSpec& rho) {
  check_level_count(spec, rho.levels.size(), "rho");
  for (int j = 0; j < spec.levels; ++j) {
    const auto& lr = rho.levels[j];
    const auto& space = spec.spaces[j];
    for (std::size_t a = 0; a < lr.atoms.size(); ++a) {
      const double x = lr.atoms[a].location;
      if (!std::isfinite(x) || !std::isfinite(lr.atoms[a].weight))
        throw ArgumentError("rho level " + std::to_string(j + 1) + ": non-finite atom");
      for (std::size_t b = 0; b < a; ++b)
        if (lr.atoms[b].location == x)
          throw ArgumentError("rho level " + std::to_string(j + 1) + ": repeated atom location " + std::to_string(x));
      if (space.kind() == MeasureKind::Discrete && space.find_node(x, 0.0) < 0)
        throw ArgumentError("rho level " + std::to_string(j + 1) + ": atom at " + std::to_string(x) +
                            " is not a node of the discrete space");
    }
    for (const auto& t : lr.sets) {
      if (!std::isfinite(t.weight)) throw ArgumentError("rho level " + std::to_string(j + 1) + ": non-finite weight");
      for (const auto& iv : t.region.intervals)
        if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi)
          throw ArgumentError("rho level " + std::to_string(j + 1) + ": malformed interval");
    }
  }
}

// --- Densities and correlators ------------------------------------------------

double joint_density_product(const ChainSpec& spec, const BiorthogonalSystem& bio, const LevelPoints& points) {
  check_level_count(spec, points.size(), "joint_density_product");
  const int n = spec.particles;
  for (const auto& lvl : points)
    if (static_cast<int>(lvl.size()) != n) throw ArgumentError("joint_density_product: each level needs N points");
  const int m = spec.levels;

  Matrix first(n, n);
  Matrix last(n, n);
  for (int b = 0; b < n; ++b) {
    first.col(b) = psi_first(spec, bio, points[0][b]);
    last.col(b) = phi_last(spec, bio, points[m - 1][b]);
  }
  double value = determinant(first) * determinant(last);
  for (int j = 0; j + 1 < m; ++j) {
    Matrix w(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) w(a, b) = coupling_weight(spec, j, points[j + 1][a], points[j][b]);
    value *= determinant(w);
  }
  return value;
}

double joint_density_kernel(const Ensemble& e, const LevelPoints& points) {
  check_level_count(e.spec, points.size(), "joint_density_kernel");
  for (const auto& lvl : points)
    if (static_cast<int>(lvl.size()) != e.spec.particles)
      throw ArgumentError("joint_density_kernel: each level needs N points");
  return correlator(e, points);
}

double correlator(const Ensemble& e, const LevelPoints& points) {
  check_level_count(e.spec, points.size(), "correlator");
  for (const auto& lvl : points)
    if (static_cast<int>(lvl.size()) > e.spec.particles)
      throw ArgumentError("correlator: more than N points on a level");
  const auto flat = flatten(points);
  if (flat.empty()) return 1.0;
  return KernelEvaluator(e).kcheck_determinant(flat);
}

// --- The identity --------------------------------------------------------------

Matrix weighted_G(const ChainSpec& spec, const BiorthogonalSystem& bio, const RhoSpec& rho) {
  validate_rho(spec, rho);
  const int m = spec.levels;
  const int n = spec.particles;

  WeightedPoints cur = perturbed_measure(spec.spaces[0], rho.levels[0]);
  // u(a, p) = [psi_a^{(1)} pushed to the current level](x_p)
  Matrix u(n, cur.x.size());
  for (std::size_t p = 0; p < cur.x.size(); ++p) u.col(p) = psi_first(spec, bio, cur.x[p]);

  for (int j = 0; j + 1 < m; ++j) {
    WeightedPoints next = perturbed_measure(spec.spaces[j + 1], rho.levels[j + 1]);
    Matrix w(cur.x.size(), next.x.size());
    for (std::size_t p = 0; p < cur.x.size(); ++p)
      for (std::size_t q = 0; q < next.x.size(); ++q) w(p, q) = cur.w[p] * coupling_weight(spec, j, next.x[q], cur.x[p]);
    u = u * w;
    cur = std::move(next);
  }

  Matrix end(cur.x.size(), n);
  for (std::size_t p = 0; p < cur.x.size(); ++p) end.row(p) = cur.w[p] * phi_last(spec, bio, cur.x[p]).transpose();
  return u * end;
}

namespace detail {

Matrix grid_kernel(const BlockKernel& k, const std::vector<GridPoint>& pts) {
  Matrix out(pts.size(), pts.size());
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = 0; b < pts.size(); ++b)
      out(a, b) = k.kcheck(pts[a].level, pts[b].level)(pts[a].index, pts[b].index);
  return out;
}

}  // namespace detail

SignedLogDet fredholm_log_det(const Ensemble& e, const RhoSpec& rho) {
  validate_rho(e.spec, rho);
  const RhoSupport sup = rho_support(e.spec, rho);
  const std::size_t ng = sup.grid.size();
  const std::size_t na = sup.atoms.size();
  const std::size_t d = ng + na;
  if (d == 0) return {};

  Matrix kmat(d, d);
  kmat.topLeftCorner(ng, ng) = detail::grid_kernel(e.kernel, sup.grid);
  if (na > 0) {
    const KernelEvaluator ev(e);
    std::vector<LevelPoint> grid_pts;
    for (const auto& g : sup.grid) grid_pts.push_back({g.level, e.spec.spaces[g.level].nodes()[g.index]});
    kmat.topRightCorner(ng, na) = ev.kcheck_matrix(grid_pts, sup.atoms);
    kmat.bottomLeftCorner(na, ng) = ev.kcheck_matrix(sup.atoms, grid_pts);
    kmat.bottomRightCorner(na, na) = ev.kcheck_matrix(sup.atoms, sup.atoms);
  }
  Vector omega(d);
  for (std::size_t i = 0; i < ng; ++i) omega(i) = sup.grid_weight[i];
  for (std::size_t i = 0; i < na; ++i) omega(ng + i) = sup.atom_weight[i];

  const Matrix a = Matrix::Identity(d, d) - kmat * omega.asDiagonal();
  return signed_log_det(a);
}

double fredholm_det(const Ensemble& e, const RhoSpec& rho) { return fredholm_log_det(e, rho).value(); }

IdentityReport verify_identity(const Ensemble& e, const RhoSpec& rho) {
  IdentityReport r;
  r.lhs = determinant(weighted_G(e.spec, e.bio, rho));
  r.rhs = fredholm_det(e, rho);
  r.abs_diff = std::abs(r.lhs - r.rhs);
  r.rel_diff = r.abs_diff / std::max(1.0, std::abs(r.lhs));
  r.particles = e.spec.particles;
  r.levels = e.spec.levels;
  r.grid_sizes = e.kernel.level_sizes;
  return r;
}

double gap_probability(const Ensemble& e, const std::vector<Region>& regions) {
  check_level_count(e.spec, regions.size(), "gap_probability");
  return fredholm_det(e, RhoSpec::indicator(regions));
}

// --- Janossy densities ------------------------------------------------------------

JanossyDensity janossy_density(const Ensemble& e, const std::vector<Region>& regions, const LevelPoints& points) {
  check_level_count(e.spec, regions.size(), "janossy_density");
  check_level_count(e.spec, points.size(), "janossy_density");

  std::vector<detail::GridPoint> grid;
  std::vector<LevelPoint> grid_pts;
  std::vector<double> omega;
  for (int j = 0; j < e.spec.levels; ++j) {
    const auto xs = e.spec.spaces[j].nodes();
    const auto mu = e.spec.spaces[j].weights();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (regions[j].contains(xs[i])) {
        grid.push_back({j, i});
        grid_pts.push_back({j, xs[i]});
        omega.push_back(mu[i]);
      }
    }
  }
  const auto pts = flatten(points);
  const std::size_t ng = grid.size();
  const std::size_t np = pts.size();

  const Vector om = Eigen::Map<const Vector>(omega.data(), static_cast<Eigen::Index>(ng));
  const Matrix i_minus_a = Matrix::Identity(ng, ng) - detail::grid_kernel(e.kernel, grid) * om.asDiagonal();
  const SignedLogDet gap = signed_log_det(i_minus_a);
  if (gap.sign == 0) throw NumericalError("janossy_density: gap probability is zero, resolvent undefined");

  JanossyDensity out;
  if (np == 0) {
    out.relative = 1.0;
    out.absolute = gap.value();
    return out;
  }

  const KernelEvaluator ev(e);
  Matrix resolvent = ev.kcheck_matrix(pts, pts);
  if (ng > 0) {
    const Matrix to_pts = ev.kcheck_matrix(grid_pts, pts);
    const Matrix from_pts = ev.kcheck_matrix(pts, grid_pts);
    const Matrix x = i_minus_a.partialPivLu().solve(to_pts);
    resolvent += from_pts * om.asDiagonal() * x;
  }
  for (std::size_t b = 0; b < np; ++b)
    if (!regions[pts[b].level].contains(pts[b].x)) resolvent.col(b).setZero();

  out.relative = determinant(resolvent);
  out.absolute = out.relative * gap.value();
  return out;
}

}  // namespace chainkit
