#include "chainkit/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

bool MeasureSpace::symmetric(double tol) const {
  if (kind_ == MeasureKind::Discrete) {
    for (double x : nodes_) {
      if (find_node(-x, tol) < 0) return false;
    }
    return true;
  }
  for (const auto& iv : intervals_) {
    const bool mirrored = std::any_of(intervals_.begin(), intervals_.end(), [&](const Interval& o) {
      return std::abs(o.lo + iv.hi) <= tol && std::abs(o.hi + iv.lo) <= tol;
    });
    if (!mirrored) return false;
  }
  return true;
}

bool MeasureSpace::in_support(double x, double tol) const {
  if (kind_ == MeasureKind::Discrete) return find_node(x, tol) >= 0;
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [&](const Interval& iv) { return iv.lo - tol <= x && x <= iv.hi + tol; });
}

long MeasureSpace::find_node(double x, double tol) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x - tol);
  if (it != nodes_.end() && std::abs(*it - x) <= tol) return it - nodes_.begin();
  return -1;
}

double MeasureSpace::max_abs_node() const {
  double m = 0.0;
  for (double x : nodes_) m = std::max(m, std::abs(x));
  if (kind_ == MeasureKind::Quadrature) {
    for (const auto& iv : intervals_) m = std::max({m, std::abs(iv.lo), std::abs(iv.hi)});
  }
  return m;
}

MeasureSpace gauss_legendre_rule(int order, double a, double b) {
  if (order < 1) throw MeasureError("gauss_legendre_rule: order must be positive, got " + std::to_string(order));
  if (!(a < b)) throw MeasureError("gauss_legendre_rule: need a < b");

  MeasureSpace s;
  s.kind_ = MeasureKind::Quadrature;
  s.intervals_ = {{a, b}};
  s.order_ = order;
  s.panels_ = 1;
  s.nodes_.resize(order);
  s.weights_.resize(order);

  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const int n = order;
  // Roots are symmetric; solve for the positive half and mirror.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      auto [p, d] = legendre_with_derivative(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < kNewtonTol) break;
    }
    dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // nodes_[i] is the i-th smallest
    s.nodes_[i] = mid - half * x;
    s.nodes_[n - 1 - i] = mid + half * x;
    s.weights_[i] = half * w;
    s.weights_[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) s.nodes_[n / 2] = mid;
  return s;
}

MeasureSpace composite_rule(int order, std::vector<Interval> intervals, int panels,
                            std::span<const double> breakpoints) {
  if (order < 1) throw MeasureError("composite_rule: order must be positive");
  if (panels < 1) throw MeasureError("composite_rule: panels must be positive");
  if (intervals.empty()) throw MeasureError("composite_rule: empty interval list");
  for (const auto& iv : intervals) {
    if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw MeasureError("composite_rule: each interval needs finite a < b");
  }
  std::sort(intervals.begin(), intervals.end(), [](const Interval& l, const Interval& r) { return l.lo < r.lo; });
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].lo < intervals[i - 1].hi) throw MeasureError("composite_rule: overlapping intervals");
  }

  MeasureSpace s;
  s.kind_ = MeasureKind::Quadrature;
  s.intervals_ = intervals;
  s.order_ = order;
  s.panels_ = panels;

  const MeasureSpace ref = gauss_legendre_rule(order, -1.0, 1.0);
  for (const auto& iv : intervals) {
    std::vector<double> cuts;
    for (int p = 0; p <= panels; ++p) cuts.push_back(iv.lo + (iv.hi - iv.lo) * p / panels);
    cuts.back() = iv.hi;
    for (double bp : breakpoints) {
      if (bp > iv.lo && bp < iv.hi) cuts.push_back(bp);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double half = 0.5 * (cuts[p + 1] - cuts[p]);
      const double mid = 0.5 * (cuts[p + 1] + cuts[p]);
      for (int k = 0; k < order; ++k) {
        s.nodes_.push_back(mid + half * ref.nodes_[k]);
        s.weights_.push_back(half * ref.weights_[k]);
      }
    }
  }
  return s;
}

MeasureSpace discrete_space(std::vector<double> points, std::vector<double> weights) {
  if (points.size() != weights.size())
    throw MeasureError("discrete_space: points and weights differ in length");
  if (points.empty()) throw MeasureError("discrete_space: need at least one point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw MeasureError("discrete_space: non-finite point");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw MeasureError("discrete_space: non-positive weight at point " + std::to_string(points[i]));
  }
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) { return points[l] < points[r]; });

  MeasureSpace s;
  s.kind_ = MeasureKind::Discrete;
  for (std::size_t i : idx) {
    if (!s.nodes_.empty() && points[i] == s.nodes_.back())
      throw MeasureError("discrete_space: duplicate point " + std::to_string(points[i]));
    s.nodes_.push_back(points[i]);
    s.weights_.push_back(weights[i]);
  }
  return s;
}

}  // namespace chainkit
