#pragma once

#include <span>
#include <vector>

namespace chainkit {

/// Closed interval [lo, hi]. Endpoints may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool operator==(const Interval&) const = default;
};

enum class MeasureKind { Discrete, Quadrature };

/// One level's state space with its measure, stored as nodes with strictly
/// positive weights. Nodes are strictly increasing.
class MeasureSpace {
 public:
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  MeasureKind kind() const { return kind_; }

  /// Quadrature only: the interval list and per-panel rule the space came from.
  const std::vector<Interval>& intervals() const { return intervals_; }
  int order() const { return order_; }
  int panels() const { return panels_; }

  /// Sum of f(node) * weight, accumulated in ascending node order.
  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += f(nodes_[i]) * weights_[i];
    return sum;
  }

  /// Discrete: node set closed under negation. Quadrature: interval list
  /// closed under reflection.
  bool symmetric(double tol = 1e-12) const;

  /// Discrete: x coincides with a node. Quadrature: x lies in an interval.
  bool in_support(double x, double tol = 1e-12) const;

  /// Index of the node equal to x within tol, or -1.
  long find_node(double x, double tol = 1e-12) const;

  double max_abs_node() const;

  friend MeasureSpace gauss_legendre_rule(int order, double a, double b);
  friend MeasureSpace composite_rule(int order, std::vector<Interval> intervals, int panels,
                                     std::span<const double> breakpoints);
  friend MeasureSpace discrete_space(std::vector<double> points, std::vector<double> weights);

 private:
  MeasureSpace() = default;

  std::vector<double> nodes_;
  std::vector<double> weights_;
  MeasureKind kind_ = MeasureKind::Discrete;
  std::vector<Interval> intervals_;
  int order_ = 0;
  int panels_ = 0;
};

/// Gauss-Legendre rule with `order` nodes on [a, b], exact for polynomials of
/// degree <= 2*order - 1.
MeasureSpace gauss_legendre_rule(int order, double a, double b);

/// Panel-wise Gauss-Legendre rules over disjoint intervals. Each interval is cut
/// into `panels` equal panels, and additionally at every breakpoint lying
/// strictly inside it (so indicator regions can be represented exactly).
MeasureSpace composite_rule(int order, std::vector<Interval> intervals, int panels,
                            std::span<const double> breakpoints = {});

/// Finite atomic measure. Points are sorted on construction.
MeasureSpace discrete_space(std::vector<double> points, std::vector<double> weights);

}  // namespace chainkit
