#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chainkit/linalg.hpp"
#include "chainkit/measure.hpp"

namespace chainkit {

enum class Parity { Any, Even };

/// Level potential V_j. Each level carries the weight e^{-V_j} in total,
/// split as e^{-V_j/2} on either side of the level.
class Potential {
 public:
  /// c x^2 (c = 1 is the Gaussian weight e^{-x^2}).
  static Potential quadratic(double c = 1.0);
  static Potential quartic(double c2, double c4);
  /// c0 + c1 x + ... + ck x^k.
  static Potential polynomial(std::vector<double> coefficients);
  static Potential zero();
  /// Arbitrary evaluator. Parity::Even is checked on a symmetric probe grid
  /// (tolerance 1e-12); throws ChainError if the check fails.
  static Potential custom(std::function<double(double)> v, Parity parity, std::string label = "custom");

  double operator()(double x) const { return eval_(x); }
  Parity parity() const { return parity_; }

  /// Config-level description: form name and its parameters.
  const std::string& form() const { return form_; }
  const std::vector<double>& parameters() const { return parameters_; }

 private:
  Potential(std::function<double(double)> v, Parity p, std::string form, std::vector<double> params)
      : eval_(std::move(v)), parity_(p), form_(std::move(form)), parameters_(std::move(params)) {}

  std::function<double(double)> eval_;
  Parity parity_;
  std::string form_;
  std::vector<double> parameters_;
};

struct ExponentialCoupling {
  bool operator==(const ExponentialCoupling&) const = default;
};
struct CoshCoupling {
  bool operator==(const CoshCoupling&) const = default;
};
struct SinhCoupling {
  bool operator==(const SinhCoupling&) const = default;
};
/// (1 - z t)^{N - a - 1} with t = x y. The exponent's N is bound from the
/// chain's particle count by validate_chain.
struct PowerLawCoupling {
  double z = 0.0;
  double a = 0.0;
  std::optional<int> particles;
  bool operator==(const PowerLawCoupling&) const = default;
};
/// 1 + sum_k r(1)...r(k) t^k. `truncated` marks a finite section of an infinite
/// series; validation then checks the neglected tail.
struct SeriesCoupling {
  std::vector<double> ratios;
  bool truncated = false;
  bool operator==(const SeriesCoupling&) const = default;
};

using CouplingVariant =
    std::variant<ExponentialCoupling, CoshCoupling, SinhCoupling, PowerLawCoupling, SeriesCoupling>;

/// Nearest-neighbour coupling w_{j+1,j}(x, y) = f(x y).
class Coupling {
 public:
  Coupling(CouplingVariant v) : variant_(std::move(v)) {}  // NOLINT: implicit by intent

  static Coupling exponential() { return {ExponentialCoupling{}}; }
  static Coupling cosh() { return {CoshCoupling{}}; }
  static Coupling sinh() { return {SinhCoupling{}}; }
  static Coupling power_law(double z, double a, std::optional<int> particles = std::nullopt) {
    return {PowerLawCoupling{z, a, particles}};
  }
  static Coupling series(std::vector<double> ratios) { return {SeriesCoupling{std::move(ratios), false}}; }
  /// Taylor section of the power law: r(i) = z (a - N + i) / i, i = 1..terms.
  static Coupling power_law_series(double z, double a, int particles, int terms);

  const CouplingVariant& variant() const { return variant_; }
  std::string name() const;

  /// f(t) at the product argument t = x y.
  double at_product(double t) const;

  /// log|f(t)| and sign of f(t); sign 0 means f(t) = 0.
  struct LogValue {
    double log_abs;
    int sign;
  };
  LogValue log_at_product(double t) const;

  bool operator==(const Coupling&) const = default;

 private:
  CouplingVariant variant_;
};

/// w(x, y) for the given variant. Throws CouplingError past a power-law pole
/// or on series overflow.
double eval_coupling(const Coupling& c, double x, double y);

enum class BasisFamily { AllMonomials, EvenMonomials, OddMonomials };

/// Monomial degree of the basis function with zero-based index k:
/// k, 2k and 2k+1 for the three families.
int basis_degree(BasisFamily family, int k);
std::string basis_name(BasisFamily family);

struct ChainSpec {
  int levels = 1;
  int particles = 1;
  std::vector<MeasureSpace> spaces;
  std::vector<Potential> potentials;
  std::vector<Coupling> couplings;
  BasisFamily basis = BasisFamily::AllMonomials;
  /// Series couplings flagged `truncated` must have neglected tail below this.
  double series_tail_tolerance = 1e-14;
};

struct Violation {
  int level;  // 1-based level or coupling index; 0 for chain-wide issues
  std::string message;
};

struct ChainValidation {
  ChainSpec spec;  // normalized copy: power-law exponents bound to N
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string report() const;
};

/// Checks every ChainSpec invariant and collects all violations.
ChainValidation validate_chain(ChainSpec spec);

/// validate_chain, throwing ChainError with the full report on failure.
ChainSpec require_valid(ChainSpec spec);

/// Combined weight e^{-V_{j+1}(x)/2} w_{j+1,j}(x, y) e^{-V_j(y)/2} between
/// zero-based levels j+1 (x) and j (y), evaluated in log space.
double coupling_weight(const ChainSpec& spec, int lower_level, double x_upper, double y_lower);

/// Matrix of coupling_weight over the level grids, shape n_{j+1} x n_j.
Matrix transfer_matrix(const ChainSpec& spec, int lower_level);

/// e^{-V_j(x)/2}.
double half_weight(const ChainSpec& spec, int level, double x);

}  // namespace chainkit
