#include "chainkit/chain_model.hpp"

#include <cmath>
#include <sstream>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double power_law_exponent(const PowerLawCoupling& p) {
  if (!p.particles) throw CouplingError("power-law coupling used before its exponent was bound to N");
  return *p.particles - p.a - 1.0;
}

double series_value(const SeriesCoupling& s, double t) {
  double sum = 1.0;
  double term = 1.0;
  for (double r : s.ratios) {
    term *= r * t;
    sum += term;
  }
  if (!std::isfinite(sum)) throw CouplingError("series coupling overflow");
  return sum;
}

}  // namespace

// --- Potential ---------------------------------------------------------------

Potential Potential::quadratic(double c) {
  return Potential([c](double x) { return c * x * x; }, Parity::Even, "quadratic", {c});
}

Potential Potential::quartic(double c2, double c4) {
  return Potential([c2, c4](double x) {
    const double x2 = x * x;
    return x2 * (c2 + c4 * x2);
  }, Parity::Even, "quartic", {c2, c4});
}

Potential Potential::polynomial(std::vector<double> coefficients) {
  bool even = true;
  for (std::size_t k = 1; k < coefficients.size(); k += 2) even = even && coefficients[k] == 0.0;
  auto c = coefficients;
  return Potential([c](double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }, even ? Parity::Even : Parity::Any, "custom-poly", std::move(coefficients));
}

Potential Potential::zero() {
  return Potential([](double) { return 0.0; }, Parity::Even, "zero", {});
}

Potential Potential::custom(std::function<double(double)> v, Parity parity, std::string label) {
  if (parity == Parity::Even) {
    for (int i = 1; i <= 64; ++i) {
      const double x = 0.125 * i;
      const double l = v(x);
      const double r = v(-x);
      if (std::abs(l - r) > 1e-12 * std::max(1.0, std::abs(l)))
        throw ChainError("potential '" + label + "' declared even but V(" + std::to_string(x) +
                         ") != V(-" + std::to_string(x) + ")");
    }
  }
  return Potential(std::move(v), parity, std::move(label), {});
}

// --- Coupling ----------------------------------------------------------------

Coupling Coupling::power_law_series(double z, double a, int particles, int terms) {
  SeriesCoupling s;
  s.truncated = true;
  for (int i = 1; i <= terms; ++i) s.ratios.push_back(z * (a - particles + i) / i);
  return {std::move(s)};
}

std::string Coupling::name() const {
  return std::visit(overloaded{
                        [](const ExponentialCoupling&) { return std::string("exponential"); },
                        [](const CoshCoupling&) { return std::string("cosh"); },
                        [](const SinhCoupling&) { return std::string("sinh"); },
                        [](const PowerLawCoupling&) { return std::string("powerlaw"); },
                        [](const SeriesCoupling&) { return std::string("series"); },
                    },
                    variant_);
}

double Coupling::at_product(double t) const {
  return std::visit(overloaded{
                        [&](const ExponentialCoupling&) { return std::exp(t); },
                        [&](const CoshCoupling&) { return 2.0 * std::cosh(t); },
                        [&](const SinhCoupling&) { return 2.0 * std::sinh(t); },
                        [&](const PowerLawCoupling& p) {
                          const double p_exp = power_law_exponent(p);
                          if (!(std::abs(p.z * t) < 1.0))
                            throw CouplingError("power-law coupling pole crossed: |z x y| >= 1");
                          return std::pow(1.0 - p.z * t, p_exp);
                        },
                        [&](const SeriesCoupling& s) { return series_value(s, t); },
                    },
                    variant_);
}

Coupling::LogValue Coupling::log_at_product(double t) const {
  return std::visit(overloaded{
                        [&](const ExponentialCoupling&) { return LogValue{t, 1}; },
                        [&](const CoshCoupling&) {
                          const double a = std::abs(t);
                          return LogValue{a + std::log1p(std::exp(-2.0 * a)), 1};
                        },
                        [&](const SinhCoupling&) {
                          if (t == 0.0) return LogValue{0.0, 0};
                          const double a = std::abs(t);
                          return LogValue{a + std::log(-std::expm1(-2.0 * a)), t > 0.0 ? 1 : -1};
                        },
                        [&](const PowerLawCoupling& p) {
                          const double p_exp = power_law_exponent(p);
                          if (!(std::abs(p.z * t) < 1.0))
                            throw CouplingError("power-law coupling pole crossed: |z x y| >= 1");
                          return LogValue{p_exp * std::log1p(-p.z * t), 1};
                        },
                        [&](const SeriesCoupling& s) {
                          const double v = series_value(s, t);
                          if (v == 0.0) return LogValue{0.0, 0};
                          return LogValue{std::log(std::abs(v)), v > 0.0 ? 1 : -1};
                        },
                    },
                    variant_);
}

double eval_coupling(const Coupling& c, double x, double y) { return c.at_product(x * y); }

// --- Basis -------------------------------------------------------------------

int basis_degree(BasisFamily family, int k) {
  switch (family) {
    case BasisFamily::AllMonomials: return k;
    case BasisFamily::EvenMonomials: return 2 * k;
    case BasisFamily::OddMonomials: return 2 * k + 1;
  }
  return k;
}

std::string basis_name(BasisFamily family) {
  switch (family) {
    case BasisFamily::AllMonomials: return "all";
    case BasisFamily::EvenMonomials: return "even";
    case BasisFamily::OddMonomials: return "odd";
  }
  return "all";
}

// --- Validation --------------------------------------------------------------

std::string ChainValidation::report() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    if (v.level > 0) os << "[" << v.level << "] ";
    os << v.message << "\n";
  }
  return os.str();
}

ChainValidation validate_chain(ChainSpec spec) {
  ChainValidation out;
  auto fail = [&](int level, std::string msg) { out.violations.push_back({level, std::move(msg)}); };

  if (spec.levels < 1) fail(0, "level count m must be >= 1");
  if (spec.particles < 1) fail(0, "particle count N must be >= 1");
  const auto m = static_cast<std::size_t>(std::max(spec.levels, 0));
  if (spec.spaces.size() != m) fail(0, "spaces length must be m");
  if (spec.potentials.size() != m) fail(0, "potentials length must be m");
  if (m >= 1 && spec.couplings.size() != m - 1) fail(0, "couplings length must be m-1");
  if (!out.violations.empty()) {
    out.spec = std::move(spec);
    return out;
  }

  for (std::size_t j = 0; j < m; ++j) {
    const int lvl = static_cast<int>(j) + 1;
    if (spec.basis != BasisFamily::AllMonomials) {
      if (spec.potentials[j].parity() != Parity::Even)
        fail(lvl, "parity: " + basis_name(spec.basis) + " basis requires an even potential");
      if (!spec.spaces[j].symmetric())
        fail(lvl, "parity: " + basis_name(spec.basis) + " basis requires a space symmetric about 0");
    }
    for (double x : spec.spaces[j].nodes()) {
      const double w = std::exp(-0.5 * spec.potentials[j](x));
      if (!std::isfinite(w)) {
        fail(lvl, "weight e^{-V/2} not finite at node " + std::to_string(x));
        break;
      }
    }
  }

  for (std::size_t j = 0; j + 1 < m; ++j) {
    const int idx = static_cast<int>(j) + 1;
    const double tmax = spec.spaces[j].max_abs_node() * spec.spaces[j + 1].max_abs_node();
    auto variant = spec.couplings[j].variant();
    if (auto* p = std::get_if<PowerLawCoupling>(&variant)) {
      if (p->particles && *p->particles != spec.particles)
        fail(idx, "power-law exponent N=" + std::to_string(*p->particles) + " differs from chain N");
      p->particles = spec.particles;
      if (!(std::abs(p->z) * tmax < 1.0)) fail(idx, "power-law pole: |z x y| >= 1 on the level grids");
      spec.couplings[j] = Coupling(*p);
    } else if (const auto* s = std::get_if<SeriesCoupling>(&variant)) {
      if (s->truncated && !s->ratios.empty()) {
        double term = 1.0;
        for (double r : s->ratios) term *= std::abs(r) * tmax;
        double sum = 1.0;
        try {
          sum = std::abs(s->ratios.empty() ? 1.0 : Coupling(*s).at_product(tmax));
        } catch (const CouplingError&) {
          sum = 1.0;
        }
        if (!(term <= spec.series_tail_tolerance * std::max(1.0, sum)))
          fail(idx, "series coupling tail exceeds tolerance; increase the number of terms");
      }
    }
  }

  out.spec = std::move(spec);
  return out;
}

ChainSpec require_valid(ChainSpec spec) {
  auto v = validate_chain(std::move(spec));
  if (!v.ok()) throw ChainError("invalid chain definition:\n" + v.report());
  return std::move(v.spec);
}

// --- Weights -----------------------------------------------------------------

double half_weight(const ChainSpec& spec, int level, double x) {
  return std::exp(-0.5 * spec.potentials[level](x));
}

double coupling_weight(const ChainSpec& spec, int lower_level, double x_upper, double y_lower) {
  const auto lv = spec.couplings[lower_level].log_at_product(x_upper * y_lower);
  if (lv.sign == 0) return 0.0;
  const double expo =
      lv.log_abs - 0.5 * (spec.potentials[lower_level + 1](x_upper) + spec.potentials[lower_level](y_lower));
  return lv.sign * std::exp(expo);
}

Matrix transfer_matrix(const ChainSpec& spec, int lower_level) {
  const auto xs = spec.spaces[lower_level + 1].nodes();
  const auto ys = spec.spaces[lower_level].nodes();
  const auto& upper_v = spec.potentials[lower_level + 1];
  const auto& lower_v = spec.potentials[lower_level];
  const auto& coupling = spec.couplings[lower_level];
  std::vector<double> vy(ys.size());
  for (std::size_t p = 0; p < ys.size(); ++p) vy[p] = lower_v(ys[p]);
  Matrix w(xs.size(), ys.size());
  for (std::size_t q = 0; q < xs.size(); ++q) {
    const double vx = upper_v(xs[q]);
    for (std::size_t p = 0; p < ys.size(); ++p) {
      const auto lv = coupling.log_at_product(xs[q] * ys[p]);
      w(q, p) = lv.sign == 0 ? 0.0 : lv.sign * std::exp(lv.log_abs - 0.5 * (vx + vy[p]));
    }
  }
  if (!w.allFinite()) throw NumericalError("transfer matrix overflow between levels " +
                                           std::to_string(lower_level + 1) + " and " +
                                           std::to_string(lower_level + 2));
  return w;
}

}  // namespace chainkit
