#include "chainkit/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg, line);
}

double to_double(const std::string& w, int line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(w.c_str(), &end);
  if (w.empty() || *end != '\0' || errno == ERANGE) fail(line, "expected a number, got '" + w + "'");
  return v;
}

long long to_int(const std::string& w, int line) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(w.c_str(), &end, 10);
  if (w.empty() || *end != '\0' || errno == ERANGE) fail(line, "expected an integer, got '" + w + "'");
  return v;
}

std::uint64_t to_u64(const std::string& w, int line) {
  if (!w.empty() && w[0] == '-') fail(line, "expected a non-negative integer, got '" + w + "'");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(w.c_str(), &end, 10);
  if (w.empty() || *end != '\0' || errno == ERANGE) fail(line, "expected a non-negative integer, got '" + w + "'");
  return v;
}

std::vector<double> numbers(const std::vector<std::string>& ws, std::size_t from, int line) {
  std::vector<double> out;
  for (std::size_t i = from; i < ws.size(); ++i) out.push_back(to_double(ws[i], line));
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Interval interval_of(double a, double b, int line) {
  if (!(a <= b)) fail(line, "interval endpoints must satisfy a <= b");
  return {a, b};
}

void parse_space(LevelConfig& lv, const std::string& value, int line) {
  const auto ws = words(value);
  if (ws.empty()) fail(line, "empty space");
  if (ws[0] == "real") {
    if (ws.size() != 1) fail(line, "'real' takes no parameters");
    lv.space = LevelConfig::Space::Real;
  } else if (ws[0] == "interval") {
    const auto v = numbers(ws, 1, line);
    if (v.empty() || v.size() % 2 != 0) fail(line, "'interval' needs pairs of endpoints");
    lv.space = LevelConfig::Space::Interval;
    for (std::size_t i = 0; i < v.size(); i += 2) lv.intervals.push_back(interval_of(v[i], v[i + 1], line));
  } else if (ws[0] == "discrete") {
    lv.space = LevelConfig::Space::Discrete;
    std::string rest;
    for (std::size_t i = 1; i < ws.size(); ++i) rest += ws[i];
    std::istringstream in(rest);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) fail(line, "discrete entries are x:w, got '" + item + "'");
      lv.discrete.emplace_back(to_double(item.substr(0, colon), line), to_double(item.substr(colon + 1), line));
    }
    if (lv.discrete.empty()) fail(line, "'discrete' needs at least one x:w entry");
  } else {
    fail(line, "unknown space '" + ws[0] + "'");
  }
}

void parse_potential(LevelConfig& lv, const std::string& value, int line) {
  const auto ws = words(value);
  if (ws.empty()) fail(line, "empty potential");
  const auto params = numbers(ws, 1, line);
  const std::string& form = ws[0];
  if (form == "quadratic") {
    if (params.size() > 1) fail(line, "'quadratic' takes at most one coefficient");
  } else if (form == "quartic") {
    if (params.size() != 2) fail(line, "'quartic' takes c2 c4");
  } else if (form == "custom-poly") {
    if (params.empty()) fail(line, "'custom-poly' needs coefficients c0..ck");
  } else if (form == "zero") {
    if (!params.empty()) fail(line, "'zero' takes no parameters");
  } else {
    fail(line, "unknown potential '" + form + "'");
  }
  lv.potential = form;
  lv.potential_params = params;
}

void parse_coupling(CouplingConfig& c, const std::string& value, int line) {
  const auto ws = words(value);
  if (ws.empty()) fail(line, "empty coupling type");
  const auto params = numbers(ws, 1, line);
  const std::string& t = ws[0];
  if (t == "exponential" || t == "cosh" || t == "sinh") {
    if (!params.empty()) fail(line, "'" + t + "' takes no parameters");
  } else if (t == "powerlaw" || t == "series-powerlaw") {
    if (params.size() != 2) fail(line, "'" + t + "' takes z a");
  } else if (t == "series") {
    // empty ratio list is the constant coupling 1
  } else {
    fail(line, "unknown coupling '" + t + "'");
  }
  c.type = t;
  c.params = params;
}

std::vector<double> pair_args(const std::string& value, std::size_t count, const std::string& key, int line) {
  const auto v = numbers(words(value), 0, line);
  if (v.size() != count) fail(line, "'" + key + "' takes " + std::to_string(count) + " numbers");
  return v;
}

}  // namespace

Config parse_config(const std::string& text) {
  Config c;
  std::map<int, std::pair<LevelConfig, int>> levels;        // index -> (section, header line)
  std::map<int, std::pair<CouplingConfig, int>> couplings;
  std::set<std::string> seen;  // scalar keys per section, prefixed by section name
  enum class Section { Global, Level, Coupling } section = Section::Global;
  int index = 0;
  std::string section_name = "global";

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      const auto ws = words(s.substr(1, s.size() - 2));
      if (ws.size() != 2 || (ws[0] != "level" && ws[0] != "coupling"))
        fail(line, "section header must be [level j] or [coupling j]");
      index = static_cast<int>(to_int(ws[1], line));
      if (index < 1) fail(line, "section index must be >= 1");
      section_name = ws[0] + " " + ws[1];
      if (ws[0] == "level") {
        section = Section::Level;
        if (levels.count(index)) fail(line, "duplicate section [" + section_name + "]");
        levels[index] = {LevelConfig{}, line};
      } else {
        section = Section::Coupling;
        if (couplings.count(index)) fail(line, "duplicate section [" + section_name + "]");
        couplings[index] = {CouplingConfig{}, line};
      }
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "missing key");

    static const std::set<std::string> repeatable = {"region", "rho_atom", "rho_set", "point", "count_region"};
    if (!repeatable.count(key)) {
      if (!seen.insert(section_name + "/" + key).second) fail(line, "duplicate key '" + key + "'");
    }

    if (section == Section::Global) {
      if (key == "m") c.m = static_cast<int>(to_int(value, line));
      else if (key == "N") c.particles = static_cast<int>(to_int(value, line));
      else if (key == "basis") {
        if (value == "all") c.basis = BasisFamily::AllMonomials;
        else if (value == "even") c.basis = BasisFamily::EvenMonomials;
        else if (value == "odd") c.basis = BasisFamily::OddMonomials;
        else fail(line, "basis must be all, even or odd");
      } else if (key == "order") c.order = static_cast<int>(to_int(value, line));
      else if (key == "panels") c.panels = static_cast<int>(to_int(value, line));
      else if (key == "truncation") c.truncation = to_double(value, line);
      else if (key == "series_terms") c.series_terms = static_cast<int>(to_int(value, line));
      else if (key == "tolerance") c.tolerance = to_double(value, line);
      else if (key == "seed") c.seed = to_u64(value, line);
      else if (key == "steps") c.steps = to_u64(value, line);
      else if (key == "threads") c.threads = static_cast<int>(to_int(value, line));
      else fail(line, "unknown key '" + key + "'");
    } else if (section == Section::Level) {
      LevelConfig& lv = levels[index].first;
      if (key == "space") parse_space(lv, value, line);
      else if (key == "potential") parse_potential(lv, value, line);
      else if (key == "region") {
        const auto v = pair_args(value, 2, key, line);
        lv.region.push_back(interval_of(v[0], v[1], line));
      } else if (key == "rho_atom") {
        const auto v = pair_args(value, 2, key, line);
        lv.rho_atoms.push_back({v[0], v[1]});
      } else if (key == "rho_set") {
        const auto v = pair_args(value, 3, key, line);
        lv.rho_sets.push_back({v[0], Region::of({interval_of(v[1], v[2], line)})});
      } else if (key == "point") {
        for (double x : numbers(words(value), 0, line)) lv.points.push_back(x);
      } else if (key == "count_region") {
        const auto v = pair_args(value, 2, key, line);
        lv.count_regions.push_back(interval_of(v[0], v[1], line));
      } else {
        fail(line, "unknown key '" + key + "' in [" + section_name + "]");
      }
    } else {
      if (key == "type") {
        parse_coupling(couplings[index].first, value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [" + section_name + "]");
      }
    }
  }

  if (c.m < 1) throw ConfigError("m must be >= 1");
  if (c.particles < 1) throw ConfigError("N must be >= 1");
  if (c.order < 1) throw ConfigError("order must be >= 1");
  if (c.panels < 1) throw ConfigError("panels must be >= 1");
  if (!(c.truncation > 0.0)) throw ConfigError("truncation must be positive");
  if (c.series_terms < 1) throw ConfigError("series_terms must be >= 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");

  for (const auto& [j, sec] : levels)
    if (j > c.m) fail(sec.second, "section [level " + std::to_string(j) + "] exceeds m");
  for (const auto& [j, sec] : couplings)
    if (j > c.m - 1) fail(sec.second, "section [coupling " + std::to_string(j) + "] exceeds m-1");

  for (int j = 1; j <= c.m; ++j) c.levels.push_back(levels.count(j) ? levels[j].first : LevelConfig{});
  for (int j = 1; j <= c.m - 1; ++j) {
    if (!couplings.count(j)) throw ConfigError("missing section [coupling " + std::to_string(j) + "]");
    c.couplings.push_back(couplings[j].first);
  }
  return c;
}

std::string emit_config(const Config& c) {
  std::ostringstream out;
  out << "m = " << c.m << "\n";
  out << "N = " << c.particles << "\n";
  out << "basis = " << basis_name(c.basis) << "\n";
  out << "order = " << c.order << "\n";
  out << "panels = " << c.panels << "\n";
  out << "truncation = " << num(c.truncation) << "\n";
  out << "series_terms = " << c.series_terms << "\n";
  out << "tolerance = " << num(c.tolerance) << "\n";
  out << "seed = " << c.seed << "\n";
  out << "steps = " << c.steps << "\n";
  out << "threads = " << c.threads << "\n";
  for (std::size_t j = 0; j < c.levels.size(); ++j) {
    const auto& lv = c.levels[j];
    out << "\n[level " << j + 1 << "]\n";
    switch (lv.space) {
      case LevelConfig::Space::Real:
        out << "space = real\n";
        break;
      case LevelConfig::Space::Interval:
        out << "space = interval";
        for (const auto& iv : lv.intervals) out << ' ' << num(iv.lo) << ' ' << num(iv.hi);
        out << "\n";
        break;
      case LevelConfig::Space::Discrete:
        out << "space = discrete ";
        for (std::size_t i = 0; i < lv.discrete.size(); ++i)
          out << (i ? "," : "") << num(lv.discrete[i].first) << ':' << num(lv.discrete[i].second);
        out << "\n";
        break;
    }
    out << "potential = " << lv.potential;
    for (double p : lv.potential_params) out << ' ' << num(p);
    out << "\n";
    for (const auto& iv : lv.region) out << "region = " << num(iv.lo) << ' ' << num(iv.hi) << "\n";
    for (const auto& a : lv.rho_atoms) out << "rho_atom = " << num(a.weight) << ' ' << num(a.location) << "\n";
    for (const auto& t : lv.rho_sets)
      for (const auto& iv : t.region.intervals)
        out << "rho_set = " << num(t.weight) << ' ' << num(iv.lo) << ' ' << num(iv.hi) << "\n";
    if (!lv.points.empty()) {
      out << "point =";
      for (double x : lv.points) out << ' ' << num(x);
      out << "\n";
    }
    for (const auto& iv : lv.count_regions) out << "count_region = " << num(iv.lo) << ' ' << num(iv.hi) << "\n";
  }
  for (std::size_t j = 0; j < c.couplings.size(); ++j) {
    out << "\n[coupling " << j + 1 << "]\n";
    out << "type = " << c.couplings[j].type;
    for (double p : c.couplings[j].params) out << ' ' << num(p);
    out << "\n";
  }
  return out.str();
}

ChainSpec build_chain(const Config& c) {
  ChainSpec spec;
  spec.levels = c.m;
  spec.particles = c.particles;
  spec.basis = c.basis;
  for (const auto& lv : c.levels) {
    if (lv.space == LevelConfig::Space::Discrete) {
      std::vector<double> xs;
      std::vector<double> ws;
      for (const auto& [x, w] : lv.discrete) {
        xs.push_back(x);
        ws.push_back(w);
      }
      spec.spaces.push_back(discrete_space(std::move(xs), std::move(ws)));
    } else {
      std::vector<Interval> ivs = lv.space == LevelConfig::Space::Real
                                      ? std::vector<Interval>{{-c.truncation, c.truncation}}
                                      : lv.intervals;
      std::vector<double> bps;
      auto add = [&](const Interval& iv) {
        bps.push_back(iv.lo);
        bps.push_back(iv.hi);
      };
      for (const auto& iv : lv.region) add(iv);
      for (const auto& t : lv.rho_sets)
        for (const auto& iv : t.region.intervals) add(iv);
      for (const auto& iv : lv.count_regions) add(iv);
      bps.erase(std::remove_if(bps.begin(), bps.end(), [](double x) { return !std::isfinite(x); }), bps.end());
      std::sort(bps.begin(), bps.end());
      bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
      spec.spaces.push_back(composite_rule(c.order, ivs, c.panels, bps));
    }
    const auto& p = lv.potential_params;
    if (lv.potential == "quadratic") spec.potentials.push_back(Potential::quadratic(p.empty() ? 1.0 : p[0]));
    else if (lv.potential == "quartic") spec.potentials.push_back(Potential::quartic(p.at(0), p.at(1)));
    else if (lv.potential == "custom-poly") spec.potentials.push_back(Potential::polynomial(p));
    else if (lv.potential == "zero") spec.potentials.push_back(Potential::zero());
    else throw ConfigError("unknown potential '" + lv.potential + "'");
  }
  for (const auto& cp : c.couplings) {
    const auto& p = cp.params;
    if (cp.type == "exponential") spec.couplings.push_back(Coupling::exponential());
    else if (cp.type == "cosh") spec.couplings.push_back(Coupling::cosh());
    else if (cp.type == "sinh") spec.couplings.push_back(Coupling::sinh());
    else if (cp.type == "powerlaw") spec.couplings.push_back(Coupling::power_law(p.at(0), p.at(1)));
    else if (cp.type == "series") spec.couplings.push_back(Coupling::series(p));
    else if (cp.type == "series-powerlaw")
      spec.couplings.push_back(Coupling::power_law_series(p.at(0), p.at(1), c.particles, c.series_terms));
    else throw ConfigError("unknown coupling '" + cp.type + "'");
  }
  return spec;
}

std::vector<Region> config_regions(const Config& c) {
  std::vector<Region> out;
  for (const auto& lv : c.levels) out.push_back(Region::of(lv.region));
  return out;
}

RhoSpec config_rho(const Config& c) {
  RhoSpec rho;
  for (const auto& lv : c.levels) rho.levels.push_back(LevelRho{lv.rho_atoms, lv.rho_sets});
  return rho;
}

LevelPoints config_points(const Config& c) {
  LevelPoints out;
  for (const auto& lv : c.levels) out.push_back(lv.points);
  return out;
}

std::vector<std::vector<Region>> config_count_regions(const Config& c) {
  std::vector<std::vector<Region>> out;
  for (const auto& lv : c.levels) {
    out.emplace_back();
    for (const auto& iv : lv.count_regions) out.back().push_back(Region::of({iv}));
  }
  return out;
}

}  // namespace chainkit
