#include "chainkit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chainkit/counting.hpp"
#include "chainkit/error.hpp"
#include "chainkit/kernel.hpp"
#include "chainkit/oracle.hpp"
#include "chainkit/statistics.hpp"

namespace chainkit {

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

void apply_overrides(Config& c, const CliOptions& o) {
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  if (o.tolerance) c.tolerance = *o.tolerance;
  if (o.quad_order) c.order = *o.quad_order;
  if (o.truncation) c.truncation = *o.truncation;
  if (o.steps) c.steps = *o.steps;
}

namespace {

bool rho_is_zero(const RhoSpec& rho) {
  for (const auto& lv : rho.levels) {
    for (const auto& a : lv.atoms)
      if (a.weight != 0.0) return false;
    for (const auto& t : lv.sets)
      if (t.weight != 0.0 && !t.region.empty()) return false;
  }
  return true;
}

void dump_blocks(const Ensemble& e, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ArgumentError("cannot open " + path);
  f << "i,j,row,col,kcheck\n";
  const auto& k = e.kernel;
  for (int i = 0; i < k.levels(); ++i)
    for (int j = 0; j < k.levels(); ++j) {
      const Matrix& b = k.kcheck(i, j);
      for (Eigen::Index r = 0; r < b.rows(); ++r)
        for (Eigen::Index s = 0; s < b.cols(); ++s)
          f << i + 1 << ',' << j + 1 << ',' << r << ',' << s << ',' << csv_number(b(r, s)) << '\n';
    }
}

std::string join_coordinates(const ChainSpec& spec, int level, const std::vector<std::size_t>& idx) {
  std::string s;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (a) s += ' ';
    s += csv_number(spec.spaces[level].nodes()[idx[a]]);
  }
  return s;
}

int run(const std::string& cmd, const Config& cfg, const Ensemble& e, const CliOptions& opts, std::ostream& out,
        std::ostream& err) {
  const int m = cfg.m;
  if (cmd == "verify-identity") {
    const RhoSpec rho = config_rho(cfg);
    const IdentityReport r = verify_identity(e, rho);
    const bool ok = r.rel_diff <= cfg.tolerance;
    out << "lhs,rhs,rel_diff\n";
    if (rho_is_zero(rho) && ok) {
      // both sides are the normalization, 1
      out << "1,1,0\n";
    } else {
      out << csv_number(r.lhs) << ',' << csv_number(r.rhs) << ',' << csv_number(r.rel_diff) << '\n';
    }
    if (!ok) {
      err << "identity violated: rel_diff " << csv_number(r.rel_diff) << " > tolerance " << csv_number(cfg.tolerance)
          << '\n';
      return kExitIdentity;
    }
    return kExitOk;
  }
  if (cmd == "gap") {
    out << "gap\n" << csv_number(gap_probability(e, config_regions(cfg))) << '\n';
    return kExitOk;
  }
  if (cmd == "correlator") {
    out << "correlator\n" << csv_number(correlator(e, config_points(cfg))) << '\n';
    return kExitOk;
  }
  if (cmd == "janossy") {
    const auto d = janossy_density(e, config_regions(cfg), config_points(cfg));
    out << "relative,absolute\n" << csv_number(d.relative) << ',' << csv_number(d.absolute) << '\n';
    return kExitOk;
  }
  if (cmd == "counts") {
    const auto regions = config_count_regions(cfg);
    const CountTable table = CountingGenerator(e, regions).extract();
    bool first = true;
    for (int j = 0; j < m; ++j)
      for (std::size_t l = 0; l < regions[j].size(); ++l) {
        out << (first ? "" : ",") << "n_" << j + 1 << '_' << l + 1;
        first = false;
      }
    out << (first ? "" : ",") << "probability\n";
    const auto vectors = table.count_vectors();
    for (std::size_t r = 0; r < vectors.size(); ++r) {
      for (int k : vectors[r]) out << k << ',';
      out << csv_number(table.values()[r]) << '\n';
    }
    return kExitOk;
  }
  if (cmd == "density") {
    out << "level,x,intensity\n";
    for (int j = 0; j < m; ++j) {
      const auto xs = e.spec.spaces[j].nodes();
      const Matrix& kjj = e.kernel.k(j, j);
      for (std::size_t i = 0; i < xs.size(); ++i)
        out << j + 1 << ',' << csv_number(xs[i]) << ',' << csv_number(kjj(i, i)) << '\n';
    }
    return kExitOk;
  }
  if (cmd == "enumerate") {
    const EnumerationTable t = enumerate(e.spec, e.bio);
    for (const auto& w : t.warnings) err << "warning: " << w << '\n';
    for (int j = 0; j < m; ++j) out << "level_" << j + 1 << ',';
    out << "mass\n";
    for (const auto& c : t.configurations) {
      for (int j = 0; j < m; ++j) out << csv_field(join_coordinates(e.spec, j, c.nodes[j])) << ',';
      out << csv_number(c.mass) << '\n';
    }
    return kExitOk;
  }
  if (cmd == "sample") {
    McmcOptions mo;
    mo.steps = cfg.steps;
    mo.seed = cfg.seed;
    const auto regions = config_regions(cfg);
    bool any_region = false;
    for (const auto& r : regions) any_region = any_region || !r.empty();
    std::vector<Observable> obs;
    std::vector<std::string> names;
    if (any_region) {
      names.push_back("gap");
      obs.push_back([regions](const LevelPoints& x) {
        for (std::size_t j = 0; j < x.size(); ++j)
          for (double v : x[j])
            if (regions[j].contains(v)) return 0.0;
        return 1.0;
      });
    }
    for (int j = 0; j < m; ++j) {
      names.push_back("mean_x_level_" + std::to_string(j + 1));
      obs.push_back([j](const LevelPoints& x) {
        double s = 0.0;
        for (double v : x[j]) s += v;
        return s / static_cast<double>(x[j].size());
      });
    }
    std::ofstream stream;
    SampleSink sink;
    if (!opts.samples.empty()) {
      stream.open(opts.samples);
      if (!stream) throw ArgumentError("cannot open " + opts.samples);
      stream << "step,level,particle,coordinate\n";
      sink = [&stream](std::uint64_t step, const LevelPoints& x) {
        for (std::size_t j = 0; j < x.size(); ++j)
          for (std::size_t a = 0; a < x[j].size(); ++a)
            stream << step << ',' << j + 1 << ',' << a + 1 << ',' << csv_number(x[j][a]) << '\n';
      };
    }
    const McmcResult r = mcmc_sample(e.spec, e.bio, mo, obs, sink);
    out << "quantity,value,standard_error\n";
    out << "acceptance_rate," << csv_number(r.acceptance_rate) << ",\n";
    out << "negative_sign_fraction," << csv_number(r.negative_sign_fraction) << ",\n";
    out << "step_size," << csv_number(r.step_size) << ",\n";
    for (std::size_t o = 0; o < names.size(); ++o)
      out << names[o] << ',' << csv_number(r.estimates[o].mean) << ',' << csv_number(r.estimates[o].standard_error)
          << '\n';
    return kExitOk;
  }
  err << "unknown command '" << cmd << "'\n";
  return kExitConfig;
}

}  // namespace

int run_command(const std::string& cmd, const std::string& config_text, const CliOptions& opts, std::ostream& out,
                std::ostream& err) {
  static const char* const kCommands[] = {"verify-identity", "gap",     "correlator", "janossy",
                                          "counts",          "density", "enumerate",  "sample"};
  bool known = false;
  for (const char* c : kCommands) known = known || cmd == c;
  if (!known) {
    err << "unknown command '" << cmd << "'\n";
    return kExitConfig;
  }

  Config cfg;
  Ensemble e;
  try {
    cfg = parse_config(config_text);
    apply_overrides(cfg, opts);
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    if (cfg.order < 1) throw ConfigError("quadrature order must be >= 1");
    e = build_ensemble(build_chain(cfg));
    validate_rho(e.spec, config_rho(cfg));
  } catch (const DegenerateEnsembleError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitFailure;
  } catch (const NumericalError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitFailure;
  } catch (const Error& ex) {
    err << "config error: " << ex.what() << '\n';
    return kExitConfig;
  }
  for (const auto& w : e.bio.warnings) err << "warning: " << w << '\n';

  // Buffer so a failing command emits no partial table.
  std::ostringstream buffer;
  try {
    if (!opts.dump_blocks.empty()) dump_blocks(e, opts.dump_blocks);
    const int code = run(cmd, cfg, e, opts, buffer, err);
    out << buffer.str();
    return code;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace chainkit
