#include <sstream>
#include <string>

#include "chainkit/cli.hpp"
#include "doctest.h"

using namespace chainkit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& cmd, const std::string& config, const CliOptions& opts = {}) {
  std::ostringstream out, err;
  const int code = run_command(cmd, config, opts, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

const char* kGauss2 = "m = 2\nN = 2\norder = 48\n[level 1]\nrho_set = 0.5 -1 1\n[level 2]\nrho_set = 0.5 -1 1\n"
                      "[coupling 1]\ntype = exponential\n";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("csv formatting") {
    CHECK(csv_number(1.0) == "1");
    CHECK(csv_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(csv_number(1.0 / 3)) == 1.0 / 3);
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  }

  TEST_CASE("verify-identity with rho = 0 prints 1,1,0") {
    const auto r = run("verify-identity", "m = 1\nN = 2\n");
    CHECK(r.code == 0);
    CHECK(r.out == "lhs,rhs,rel_diff\n1,1,0\n");
  }

  TEST_CASE("verify-identity on a perturbed Gaussian chain") {
    const auto r = run("verify-identity", kGauss2);
    CHECK(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "lhs,rhs,rel_diff");
  }

  TEST_CASE("verify-identity exits 3 on a violated tolerance") {
    CliOptions o;
    o.tolerance = -1.0;  // rel_diff >= 0 can never meet it
    const auto r = run("verify-identity", kGauss2, o);
    CHECK(r.code == 3);
    CHECK(r.err.find("identity violated") != std::string::npos);
    CHECK(lines(r.out).size() == 2);
  }

  TEST_CASE("gap with empty regions prints 1") {
    const auto r = run("gap", "m = 2\nN = 2\n[coupling 1]\ntype = exponential\n");
    CHECK(r.code == 0);
    CHECK(r.out == "gap\n1\n");
  }

  TEST_CASE("gap for one Gaussian particle on the right half-line") {
    const auto r = run("gap", "m = 1\nN = 1\n[level 1]\nregion = 0 inf\n");
    CHECK(r.code == 0);
    CHECK(std::abs(std::stod(lines(r.out)[1]) - 0.5) < 1e-12);
  }

  TEST_CASE("enumerate on two nodes") {
    const auto r = run("enumerate", "m = 1\nN = 1\n[level 1]\nspace = discrete 0:1,1:2\n");
    CHECK(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "level_1,mass");
    const double a = std::stod(ls[1].substr(ls[1].find(',') + 1));
    const double b = std::stod(ls[2].substr(ls[2].find(',') + 1));
    CHECK(std::abs(a + b - 1.0) < 1e-15);
    CHECK(std::abs(a - 1.0 / (1.0 + 2.0 * std::exp(-1.0))) < 1e-15);
  }

  TEST_CASE("correlator, janossy, counts and density run") {
    const std::string cfg =
        "m = 1\nN = 2\n[level 1]\nspace = discrete -1:1,0:1,1:1,2:1\nregion = 0 0\npoint = 0\ncount_region = -1 0\n";
    auto c = run("correlator", cfg);
    CHECK(c.code == 0);
    CHECK(lines(c.out)[0] == "correlator");
    auto j = run("janossy", cfg);
    CHECK(j.code == 0);
    CHECK(lines(j.out)[0] == "relative,absolute");
    auto n = run("counts", cfg);
    CHECK(n.code == 0);
    const auto nl = lines(n.out);
    CHECK(nl[0] == "n_1_1,probability");
    CHECK(nl.size() == 4);
    double sum = 0.0;
    for (std::size_t i = 1; i < nl.size(); ++i) sum += std::stod(nl[i].substr(nl[i].find(',') + 1));
    CHECK(std::abs(sum - 1.0) < 1e-10);
    auto d = run("density", cfg);
    CHECK(d.code == 0);
    CHECK(lines(d.out).size() == 5);
  }

  TEST_CASE("exit codes") {
    CHECK(run("gap", "m = 1\nN = 1\nnonsense = 1\n").code == 2);
    CHECK(run("gap", "m = 2\nN = 1\n").code == 2);
    CHECK(run("gap", "m = 1\nN = 1\n[level 1]\nspace = discrete 0:1,0:1\n").code == 2);
    CHECK(run("frobnicate", "m = 1\nN = 1\n").code == 2);
    // N larger than the space: no biorthogonal system exists
    CHECK(run("gap", "m = 1\nN = 3\n[level 1]\nspace = discrete 0:1,1:1\n").code == 1);
    // enumeration on a quadrature space is a computation failure
    CHECK(run("enumerate", "m = 1\nN = 1\norder = 8\n").code == 1);
  }

  TEST_CASE("sample output is byte-identical for the same seed") {
    const std::string cfg = "m = 1\nN = 2\norder = 32\nsteps = 20000\nseed = 12\n[level 1]\nregion = -1 1\n";
    const auto a = run("sample", cfg);
    const auto b = run("sample", cfg);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CliOptions o;
    o.seed = 13;
    CHECK(run("sample", cfg, o).out != a.out);
  }
}
