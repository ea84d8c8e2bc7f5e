#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "chainkit/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"chainkit: multilevel determinantal ensembles"};
  std::string command;
  std::string config_path;
  std::string out_path;
  chainkit::CliOptions opts;
  std::uint64_t seed = 0;
  int threads = 1;
  double tol = 0.0;
  int order = 0;
  double truncation = 0.0;
  std::uint64_t steps = 0;

  app.add_option("command", command,
                 "verify-identity | gap | correlator | janossy | counts | density | enumerate | sample")
      ->required();
  app.add_option("--config", config_path, "config file")->required();
  app.add_option("--out", out_path, "write the CSV result here instead of stdout");
  auto* seed_opt = app.add_option("--seed", seed, "sampler seed");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads (1 = reference mode)");
  auto* tol_opt = app.add_option("--tol", tol, "identity tolerance");
  auto* order_opt = app.add_option("--quad-order", order, "Gauss-Legendre order per panel");
  auto* trunc_opt = app.add_option("--truncation", truncation, "half-width L for `real` spaces");
  auto* steps_opt = app.add_option("--steps", steps, "sampler steps");
  app.add_option("--dump-blocks", opts.dump_blocks, "write the Kcheck blocks as CSV");
  app.add_option("--samples", opts.samples, "write the sampler stream as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : chainkit::kExitConfig;
  }
  if (*seed_opt) opts.seed = seed;
  if (*threads_opt) opts.threads = threads;
  if (*tol_opt) opts.tolerance = tol;
  if (*order_opt) opts.quad_order = order;
  if (*trunc_opt) opts.truncation = truncation;
  if (*steps_opt) opts.steps = steps;

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "config error: cannot read " << config_path << '\n';
    return chainkit::kExitConfig;
  }
  std::stringstream text;
  text << in.rdbuf();

  if (out_path.empty()) return chainkit::run_command(command, text.str(), opts, std::cout, std::cerr);
  std::ostringstream result;
  const int code = chainkit::run_command(command, text.str(), opts, result, std::cerr);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << '\n';
    return chainkit::kExitFailure;
  }
  out << result.str();
  return code;
}
