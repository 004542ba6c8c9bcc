// Command-line front end. Every command is a thin wrapper over the library
// functions in ampec/commands.hpp.

#include "ampec/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

void add_run_options(CLI::App* cmd, ampec::RunConfig& cfg) {
  cmd->add_option("--eps", cfg.eps, "Relative optimality tolerance")
      ->envname("AMPEC_EPS")
      ->capture_default_str();
  cmd->add_option("--max-iter", cfg.max_iter, "Branch-and-bound iteration limit")
      ->envname("AMPEC_MAX_ITER")
      ->capture_default_str();
  cmd->add_option("--time-limit", cfg.time_limit, "Wall-clock limit in seconds")
      ->envname("AMPEC_TIME_LIMIT")
      ->capture_default_str();
  cmd->add_option("--theta", cfg.theta, "Decomposition margin, in (0,1)")
      ->envname("AMPEC_THETA")
      ->capture_default_str();
  cmd->add_option("--workers", cfg.workers, "Worker threads")
      ->envname("AMPEC_WORKERS")
      ->capture_default_str();
  const std::map<std::string, ampec::OutputFormat> formats{{"table", ampec::OutputFormat::Table},
                                                           {"records", ampec::OutputFormat::Records}};
  cmd->add_option("--format", cfg.format, "Output format: table or records")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->envname("AMPEC_FORMAT");
  cmd->add_option("--trace", cfg.trace_path, "Write per-iteration JSON lines to this file")
      ->envname("AMPEC_TRACE");
  cmd->add_flag("!--no-timing", cfg.timing, "Omit wall times so output is reproducible")
      ->envname("AMPEC_NO_TIMING");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global solver for programs with affine equilibrium constraints"};
  app.require_subcommand(1);
  ampec::RunConfig cfg;

  std::uint64_t gen_seed = 1;
  std::size_t gen_n = 0;
  std::size_t gen_m = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "Write a seeded random Nash-Cournot instance");
  gen->add_option("--seed", gen_seed, "Random seed")->envname("AMPEC_SEED")->capture_default_str();
  gen->add_option("-n,--firms", gen_n, "Number of firms (dimension of x)")->required();
  gen->add_option("-m,--materials", gen_m, "Number of materials (dimension of y)")->required();
  gen->add_option("-o,--out", gen_out, "Output instance file")->required();

  std::string solve_path;
  std::string report_path;
  CLI::App* solve = app.add_subcommand("solve", "Solve an instance file");
  solve->add_option("instance", solve_path, "Instance file")->required();
  solve->add_option("--report", report_path, "Write the structured report here");
  add_run_options(solve, cfg);

  std::string verify_path;
  double verify_step = 0.0;
  CLI::App* verify = app.add_subcommand("verify", "Compare branch and bound with the grid oracle");
  verify->add_option("instance", verify_path, "Instance file (m <= 3)")->required();
  verify->add_option("--step", verify_step,
                     "Grid spacing; default 0.002 for m = 1 and 0.02 otherwise");
  add_run_options(verify, cfg);

  std::vector<std::string> bench_rows;
  bool standard_rows = false;
  std::string records_path;
  CLI::App* bench = app.add_subcommand("bench", "Solve seeded random instances and print a table");
  bench->add_option("rows", bench_rows, "Rows as seed,n,m");
  bench->add_flag("--standard-rows", standard_rows,
                  "Use the rows (m,n) = (1,20) (2,20) (2,50) (3,50) (5,100) with --seed");
  bench->add_option("--seed", cfg.seed, "Seed for --standard-rows")->envname("AMPEC_SEED");
  bench->add_option("--records", records_path, "Write one JSON record per row to this file");
  add_run_options(bench, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ampec::kExitUsage;
  }

  if (gen->parsed()) return ampec::cmd_generate(gen_seed, gen_n, gen_m, gen_out, std::cout, std::cerr);
  if (solve->parsed()) return ampec::cmd_solve(solve_path, cfg, report_path, std::cout, std::cerr);
  if (verify->parsed()) return ampec::cmd_verify(verify_path, verify_step, cfg, std::cout, std::cerr);

  std::vector<ampec::BenchSpec> rows;
  if (standard_rows) {
    for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 20}, {2, 20}, {2, 50}, {3, 50}, {5, 100}}) {
      rows.push_back({cfg.seed, n, m});
    }
  }
  for (const std::string& text : bench_rows) {
    const auto spec = ampec::parse_bench_spec(text);
    if (!spec) {
      std::cerr << "error: bad row '" << text << "', expected seed,n,m\n";
      return ampec::kExitUsage;
    }
    rows.push_back(*spec);
  }
  return ampec::cmd_bench(rows, cfg, records_path, std::cout, std::cerr);
}
