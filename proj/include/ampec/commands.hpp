#pragma once

#include "ampec/bnb.hpp"
#include "ampec/report_io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ampec {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitSolved = 0,
  kExitIncomplete = 2,
  kExitTimeExceeded = 3,
  kExitIterExceeded = 4,
  kExitUsage = 64,
  kExitDataError = 65,
  kExitIoError = 74,
};

int exit_code(SolveStatus status);

enum class OutputFormat { Table, Records };

struct RunConfig {
  double eps = 1e-3;
  long max_iter = 10000;
  double time_limit = 36000.0;
  double theta = 0.9;
  std::uint64_t seed = 1;
  int workers = 1;
  OutputFormat format = OutputFormat::Table;
  std::string trace_path;  // empty: no trace
  bool timing = true;      // false: omit wall times so outputs are reproducible
};

/// Throws std::invalid_argument when an invariant (eps >= 0, time_limit > 0,
/// workers >= 1, max_iter >= 0, theta in (0,1)) fails.
void validate_run_config(const RunConfig& cfg);
BnbConfig make_bnb_config(const RunConfig& cfg);

/// Writes generate_random(seed, n, m) to out_path and prints its digest.
int cmd_generate(std::uint64_t seed, std::size_t n, std::size_t m, const std::string& out_path,
                 std::ostream& out, std::ostream& err);

/// Solves one instance file; prints a table row (or a record) and, when
/// report_path is nonempty, writes the structured report.
int cmd_solve(const std::string& instance_path, const RunConfig& cfg, const std::string& report_path,
              std::ostream& out, std::ostream& err);

struct VerifyResult {
  double bnb_value = 0.0;
  double oracle_value = 0.0;
  double difference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  SolveReport report;
};

/// B&B against the grid oracle on an in-memory instance. `step` <= 0 picks
/// the default 0.002 for m = 1 and 0.02 otherwise.
VerifyResult verify_instance(const Instance& inst, const RunConfig& cfg, double step);

/// Prints both values, the difference and PASS/FAIL. Exit code 0 on PASS,
/// 1 on FAIL, 64 when m is too large for the oracle.
int cmd_verify(const std::string& instance_path, double step, const RunConfig& cfg, std::ostream& out,
               std::ostream& err);

struct BenchSpec {
  std::uint64_t seed = 1;
  std::size_t n = 1;
  std::size_t m = 1;
};

/// Parses "seed,n,m".
std::optional<BenchSpec> parse_bench_spec(const std::string& text);

/// Solves generate_random(seed, n, m) for every row, up to cfg.workers rows
/// at a time, and reports in input order. Failures are recorded in the row.
std::vector<TableRow> run_bench(const std::vector<BenchSpec>& rows, const RunConfig& cfg);

/// run_bench plus the table (or records) on `out` and, when records_path is
/// nonempty, one JSON record per row in that file. Exit code 0 when every
/// row is solved, else the code of the first row that is not.
int cmd_bench(const std::vector<BenchSpec>& rows, const RunConfig& cfg, const std::string& records_path,
              std::ostream& out, std::ostream& err);

}  // namespace ampec
