#include "ampec/commands.hpp"

#include "ampec/instance_io.hpp"
#include "ampec/oracle.hpp"
#include "ampec/report_io.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ampec {

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved: return kExitSolved;
    case SolveStatus::Incomplete: return kExitIncomplete;
    case SolveStatus::TimeExceeded: return kExitTimeExceeded;
    case SolveStatus::IterExceeded: return kExitIterExceeded;
  }
  return kExitDataError;
}

void validate_run_config(const RunConfig& cfg) {
  if (!(cfg.eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
  if (!(cfg.time_limit > 0.0)) throw std::invalid_argument("time limit must be > 0");
  if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (cfg.max_iter < 0) throw std::invalid_argument("max-iter must be >= 0");
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
}

BnbConfig make_bnb_config(const RunConfig& cfg) {
  BnbConfig b;
  b.eps = cfg.eps;
  b.max_iter = cfg.max_iter;
  b.time_limit = cfg.time_limit;
  b.theta = cfg.theta;
  b.workers = cfg.workers;
  return b;
}

namespace {

// Loads an instance, turning failures into a diagnostic and an exit code.
std::optional<Instance> load_or_report(const std::string& path, std::ostream& err, int& code) {
  try {
    return load_instance(path);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    code = kExitDataError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << path << ": " << e.what() << '\n';
    code = kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kExitIoError;
  }
  return std::nullopt;
}

SolveReport solve_with_trace(const Instance& inst, const RunConfig& cfg) {
  BnbConfig b = make_bnb_config(cfg);
  std::ofstream trace;
  if (!cfg.trace_path.empty()) {
    trace.open(cfg.trace_path, std::ios::binary);
    if (!trace) throw std::runtime_error("cannot write trace file: " + cfg.trace_path);
    b.trace = &trace;
  }
  return solve_global(inst, b);
}

}  // namespace

int cmd_generate(std::uint64_t seed, std::size_t n, std::size_t m, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  if (n < 1 || m < 1) {
    err << "error: n and m must be positive\n";
    return kExitUsage;
  }
  const Instance inst = generate_random(seed, n, m);
  try {
    save_instance(inst, out_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  }
  out << instance_digest(inst) << "  " << out_path << '\n';
  return 0;
}

int cmd_solve(const std::string& instance_path, const RunConfig& cfg, const std::string& report_path,
              std::ostream& out, std::ostream& err) {
  try {
    validate_run_config(cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  int code = 0;
  const std::optional<Instance> inst = load_or_report(instance_path, err, code);
  if (!inst) return code;

  SolveReport report;
  try {
    report = solve_with_trace(*inst, cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  }
  const TableRow row = table_row(report, inst->m, inst->n, cfg.seed);
  if (cfg.format == OutputFormat::Table) {
    out << format_table_header() << '\n' << format_table_row(row, cfg.timing) << '\n';
  } else {
    out << format_record(row, cfg.timing) << '\n';
  }
  if (!report_path.empty()) {
    try {
      save_report(report_path, report, inst->m, inst->n, cfg.timing);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitIoError;
    }
  }
  return exit_code(report.status);
}

VerifyResult verify_instance(const Instance& inst, const RunConfig& cfg, double step) {
  if (!(step > 0.0)) step = inst.m == 1 ? 0.002 : 0.02;
  VerifyResult v;
  v.report = solve_global(inst, make_bnb_config(cfg));
  const OracleResult oracle = grid_solve(inst, step, true);
  v.bnb_value = v.report.cbval;
  v.oracle_value = oracle.value;
  v.difference = v.bnb_value - v.oracle_value;
  v.tolerance = 1e-3 * (1.0 + std::abs(v.oracle_value));
  v.pass = std::abs(v.difference) <= v.tolerance;
  return v;
}

int cmd_verify(const std::string& instance_path, double step, const RunConfig& cfg, std::ostream& out,
               std::ostream& err) {
  try {
    validate_run_config(cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  int code = 0;
  const std::optional<Instance> inst = load_or_report(instance_path, err, code);
  if (!inst) return code;
  if (inst->m > kOracleMaxM) {
    err << "error: the grid oracle handles m <= " << kOracleMaxM << " (instance has m = " << inst->m
        << "); its cost grows like (range/step)^m. Use 'solve' for larger instances.\n";
    return kExitUsage;
  }
  const VerifyResult v = verify_instance(*inst, cfg, step);
  out << "bnb     " << format_fixed(v.bnb_value, 6) << "  (" << to_string(v.report.status) << ")\n"
      << "oracle  " << format_fixed(v.oracle_value, 6) << '\n'
      << "diff    " << format_fixed(v.difference, 6) << "  tol " << format_fixed(v.tolerance, 6) << '\n'
      << (v.pass ? "PASS" : "FAIL") << '\n';
  return v.pass ? 0 : 1;
}

std::optional<BenchSpec> parse_bench_spec(const std::string& text) {
  std::istringstream in(text);
  BenchSpec s;
  char c1 = 0, c2 = 0;
  long long seed = 0, n = 0, m = 0;
  if (!(in >> seed >> c1 >> n >> c2 >> m) || c1 != ',' || c2 != ',') return std::nullopt;
  in >> std::ws;
  if (!in.eof() || seed < 0 || n < 1 || m < 1) return std::nullopt;
  s.seed = static_cast<std::uint64_t>(seed);
  s.n = static_cast<std::size_t>(n);
  s.m = static_cast<std::size_t>(m);
  return s;
}

std::vector<TableRow> run_bench(const std::vector<BenchSpec>& rows, const RunConfig& cfg) {
  RunConfig row_cfg = cfg;
  row_cfg.workers = 1;
  row_cfg.trace_path.clear();
  auto run_row = [&](const BenchSpec& spec) {
    try {
      const Instance inst = generate_random(spec.seed, spec.n, spec.m);
      return table_row(solve_global(inst, make_bnb_config(row_cfg)), spec.m, spec.n, spec.seed);
    } catch (const std::exception& e) {
      TableRow row;
      row.m = spec.m;
      row.n = spec.n;
      row.seed = spec.seed;
      row.cbval = std::numeric_limits<double>::infinity();
      row.lbval = -std::numeric_limits<double>::infinity();
      row.error = e.what();
      return row;
    }
  };

  std::vector<TableRow> out(rows.size());
  const std::size_t workers = static_cast<std::size_t>(std::max(1, cfg.workers));
  for (std::size_t start = 0; start < rows.size(); start += workers) {
    const std::size_t stop = std::min(rows.size(), start + workers);
    std::vector<std::future<TableRow>> batch;
    for (std::size_t i = start + 1; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, run_row, rows[i]));
    }
    out[start] = run_row(rows[start]);
    for (std::size_t i = start + 1; i < stop; ++i) out[i] = batch[i - start - 1].get();
  }
  return out;
}

int cmd_bench(const std::vector<BenchSpec>& rows, const RunConfig& cfg, const std::string& records_path,
              std::ostream& out, std::ostream& err) {
  try {
    validate_run_config(cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const std::vector<TableRow> table = run_bench(rows, cfg);
  if (cfg.format == OutputFormat::Table) {
    out << format_table_header() << '\n';
    for (const TableRow& row : table) out << format_table_row(row, cfg.timing) << '\n';
  } else {
    for (const TableRow& row : table) out << format_record(row, cfg.timing) << '\n';
  }
  for (const TableRow& row : table) {
    if (!row.error.empty()) err << "row seed=" << row.seed << " n=" << row.n << " m=" << row.m << ": " << row.error << '\n';
  }
  if (!records_path.empty()) {
    std::ofstream rec(records_path, std::ios::binary);
    for (const TableRow& row : table) rec << format_record(row, cfg.timing) << '\n';
    if (!rec) {
      err << "error: cannot write records file: " << records_path << '\n';
      return kExitIoError;
    }
  }
  for (const TableRow& row : table) {
    if (!row.solve_status) return kExitDataError;
    if (*row.solve_status != SolveStatus::Solved) return exit_code(*row.solve_status);
  }
  return 0;
}

}  // namespace ampec
