#pragma once

#include "ampec/bnb.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace ampec {

/// Report file: format "ampec-report", version 1. `wall_time` is written only
/// when `with_timing` is set so that reports of deterministic runs compare
/// byte for byte. Unbounded values (no incumbent, no finite lower bound)
/// are written as null.
std::string serialize_report(const SolveReport& report, std::size_t m, std::size_t n,
                             bool with_timing = true);

struct ParsedReport {
  std::size_t m = 0;
  std::size_t n = 0;
  SolveReport report;
  bool has_timing = false;
};

/// Throws std::runtime_error on malformed input.
ParsedReport parse_report(const std::string& text);
void save_report(const std::string& path, const SolveReport& report, std::size_t m, std::size_t n,
                 bool with_timing = true);
ParsedReport load_report(const std::string& path);

/// One line of the results table: m, n, cbval, lbval (4 decimals), iter,
/// time(s) (2 decimals, "-" when timing is off), node, status.
struct TableRow {
  std::size_t m = 0;
  std::size_t n = 0;
  double cbval = 0.0;
  double lbval = 0.0;
  long iter = 0;
  double time = 0.0;
  std::size_t node = 0;
  std::string status;
  std::optional<SolveStatus> solve_status;  // empty when the row failed
  std::uint64_t seed = 0;
  std::string error;  // nonempty when the row failed before solving
};

TableRow table_row(const SolveReport& report, std::size_t m, std::size_t n, std::uint64_t seed);

std::string format_table_header();
std::string format_table_row(const TableRow& row, bool with_timing = true);
/// A single-line JSON record with the same fields.
std::string format_record(const TableRow& row, bool with_timing = true);

/// Fixed-point text used in the table, "inf" and "-inf" for unbounded values.
std::string format_fixed(double v, int decimals);

}  // namespace ampec
