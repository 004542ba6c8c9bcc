#include "ampec/report_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ampec {

namespace {

using nlohmann::json;

json bound_to_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double bound_from_json(const json& j, double unbounded) {
  if (j.is_null()) return unbounded;
  return j.get<double>();
}

json vec_to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec vec_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string serialize_report(const SolveReport& report, std::size_t m, std::size_t n,
                             bool with_timing) {
  json doc;
  doc["format"] = "ampec-report";
  doc["version"] = 1;
  doc["m"] = m;
  doc["n"] = n;
  doc["status"] = to_string(report.status);
  doc["cbval"] = bound_to_json(report.cbval);
  doc["lbval"] = bound_to_json(report.lbval);
  doc["iter"] = report.iter;
  doc["nodes_max"] = report.nodes_max;
  doc["x"] = vec_to_json(report.x);
  doc["y"] = vec_to_json(report.y);
  if (with_timing) doc["wall_time"] = report.wall_time;
  return doc.dump(2) + "\n";
}

ParsedReport parse_report(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("report: ") + e.what());
  }
  try {
    if (doc.at("format") != "ampec-report") throw std::runtime_error("report: wrong format tag");
    if (doc.at("version") != 1) throw std::runtime_error("report: unsupported version");
    ParsedReport out;
    out.m = doc.at("m").get<std::size_t>();
    out.n = doc.at("n").get<std::size_t>();
    const auto status = parse_solve_status(doc.at("status").get<std::string>());
    if (!status) throw std::runtime_error("report: unknown status");
    SolveReport& r = out.report;
    r.status = *status;
    r.cbval = bound_from_json(doc.at("cbval"), kInf);
    r.lbval = bound_from_json(doc.at("lbval"), -kInf);
    r.iter = doc.at("iter").get<long>();
    r.nodes_max = doc.at("nodes_max").get<std::size_t>();
    r.x = vec_from_json(doc.at("x"));
    r.y = vec_from_json(doc.at("y"));
    if (doc.contains("wall_time")) {
      out.has_timing = true;
      r.wall_time = doc["wall_time"].get<double>();
    }
    return out;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("report: ") + e.what());
  }
}

void save_report(const std::string& path, const SolveReport& report, std::size_t m, std::size_t n,
                 bool with_timing) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report file: " + path);
  out << serialize_report(report, m, n, with_timing);
  if (!out) throw std::runtime_error("cannot write report file: " + path);
}

ParsedReport load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read report file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_report(ss.str());
}

TableRow table_row(const SolveReport& report, std::size_t m, std::size_t n, std::uint64_t seed) {
  TableRow row;
  row.m = m;
  row.n = n;
  row.cbval = report.cbval;
  row.lbval = report.lbval;
  row.iter = report.iter;
  row.time = report.wall_time;
  row.node = report.nodes_max;
  row.status = table_status(report.status);
  row.solve_status = report.status;
  row.seed = seed;
  return row;
}

std::string format_fixed(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string format_table_header() {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%3s %5s %14s %14s %8s %10s %8s  %s", "m", "n", "cbval", "lbval",
                "iter", "time(s)", "node", "status");
  return buf;
}

std::string format_table_row(const TableRow& row, bool with_timing) {
  char buf[256];
  const std::string status = row.error.empty() ? row.status : "error";
  std::snprintf(buf, sizeof buf, "%3zu %5zu %14s %14s %8ld %10s %8zu  %s", row.m, row.n,
                format_fixed(row.cbval, 4).c_str(), format_fixed(row.lbval, 4).c_str(), row.iter,
                with_timing ? format_fixed(row.time, 2).c_str() : "-", row.node, status.c_str());
  return buf;
}

std::string format_record(const TableRow& row, bool with_timing) {
  json rec;
  rec["seed"] = row.seed;
  rec["m"] = row.m;
  rec["n"] = row.n;
  rec["cbval"] = bound_to_json(row.cbval);
  rec["lbval"] = bound_to_json(row.lbval);
  rec["iter"] = row.iter;
  if (with_timing) rec["time"] = row.time;
  rec["node"] = row.node;
  rec["status"] = row.error.empty() ? row.status : "error";
  if (!row.error.empty()) rec["error"] = row.error;
  return rec.dump();
}

}  // namespace ampec
