#include "ampec/commands.hpp"
#include "ampec/instance_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ampec;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("ampec_cmd_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string write_text(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Generate, DigestIsStableAndSeedSensitive) {
  TempDir dir;
  std::ostringstream o1, o2, o3, err;
  ASSERT_EQ(cmd_generate(1, 10, 5, dir.file("a.json"), o1, err), 0);
  ASSERT_EQ(cmd_generate(1, 10, 5, dir.file("b.json"), o2, err), 0);
  ASSERT_EQ(cmd_generate(2, 10, 5, dir.file("c.json"), o3, err), 0);
  const auto digest = [](const std::string& s) { return s.substr(0, s.find(' ')); };
  EXPECT_EQ(digest(o1.str()), digest(o2.str()));
  EXPECT_NE(digest(o1.str()), digest(o3.str()));
  const Instance back = load_instance(dir.file("a.json"));
  EXPECT_NO_THROW(validate_instance(back));
  EXPECT_EQ(back.n, 10u);
  EXPECT_EQ(back.m, 5u);
  EXPECT_EQ(digest(o1.str()), instance_digest(back));
}

TEST(Generate, Failures) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_generate(1, 0, 1, "/tmp/unused.json", out, err), kExitUsage);
  EXPECT_EQ(cmd_generate(1, 2, 1, "/nonexistent/dir/x.json", out, err), kExitIoError);
  EXPECT_FALSE(err.str().empty());
}

TEST(Solve, TableRowAndReportRoundTrip) {
  TempDir dir;
  std::ostringstream gen, out, err;
  ASSERT_EQ(cmd_generate(3, 2, 1, dir.file("i.json"), gen, err), 0);
  RunConfig cfg;
  ASSERT_EQ(cmd_solve(dir.file("i.json"), cfg, dir.file("r.json"), out, err), kExitSolved) << err.str();
  const auto rows = lines_of(out.str());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], format_table_header());
  EXPECT_NE(rows[1].find("solved"), std::string::npos);

  const ParsedReport rep = load_report(dir.file("r.json"));
  EXPECT_TRUE(rep.has_timing);
  EXPECT_EQ(rep.report.status, SolveStatus::Solved);
  EXPECT_GE(rep.report.cbval, rep.report.lbval);
  EXPECT_LE(rep.report.cbval - rep.report.lbval, cfg.eps * (std::abs(rep.report.cbval) + 1));
  // The printed row is reproduced exactly from the stored report.
  EXPECT_EQ(format_table_row(table_row(rep.report, rep.m, rep.n, cfg.seed)), rows[1]);
}

TEST(Solve, RecordsFormatAndNoTiming) {
  TempDir dir;
  std::ostringstream gen, out, err;
  ASSERT_EQ(cmd_generate(1, 2, 1, dir.file("i.json"), gen, err), 0);
  RunConfig cfg;
  cfg.format = OutputFormat::Records;
  cfg.timing = false;
  ASSERT_EQ(cmd_solve(dir.file("i.json"), cfg, dir.file("r.json"), out, err), 0);
  const auto rec = nlohmann::json::parse(out.str());
  EXPECT_EQ(rec["status"], "solved");
  EXPECT_FALSE(rec.contains("time"));
  EXPECT_FALSE(load_report(dir.file("r.json")).has_timing);
}

TEST(Solve, ExitCodesFollowStatus) {
  TempDir dir;
  std::ostringstream gen, out, err;
  ASSERT_EQ(cmd_generate(1, 20, 2, dir.file("i.json"), gen, err), 0);
  RunConfig cfg;
  cfg.max_iter = 1;
  EXPECT_EQ(cmd_solve(dir.file("i.json"), cfg, "", out, err), kExitIterExceeded);
  EXPECT_NE(out.str().find("exceed"), std::string::npos);
  cfg = RunConfig{};
  cfg.time_limit = 1e-9;
  EXPECT_EQ(cmd_solve(dir.file("i.json"), cfg, "", out, err), kExitTimeExceeded);
  EXPECT_EQ(exit_code(SolveStatus::Incomplete), kExitIncomplete);
  EXPECT_EQ(exit_code(SolveStatus::Solved), 0);
}

TEST(Solve, InputErrors) {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig cfg;
  EXPECT_EQ(cmd_solve(dir.file("missing.json"), cfg, "", out, err), kExitIoError);

  write_text(dir.file("bad.json"), "{\n  \"n\": 1,\n  oops\n}\n");
  err.str("");
  EXPECT_EQ(cmd_solve(dir.file("bad.json"), cfg, "", out, err), kExitDataError);
  EXPECT_NE(err.str().find("line 3"), std::string::npos) << err.str();

  nlohmann::json doc = nlohmann::json::parse(serialize_instance(generate_random(1, 2, 1)));
  doc.erase("Q1");
  write_text(dir.file("short.json"), doc.dump());
  err.str("");
  EXPECT_EQ(cmd_solve(dir.file("short.json"), cfg, "", out, err), kExitDataError);
  EXPECT_NE(err.str().find("'Q1'"), std::string::npos) << err.str();

  cfg.eps = -1.0;
  EXPECT_EQ(cmd_solve(dir.file("short.json"), cfg, "", out, err), kExitUsage);
}

TEST(RunConfigCheck, Invariants) {
  RunConfig cfg;
  EXPECT_NO_THROW(validate_run_config(cfg));
  auto bad = cfg;
  bad.eps = -1e-9;
  EXPECT_THROW(validate_run_config(bad), std::invalid_argument);
  bad = cfg;
  bad.time_limit = 0.0;
  EXPECT_THROW(validate_run_config(bad), std::invalid_argument);
  bad = cfg;
  bad.workers = 0;
  EXPECT_THROW(validate_run_config(bad), std::invalid_argument);
  bad = cfg;
  bad.theta = 1.0;
  EXPECT_THROW(validate_run_config(bad), std::invalid_argument);
  EXPECT_EQ(cfg.time_limit, 36000.0);
  EXPECT_EQ(cfg.eps, 1e-3);
  EXPECT_EQ(cfg.max_iter, 10000);
}

TEST(Verify, TinyInstancePasses) {
  TempDir dir;
  std::ostringstream gen, out, err;
  ASSERT_EQ(cmd_generate(1, 2, 1, dir.file("i.json"), gen, err), 0);
  EXPECT_EQ(cmd_verify(dir.file("i.json"), 0.0, RunConfig{}, out, err), 0) << out.str();
  EXPECT_NE(out.str().find("PASS"), std::string::npos);
  EXPECT_NE(out.str().find("oracle"), std::string::npos);
}

TEST(Verify, ConstantObjective) {
  const Instance inst = ref::small_market(2, 1, QuadObjective::zero(2, 1));
  const VerifyResult v = verify_instance(inst, RunConfig{}, 0.0);
  EXPECT_EQ(v.bnb_value, 0.0);
  EXPECT_EQ(v.oracle_value, 0.0);
  EXPECT_EQ(v.difference, 0.0);
  EXPECT_TRUE(v.pass);
}

TEST(Verify, HugeStepStillReports) {
  TempDir dir;
  std::ostringstream gen, out, err;
  ASSERT_EQ(cmd_generate(2, 2, 2, dir.file("i.json"), gen, err), 0);
  const int code = cmd_verify(dir.file("i.json"), 2.5, RunConfig{}, out, err);
  EXPECT_TRUE(code == 0 || code == 1);
  for (const char* key : {"bnb", "oracle", "diff"}) EXPECT_NE(out.str().find(key), std::string::npos);
}

TEST(Verify, RefusesLargeParameterDimension) {
  TempDir dir;
  std::ostringstream gen, out, err;
  ASSERT_EQ(cmd_generate(1, 2, 4, dir.file("i.json"), gen, err), 0);
  EXPECT_EQ(cmd_verify(dir.file("i.json"), 0.0, RunConfig{}, out, err), kExitUsage);
  EXPECT_NE(err.str().find("m <= 3"), std::string::npos) << err.str();
}

TEST(Bench, EmptySpecPrintsHeaderOnly) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_bench({}, RunConfig{}, "", out, err), 0);
  EXPECT_EQ(lines_of(out.str()), std::vector<std::string>{format_table_header()});
}

TEST(Bench, RowsKeepInputOrder) {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig cfg;
  cfg.workers = 3;
  const std::vector<BenchSpec> rows{{3, 3, 1}, {1, 1, 2}, {2, 2, 1}};
  EXPECT_EQ(cmd_bench(rows, cfg, dir.file("rec.jsonl"), out, err), 0) << err.str();
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 4u);
  std::ifstream rec(dir.file("rec.jsonl"));
  std::vector<nlohmann::json> records;
  for (std::string line; std::getline(rec, line);) records.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(records.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(records[i]["seed"], rows[i].seed);
    EXPECT_EQ(records[i]["n"], rows[i].n);
    EXPECT_EQ(records[i]["m"], rows[i].m);
    EXPECT_EQ(records[i]["status"], "solved");
    EXPECT_GE(records[i]["cbval"].get<double>(), records[i]["lbval"].get<double>());
  }
}

TEST(Bench, TimeLimitShowsAsExceed) {
  std::ostringstream out, err;
  RunConfig cfg;
  cfg.time_limit = 1e-9;
  cfg.format = OutputFormat::Records;
  const int code = cmd_bench({{1, 20, 2}}, cfg, "", out, err);
  EXPECT_EQ(code, kExitTimeExceeded);
  EXPECT_EQ(nlohmann::json::parse(out.str())["status"], "exceed");
}

TEST(Bench, SpecParsing) {
  const auto s = parse_bench_spec("7,20,3");
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->seed, 7u);
  EXPECT_EQ(s->n, 20u);
  EXPECT_EQ(s->m, 3u);
  for (const char* bad : {"", "1,2", "1,2,3,4", "a,b,c", "1,0,1", "1;2;3", "-1,2,3"}) {
    EXPECT_FALSE(parse_bench_spec(bad).has_value()) << bad;
  }
}

TEST(ReportFormat, FixedDecimalsAndUnbounded) {
  EXPECT_EQ(format_fixed(1338.22204, 4), "1338.2220");
  EXPECT_EQ(format_fixed(-std::numeric_limits<double>::infinity(), 4), "-inf");
  TableRow row;
  row.m = 5;
  row.n = 10;
  row.cbval = 1338.2220;
  row.lbval = 1338.2021;
  row.iter = 17;
  row.time = 88.456;
  row.node = 7;
  row.status = "solved";
  const std::string line = format_table_row(row);
  for (const char* part : {"1338.2220", "1338.2021", "88.46", " 17 ", "solved"}) {
    EXPECT_NE(line.find(part), std::string::npos) << line;
  }
  EXPECT_EQ(format_table_row(row, false).find("88.46"), std::string::npos);
}

TEST(ReportFormat, RoundTripKeepsNullBounds) {
  SolveReport r;
  r.status = SolveStatus::TimeExceeded;
  r.cbval = std::numeric_limits<double>::infinity();
  r.lbval = -std::numeric_limits<double>::infinity();
  r.iter = 0;
  r.wall_time = 1.25;
  const std::string text = serialize_report(r, 2, 3);
  const ParsedReport p = parse_report(text);
  EXPECT_EQ(p.report.cbval, r.cbval);
  EXPECT_EQ(p.report.lbval, r.lbval);
  EXPECT_EQ(p.report.status, r.status);
  EXPECT_EQ(p.report.wall_time, 1.25);
  EXPECT_EQ(serialize_report(p.report, p.m, p.n), text);
  EXPECT_THROW(parse_report("{}"), std::runtime_error);
  EXPECT_THROW(parse_report("not json"), std::runtime_error);
}
