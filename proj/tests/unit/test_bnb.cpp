#include "ampec/bnb.hpp"
#include "ampec/oracle.hpp"
#include "ampec/report_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ampec;

namespace {

Instance one_firm_market(double y_cap) {
  NashCournotParams p;
  p.n = 1;
  p.m = 1;
  p.alpha = 10.0;
  p.beta = 0.125;
  p.c = Mat::Constant(1, 1, 1.0);
  p.eta = Vec::Constant(1, 5.0);
  p.xi = Vec::Constant(1, y_cap);
  p.objective = QuadObjective::zero(1, 1);
  return build_nash_cournot(p);
}

// A market whose equilibria move with y, so the bilevel structure matters.
Instance responsive_market(std::uint64_t seed, std::size_t n, std::size_t m) {
  Instance inst = generate_random(seed, n, m);
  NashCournotParams p = *inst.nash_cournot;
  p.beta = 3.0;
  p.objective = inst.objective;
  return build_nash_cournot(p);
}

BnbConfig recording() {
  BnbConfig cfg;
  cfg.record_history = true;
  return cfg;
}

}  // namespace

TEST(UpperBound, OneFirmAtCapacity) {
  const UpperBound ub = upper_bound_from_y(one_firm_market(5.0), Vec::Zero(1));
  EXPECT_NEAR(ub.x[0], std::clamp(10.0 / 0.25, 0.0, 5.0), 1e-10);
}

TEST(UpperBound, OneFirmShutDown) {
  const Instance inst = one_firm_market(20.0);
  const UpperBound ub = upper_bound_from_y(inst, Vec::Constant(1, 15.0));
  EXPECT_NEAR(ub.x[0], 0.0, 1e-10);
}

TEST(UpperBound, ResultIsEquilibrium) {
  Rng rng(91);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Instance inst = responsive_market(seed, 6, 2);
    const Decomposition dec = build_decomposition(inst);
    for (int k = 0; k < 10; ++k) {
      const Vec y = ref::random_point(rng, inst.Y);
      const UpperBound ub = upper_bound_from_y(inst, y);
      EXPECT_LE(eval_g(dec, inst, ub.x, y), 1e-6);
      EXPECT_NEAR(ub.fval, eval_objective(inst, ub.x, y), 1e-12 * (1 + std::abs(ub.fval)));
    }
  }
}

TEST(NodePool, SingleNode) {
  NodePool pool;
  BnbNode n;
  n.beta = 1.5;
  const auto id = pool.insert(n);
  const BnbNode got = select_node(pool);
  EXPECT_EQ(got.id, id);
  EXPECT_TRUE(pool.empty());
}

TEST(NodePool, TiesGoToFirstInserted) {
  NodePool pool;
  std::vector<std::uint64_t> ids;
  for (double beta : {3.0, 2.5, 2.5}) {
    BnbNode n;
    n.beta = beta;
    ids.push_back(pool.insert(n));
  }
  EXPECT_EQ(select_node(pool).id, ids[1]);
  EXPECT_EQ(select_node(pool).id, ids[2]);
  EXPECT_EQ(select_node(pool).id, ids[0]);
}

TEST(NodePool, PruneFromThreshold) {
  NodePool pool;
  for (double beta : {1.0, 2.0, 3.0, 4.0}) {
    BnbNode n;
    n.beta = beta;
    pool.insert(n);
  }
  EXPECT_EQ(pool.prune_from(2.5), 3.0);
  EXPECT_EQ(pool.size(), 2u);
  EXPECT_EQ(pool.prune_from(10.0), std::numeric_limits<double>::infinity());
  EXPECT_EQ(pool.prune_from(-1.0), 1.0);
  EXPECT_TRUE(pool.empty());
  EXPECT_THROW(pool.best(), std::logic_error);
}

TEST(SolveGlobal, ConstantObjectiveStopsAtRoot) {
  const Instance inst = ref::small_market(3, 2, QuadObjective::zero(3, 2));
  const SolveReport r = solve_global(inst);
  EXPECT_EQ(r.status, SolveStatus::Solved);
  EXPECT_EQ(r.iter, 0);
  EXPECT_EQ(r.cbval, 0.0);
  EXPECT_NEAR(r.lbval, 0.0, 1e-12);
}

TEST(SolveGlobal, MatchesGridOracleOnOneParameter) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (const Instance& inst : {generate_random(seed, 2, 1), responsive_market(seed, 2, 1)}) {
      const SolveReport r = solve_global(inst);
      const OracleResult o = grid_solve(inst, 0.002, true);
      ASSERT_EQ(r.status, SolveStatus::Solved);
      EXPECT_NEAR(r.cbval, o.value, 1e-3 * (1 + std::abs(o.value)));
    }
  }
}

TEST(SolveGlobal, BoundsSandwichOracleAtEveryIteration) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Instance inst = responsive_market(seed, 1 + seed % 3, 1 + seed % 2);
    const OracleResult o = grid_solve(inst, inst.m == 1 ? 0.002 : 0.02, true);
    const SolveReport r = solve_global(inst, recording());
    ASSERT_FALSE(r.history.empty());
    for (const TraceRecord& t : r.history) {
      EXPECT_LE(t.lbval - 1e-5, o.value) << "iteration " << t.iter;
      EXPECT_GE(t.cbval + 1e-5, t.lbval) << "iteration " << t.iter;
    }
    // The final score is within tolerance of the oracle, which is itself
    // only an upper estimate of the optimum.
    EXPECT_LE(r.cbval, o.value + 1e-3 * (1 + std::abs(o.value)));
  }
}

TEST(SolveGlobal, MonotoneBoundsAndFeasibleIncumbents) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Instance inst = responsive_market(seed, 5, 2);
    const Decomposition dec = build_decomposition(inst);
    const SolveReport r = solve_global(inst, dec, recording());
    for (std::size_t k = 1; k < r.history.size(); ++k) {
      EXPECT_LE(r.history[k].cbval, r.history[k - 1].cbval);
      EXPECT_GE(r.history[k].lbval, r.history[k - 1].lbval - 1e-9);
    }
    ASSERT_FALSE(r.incumbents.empty());
    for (const Incumbent& inc : r.incumbents) {
      EXPECT_TRUE(is_equilibrium_feasible(dec, inst, inc.x, inc.y, 1e-6));
      EXPECT_NEAR(inc.fval, eval_objective(inst, inc.x, inc.y), 1e-12 * (1 + std::abs(inc.fval)));
    }
    for (std::size_t k = 1; k < r.incumbents.size(); ++k) EXPECT_LT(r.incumbents[k].fval, r.incumbents[k - 1].fval);
    EXPECT_TRUE(is_equilibrium_feasible(dec, inst, r.x, r.y, 1e-6));
    EXPECT_EQ(r.cbval, eval_objective(inst, r.x, r.y));
  }
}

TEST(SolveGlobal, SolvedMeansGapWithinTolerance) {
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    BnbConfig cfg;
    cfg.eps = eps;
    const SolveReport r = solve_global(responsive_market(2, 3, 2), cfg);
    ASSERT_EQ(r.status, SolveStatus::Solved);
    EXPECT_GE(r.cbval, r.lbval - 1e-9 * (1 + std::abs(r.cbval)));
    EXPECT_LE(r.cbval - r.lbval, eps * (std::abs(r.cbval) + 1));
  }
}

TEST(SolveGlobal, SolvedRowRelation) {
  // A known solved benchmark row has its score no smaller than its bound and
  // the gap within the default tolerance; our solved reports obey the same.
  const double cbval = 1338.2220, lbval = 1338.2021, eps = 1e-3;
  EXPECT_GE(cbval, lbval);
  EXPECT_LE(cbval - lbval, eps * (std::abs(cbval) + 1));
  const SolveReport r = solve_global(responsive_market(3, 4, 1));
  ASSERT_EQ(r.status, SolveStatus::Solved);
  EXPECT_GE(r.cbval, r.lbval);
  EXPECT_LE(r.cbval - r.lbval, eps * (std::abs(r.cbval) + 1));
}

TEST(SolveGlobal, NestedBisectionClosesTheGap) {
  // Follow one nested chain: split adaptively and keep the child containing
  // the relaxation point. alpha(R) is the optimum over R from the grid oracle.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SCOPED_TRACE(::testing::Message() << "seed " << seed);
    const Instance inst = responsive_market(seed, 2, 1);
    const Decomposition dec = build_decomposition(inst);
    BoxRegion R = inst.Y;
    double gap = std::numeric_limits<double>::infinity();
    int steps = 0;
    for (; steps < 200 && gap >= 1e-3; ++steps) {
      const RelaxResult r = solve_relaxation(inst, dec, R);
      const double alpha = grid_solve(inst, std::max(R.widths()[0] / 200, 1e-9), true, R).value;
      gap = alpha - r.beta;
      ASSERT_GE(gap, -1e-5 * (1 + std::abs(alpha)));
      const SplitChoice s = choose_split(dec, R, R.project(r.y));
      const auto [minus, plus] = bisect(R, s.index, s.split);
      R = minus.contains(R.project(r.y)) ? minus : plus;
    }
    EXPECT_LT(gap, 1e-3) << "after " << steps << " bisections";
  }
}

TEST(SolveGlobal, StoppingStatuses) {
  const Instance inst = generate_random(1, 20, 2);
  BnbConfig cfg;
  cfg.max_iter = 2;
  EXPECT_EQ(solve_global(inst, cfg).status, SolveStatus::IterExceeded);

  cfg = BnbConfig{};
  cfg.time_limit = 1e-9;
  const SolveReport timed = solve_global(inst, cfg);
  EXPECT_EQ(timed.status, SolveStatus::TimeExceeded);
  EXPECT_GE(timed.cbval, timed.lbval);

  cfg = BnbConfig{};
  cfg.stall_window = 1;
  cfg.stall_factor = 1e9;
  EXPECT_EQ(solve_global(inst, cfg).status, SolveStatus::Incomplete);

  cfg = BnbConfig{};
  cfg.eps = -1.0;
  EXPECT_THROW(solve_global(inst, cfg), std::invalid_argument);
}

TEST(SolveGlobal, DeterministicAndWorkerIndependent) {
  const Instance inst = generate_random(4, 8, 2);
  BnbConfig cfg;
  cfg.max_iter = 40;
  std::ostringstream t1, t2, t3;
  cfg.trace = &t1;
  const SolveReport a = solve_global(inst, cfg);
  cfg.trace = &t2;
  const SolveReport b = solve_global(inst, cfg);
  cfg.trace = &t3;
  cfg.workers = 2;
  const SolveReport c = solve_global(inst, cfg);
  EXPECT_EQ(serialize_report(a, 2, 8, false), serialize_report(b, 2, 8, false));
  EXPECT_EQ(serialize_report(a, 2, 8, false), serialize_report(c, 2, 8, false));
  EXPECT_EQ(t1.str(), t2.str());
  EXPECT_EQ(t1.str(), t3.str());
}

TEST(SolveGlobal, TraceIsLineDelimitedJson) {
  const Instance inst = generate_random(2, 3, 1);
  std::ostringstream trace;
  BnbConfig cfg;
  cfg.max_iter = 5;
  cfg.trace = &trace;
  const SolveReport r = solve_global(inst, cfg);
  std::istringstream in(trace.str());
  std::string line;
  long lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    for (const char* key : {"\"iter\"", "\"lbval\"", "\"cbval\"", "\"pool\"", "\"region\""}) {
      EXPECT_NE(line.find(key), std::string::npos) << line;
    }
  }
  EXPECT_EQ(lines, r.iter + 1);
}

TEST(Statuses, Names) {
  EXPECT_STREQ(table_status(SolveStatus::Solved), "solved");
  EXPECT_STREQ(table_status(SolveStatus::Incomplete), "incomp.");
  EXPECT_STREQ(table_status(SolveStatus::TimeExceeded), "exceed");
  EXPECT_STREQ(table_status(SolveStatus::IterExceeded), "exceed");
  for (SolveStatus s : {SolveStatus::Solved, SolveStatus::Incomplete, SolveStatus::TimeExceeded, SolveStatus::IterExceeded}) {
    EXPECT_EQ(parse_solve_status(to_string(s)), s);
  }
  EXPECT_FALSE(parse_solve_status("bogus").has_value());
}
