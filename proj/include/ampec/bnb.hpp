#pragma once

#include "ampec/relax.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ampec {

/// Unique equilibrium x*(y) as the box QP min 1/2 x'Ax + (By + a)'x over X,
/// and f(x*(y), y). Throws NonConvergence if the QP stops short.
struct UpperBound {
  Vec x;
  double fval = 0.0;
};

UpperBound upper_bound_from_y(const Instance& inst, const Vec& y);

struct BnbNode {
  std::uint64_t id = 0;
  BoxRegion region;
  double beta = 0.0;
  Vec x;  // relaxation minimizer
  Vec y;
  double multiplier = 0.0;
  double delta = 0.0;      // envelope gap at y
  std::size_t split_index = 0;
  int depth = 0;
  std::optional<std::uint64_t> parent_id;
};

/// Open nodes ordered by (beta, id).
class NodePool {
 public:
  /// Assigns the next id and stores the node; returns the id.
  std::uint64_t insert(BnbNode node);
  /// Node with minimal beta, lowest id among ties. Requires a nonempty pool.
  const BnbNode& best() const;
  BnbNode pop_best();
  /// Removes every node with beta >= threshold and returns the smallest
  /// removed beta (+inf if none).
  double prune_from(double threshold);
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::map<std::pair<double, std::uint64_t>, BnbNode> nodes_;
  std::uint64_t next_id_ = 0;
};

/// The pool's selection rule as a free function.
BnbNode select_node(NodePool& pool);

enum class SolveStatus { Solved, Incomplete, TimeExceeded, IterExceeded };

/// Table-style status: solved, incomp. or exceed.
const char* table_status(SolveStatus status);
/// Report-file status: solved, incomplete, time_exceeded, iter_exceeded.
const char* to_string(SolveStatus status);
std::optional<SolveStatus> parse_solve_status(const std::string& s);

struct BnbConfig {
  double eps = 1e-3;
  long max_iter = 10000;
  double time_limit = 36000.0;  // seconds
  int stall_window = 25;
  double stall_factor = 1e-7;
  double theta = 0.9;
  RelaxConfig relax;
  int workers = 1;
  /// Line-delimited JSON trace, one record per iteration.
  std::ostream* trace = nullptr;
  /// Keep per-iteration bounds and every installed incumbent in the report.
  bool record_history = false;
};

struct TraceRecord {
  long iter = 0;
  double lbval = 0.0;
  double cbval = 0.0;
  std::size_t pool = 0;
  BoxRegion region;  // region split in this iteration (empty at iteration 0)
};

struct Incumbent {
  Vec x;
  Vec y;
  double fval = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::Solved;
  double cbval = 0.0;
  double lbval = 0.0;
  Vec x;
  Vec y;
  long iter = 0;
  std::size_t nodes_max = 0;
  double wall_time = 0.0;
  std::vector<TraceRecord> history;
  std::vector<Incumbent> incumbents;
};

/// Branch and bound over Y with convex-envelope relaxations and adaptive
/// bisection. Deterministic for workers == 1; with more workers the two
/// children of a split are relaxed concurrently, which changes nothing but
/// the wall time.
SolveReport solve_global(const Instance& inst, const BnbConfig& cfg = {});

/// Same, with a caller-supplied decomposition.
SolveReport solve_global(const Instance& inst, const Decomposition& dec, const BnbConfig& cfg);

}  // namespace ampec
