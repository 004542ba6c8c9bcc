#include "ampec/bnb.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ampec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExactEnvelopeTol = 1e-8;

}  // namespace

UpperBound upper_bound_from_y(const Instance& inst, const Vec& y) {
  QpOptions opts;
  opts.tol = 1e-10;
  QpSolution sol = solve_box_qp(inst.A, inst.B * y + inst.a, inst.X, opts);
  if (!sol.converged()) throw NonConvergence("upper_bound_from_y: lower-level QP did not converge");
  UpperBound ub;
  ub.fval = eval_objective(inst, sol.v, y);
  ub.x = std::move(sol.v);
  return ub;
}

std::uint64_t NodePool::insert(BnbNode node) {
  node.id = next_id_++;
  const auto key = std::make_pair(node.beta, node.id);
  nodes_.emplace(key, std::move(node));
  return key.second;
}

const BnbNode& NodePool::best() const {
  if (nodes_.empty()) throw std::logic_error("NodePool::best: pool is empty");
  return nodes_.begin()->second;
}

BnbNode NodePool::pop_best() {
  if (nodes_.empty()) throw std::logic_error("NodePool::pop_best: pool is empty");
  BnbNode node = std::move(nodes_.begin()->second);
  nodes_.erase(nodes_.begin());
  return node;
}

double NodePool::prune_from(double threshold) {
  const auto first = nodes_.lower_bound({threshold, 0});
  if (first == nodes_.end()) return kInf;
  const double smallest = first->first.first;
  nodes_.erase(first, nodes_.end());
  return smallest;
}

BnbNode select_node(NodePool& pool) { return pool.pop_best(); }

const char* table_status(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Incomplete: return "incomp.";
    case SolveStatus::TimeExceeded:
    case SolveStatus::IterExceeded: return "exceed";
  }
  return "?";
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Incomplete: return "incomplete";
    case SolveStatus::TimeExceeded: return "time_exceeded";
    case SolveStatus::IterExceeded: return "iter_exceeded";
  }
  return "?";
}

std::optional<SolveStatus> parse_solve_status(const std::string& s) {
  for (SolveStatus st : {SolveStatus::Solved, SolveStatus::Incomplete, SolveStatus::TimeExceeded,
                         SolveStatus::IterExceeded}) {
    if (s == to_string(st)) return st;
  }
  return std::nullopt;
}

namespace {

nlohmann::json json_bound(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json json_vec(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

class Search {
 public:
  Search(const Instance& inst, const Decomposition& dec, const BnbConfig& cfg)
      : inst_(inst), dec_(dec), cfg_(cfg), checker_(inst, dec) {}

  SolveReport run();

 private:
  struct Child {
    BoxRegion region;
    RelaxResult relax;
  };

  RelaxResult relax(const BoxRegion& region, const std::optional<RelaxStart>& start) const {
    return solve_relaxation(inst_, dec_, region, cfg_.relax, start);
  }
  void try_incumbent(const Vec& y);
  double prune_threshold() const { return alpha_ - cfg_.eps * (std::abs(alpha_) + 1.0); }
  double global_lower() const {
    const double open = pool_.empty() ? kInf : pool_.best().beta;
    return std::min({open, pruned_min_, alpha_});
  }
  void prune() { pruned_min_ = std::min(pruned_min_, pool_.prune_from(prune_threshold())); }
  void add_node(BnbNode node);
  void record(const BoxRegion& region);
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  const Instance& inst_;
  const Decomposition& dec_;
  const BnbConfig& cfg_;
  GapEvaluator checker_;
  NodePool pool_;
  double alpha_ = kInf;
  double pruned_min_ = kInf;
  Vec best_x_;
  Vec best_y_;
  long iter_ = 0;
  std::size_t nodes_max_ = 0;
  std::vector<double> lb_history_;
  SolveReport report_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void Search::try_incumbent(const Vec& y_raw) {
  const Vec y = inst_.Y.project(y_raw);
  UpperBound ub;
  try {
    ub = upper_bound_from_y(inst_, y);
  } catch (const NonConvergence&) {
    return;
  }
  if (!(ub.fval < alpha_)) return;
  bool ok = false;
  const double g = checker_.gap_direct(ub.x, y, &ok);
  if (!ok || g > kFeasibilityTol) return;
  alpha_ = ub.fval;
  best_x_ = ub.x;
  best_y_ = y;
  if (cfg_.record_history) report_.incumbents.push_back({ub.x, y, ub.fval});
}

void Search::add_node(BnbNode node) {
  if (node.beta >= prune_threshold()) {
    pruned_min_ = std::min(pruned_min_, node.beta);
    return;
  }
  pool_.insert(std::move(node));
  nodes_max_ = std::max(nodes_max_, pool_.size());
}

void Search::record(const BoxRegion& region) {
  const double lb = global_lower();
  lb_history_.push_back(lb);
  if (cfg_.record_history) report_.history.push_back({iter_, lb, alpha_, pool_.size(), region});
  if (cfg_.trace) {
    nlohmann::json rec;
    rec["iter"] = iter_;
    rec["lbval"] = json_bound(lb);
    rec["cbval"] = json_bound(alpha_);
    rec["pool"] = pool_.size();
    rec["region"] = {{"lo", json_vec(region.lo)}, {"hi", json_vec(region.hi)}};
    *cfg_.trace << rec.dump() << '\n';
  }
}

SolveReport Search::run() {
  auto finish = [&](SolveStatus status) {
    report_.status = status;
    report_.cbval = alpha_;
    report_.lbval = global_lower();
    report_.x = best_x_;
    report_.y = best_y_;
    report_.iter = iter_;
    report_.nodes_max = nodes_max_;
    report_.wall_time = elapsed();
    return std::move(report_);
  };

  const BoxRegion root_region = inst_.Y;
  const RelaxResult root = relax(root_region, std::nullopt);
  if (root.status == RelaxStatus::Infeasible) {
    // Cannot happen for a consistent decomposition; nothing to search.
    pruned_min_ = kInf;
    record(root_region);
    return finish(SolveStatus::Solved);
  }
  try_incumbent(root.y);

  BnbNode node;
  node.region = root_region;
  node.beta = root.beta;
  node.x = root.x;
  node.y = root.y;
  node.multiplier = root.multiplier;
  const EnvelopeGap gap = envelope_gap_index(dec_, root_region, root_region.project(root.y));
  node.delta = gap.delta;
  node.split_index = gap.index;

  if (root.status == RelaxStatus::Optimal && gap.delta <= kExactEnvelopeTol) {
    // The relaxation point is feasible for the original problem.
    pruned_min_ = root.beta;
    nodes_max_ = 1;
    record(root_region);
    return finish(SolveStatus::Solved);
  }
  add_node(std::move(node));
  nodes_max_ = std::max<std::size_t>(nodes_max_, 1);
  record(BoxRegion{});

  while (true) {
    prune();
    if (pool_.empty()) return finish(SolveStatus::Solved);
    if (iter_ >= cfg_.max_iter) return finish(SolveStatus::IterExceeded);
    if (elapsed() > cfg_.time_limit) return finish(SolveStatus::TimeExceeded);
    const auto window = static_cast<std::size_t>(std::max(1, cfg_.stall_window));
    if (lb_history_.size() > window) {
      const double now = lb_history_.back();
      const double then = lb_history_[lb_history_.size() - 1 - window];
      if (std::isfinite(now) && std::isfinite(then) &&
          now - then < cfg_.stall_factor * (1.0 + std::abs(now))) {
        return finish(SolveStatus::Incomplete);
      }
    }

    const BnbNode parent = select_node(pool_);
    ++iter_;
    const SplitChoice split = choose_split(dec_, parent.region, parent.y);
    auto [lower, upper] = bisect(parent.region, split.index, split.split);
    const RelaxStart warm{parent.x, parent.y, parent.multiplier};

    Child kids[2] = {{std::move(lower), {}}, {std::move(upper), {}}};
    if (cfg_.workers > 1) {
      auto other = std::async(std::launch::async, [&] { return relax(kids[1].region, warm); });
      kids[0].relax = relax(kids[0].region, warm);
      kids[1].relax = other.get();
    } else {
      for (Child& k : kids) k.relax = relax(k.region, warm);
    }

    for (const Child& k : kids) {
      if (k.relax.status != RelaxStatus::Infeasible) try_incumbent(k.relax.y);
    }
    for (Child& k : kids) {
      if (k.relax.status == RelaxStatus::Infeasible) continue;
      BnbNode child;
      child.region = std::move(k.region);
      // beta is certified whatever the status; an untrusted solve reports -inf.
      child.beta = std::max(k.relax.beta, parent.beta);
      child.x = std::move(k.relax.x);
      child.y = std::move(k.relax.y);
      child.multiplier = k.relax.multiplier;
      const EnvelopeGap g = envelope_gap_index(dec_, child.region, child.region.project(child.y));
      child.delta = g.delta;
      child.split_index = g.index;
      child.depth = parent.depth + 1;
      child.parent_id = parent.id;
      add_node(std::move(child));
    }
    record(parent.region);
  }
}

}  // namespace

SolveReport solve_global(const Instance& inst, const Decomposition& dec, const BnbConfig& cfg) {
  if (!(cfg.eps >= 0.0)) throw std::invalid_argument("solve_global: eps must be nonnegative");
  Search search(inst, dec, cfg);
  return search.run();
}

SolveReport solve_global(const Instance& inst, const BnbConfig& cfg) {
  const Decomposition dec = build_decomposition(inst, cfg.theta);
  return solve_global(inst, dec, cfg);
}

}  // namespace ampec
