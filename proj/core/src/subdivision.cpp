#include "isoperim/subdivision.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

#include "isoperim/errors.hpp"

namespace isoperim {

namespace {

// Breadth-first levels evaluated before the frontier is handed to depth-first
// workers. Fixed, so the offending box of a failed run does not depend on the
// number of workers.
constexpr int kBreadthFirstLevels = 8;

struct Node {
  Box box;
  std::array<int, 2> depth{0, 0};
  std::string path;
};

struct PathLeaf {
  std::string path;
  Leaf leaf;
  int depth = 0;
};

struct Outcome {
  std::vector<PathLeaf> leaves;
  std::optional<Box> offending;
  std::size_t evaluations = 0;
};

// Tries the remaining rungs of the ladder on a box that cannot be split.
std::optional<Leaf> escalate(const Node& node, const BoundFn& fn, const Rational& threshold, const ParamsLadder& params,
                             const std::vector<int>& ladder, std::size_t& evaluations) {
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    ++evaluations;
    const auto ev = evaluate_box(fn, node.box, threshold, params.at(ladder[i]), ladder[i]);
    if (ev.certified) return Leaf{node.box, ev.bound_lo, ladder[i]};
  }
  return std::nullopt;
}

int node_depth(const Node& n) { return std::max(n.depth[0], n.depth[1]); }

// Resolves a node that failed at base precision: split it, or escalate.
// Returns false if the node is inconclusive.
bool resolve_failed(const Node& node, const BoundFn& fn, const Rational& threshold, const ParamsLadder& params,
                    const SubdivisionOptions& opt, std::vector<Node>& children, std::vector<PathLeaf>& leaves,
                    std::size_t& evaluations) {
  if (auto split = split_box(node.box, node.depth, opt.max_depth)) {
    Node left{split->left, node.depth, node.path + '0'};
    Node right{split->right, node.depth, node.path + '1'};
    ++left.depth[split->axis];
    ++right.depth[split->axis];
    children.push_back(std::move(left));
    children.push_back(std::move(right));
    return true;
  }
  if (auto leaf = escalate(node, fn, threshold, params, opt.ladder, evaluations)) {
    leaves.push_back({node.path, *leaf, node_depth(node)});
    return true;
  }
  return false;
}

Outcome depth_first(const Node& root, const BoundFn& fn, const Rational& threshold, const ParamsLadder& params,
                    const SubdivisionOptions& opt, const std::function<bool()>& cancelled) {
  Outcome out;
  std::vector<Node> stack{root};
  std::vector<Node> children;
  const int base = opt.ladder.front();
  while (!stack.empty()) {
    if ((out.evaluations & 63) == 0 && cancelled()) return out;
    Node node = std::move(stack.back());
    stack.pop_back();
    ++out.evaluations;
    const auto ev = evaluate_box(fn, node.box, threshold, params.at(base), base);
    if (ev.certified) {
      out.leaves.push_back({node.path, Leaf{node.box, ev.bound_lo, base}, node_depth(node)});
      continue;
    }
    children.clear();
    if (!resolve_failed(node, fn, threshold, params, opt, children, out.leaves, out.evaluations)) {
      out.offending = node.box;
      return out;
    }
    // Right child first so the left subtree is processed (and emitted) first.
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
  }
  return out;
}

}  // namespace

Box Box::line(double lo, double hi) {
  Box b;
  b.dim = 1;
  b.lo = {lo, 0.0};
  b.hi = {hi, 0.0};
  return b;
}

Box Box::rect(double xlo, double xhi, double ylo, double yhi) {
  Box b;
  b.dim = 2;
  b.lo = {xlo, ylo};
  b.hi = {xhi, yhi};
  return b;
}

Interval Box::coord(int axis) const { return Interval(lo[axis], hi[axis]); }
Interval Box::lower(int axis) const { return Interval(lo[axis]); }
Interval Box::upper(int axis) const { return Interval(hi[axis]); }

std::string to_string(const Box& b) {
  char buf[128];
  if (b.dim == 1) {
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", b.lo[0], b.hi[0]);
  } else {
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g] x [%.17g, %.17g]", b.lo[0], b.hi[0], b.lo[1], b.hi[1]);
  }
  return buf;
}

std::optional<Split> split_box(const Box& b, const std::array<int, 2>& depth, int max_depth) {
  int axis = 0;
  if (b.dim == 2 && (b.hi[1] - b.lo[1]) > (b.hi[0] - b.lo[0])) axis = 1;
  if (depth[axis] >= max_depth) return std::nullopt;
  const double mid = 0.5 * b.lo[axis] + 0.5 * b.hi[axis];
  if (!(b.lo[axis] < mid && mid < b.hi[axis])) return std::nullopt;
  Split s{axis, b, b};
  s.left.hi[axis] = mid;
  s.right.lo[axis] = mid;
  return s;
}

ParamsLadder::ParamsLadder(const Rational& w, const std::vector<int>& ladder) {
  for (int p : ladder) {
    by_precision_[p] = std::make_shared<const BellmanParams>(BellmanParams::make(w, Precision(std::max(128, p))));
  }
}

const BellmanParams& ParamsLadder::at(int precision) const {
  auto it = by_precision_.find(precision);
  if (it == by_precision_.end()) throw LookupError("precision not on the ladder: " + std::to_string(precision));
  return *it->second;
}

Evaluation evaluate_box(const BoundFn& fn, const Box& box, const Rational& threshold, const BellmanParams& params,
                        int precision) {
  PrecisionScope scope{Precision(precision)};
  try {
    const Interval v = fn(box, params);
    return {certainly_gt(v, threshold), v.lo_double()};
  } catch (const Error&) {
    return {false, -std::numeric_limits<double>::infinity()};
  }
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

SubdivisionResult subdivide(const Box& region, const BoundFn& fn, const Rational& threshold, const ParamsLadder& params,
                            const SubdivisionOptions& opt) {
  if (opt.ladder.empty()) throw DomainError("empty precision ladder");
  if (opt.max_depth < 1) throw DomainError("max_depth must be at least 1");

  SubdivisionResult result;
  std::vector<PathLeaf> leaves;
  std::vector<Node> frontier{Node{region, {0, 0}, ""}};
  const int base = opt.ladder.front();

  for (int level = 0; level < kBreadthFirstLevels && !frontier.empty(); ++level) {
    std::vector<Evaluation> evals(frontier.size());
    parallel_for(frontier.size(), opt.jobs, [&](std::size_t i) {
      evals[i] = evaluate_box(fn, frontier[i].box, threshold, params.at(base), base);
    });
    result.evaluations += frontier.size();
    std::vector<Node> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const Node& node = frontier[i];
      if (evals[i].certified) {
        leaves.push_back({node.path, Leaf{node.box, evals[i].bound_lo, base}, node_depth(node)});
        continue;
      }
      if (!resolve_failed(node, fn, threshold, params, opt, next, leaves, result.evaluations)) {
        result.offending = node.box;
        return result;
      }
    }
    frontier = std::move(next);
  }

  std::vector<Outcome> outcomes(frontier.size());
  std::atomic<std::size_t> first_failure{std::numeric_limits<std::size_t>::max()};
  parallel_for(frontier.size(), opt.jobs, [&](std::size_t i) {
    if (first_failure.load() < i) return;
    outcomes[i] = depth_first(frontier[i], fn, threshold, params, opt, [&] { return first_failure.load() < i; });
    if (outcomes[i].offending) {
      std::size_t cur = first_failure.load();
      while (i < cur && !first_failure.compare_exchange_weak(cur, i)) {
      }
    }
  });
  for (const auto& o : outcomes) result.evaluations += o.evaluations;
  if (first_failure.load() != std::numeric_limits<std::size_t>::max()) {
    result.offending = outcomes[first_failure.load()].offending;
    return result;
  }
  for (auto& o : outcomes) {
    for (auto& l : o.leaves) leaves.push_back(std::move(l));
  }

  std::sort(leaves.begin(), leaves.end(), [](const PathLeaf& a, const PathLeaf& b) { return a.path < b.path; });
  result.leaves.reserve(leaves.size());
  result.min_bound = std::numeric_limits<double>::infinity();
  for (auto& l : leaves) {
    result.max_depth_reached = std::max(result.max_depth_reached, l.depth);
    result.min_bound = std::min(result.min_bound, l.leaf.bound_lo);
    result.leaves.push_back(std::move(l.leaf));
  }
  result.verified = true;
  return result;
}

SubdivisionResult subdivide(const Box& region, const BoundFn& fn, const Rational& threshold, const Rational& w,
                            const SubdivisionOptions& options) {
  return subdivide(region, fn, threshold, ParamsLadder(w, options.ladder), options);
}

}  // namespace isoperim
