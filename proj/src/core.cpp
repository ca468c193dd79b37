#include "avass/core.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace avass {

Configuration apply_transition(const Transition& t, const Configuration& c) {
  if (c.state != t.src)
    throw state_mismatch_error("apply_transition: configuration is not at src(t)");
  if (t.mat.dim() != c.values.dim())
    throw dimension_error("apply_transition: dimension mismatch");
  return Configuration{t.tgt, t.mat * c.values + t.vec};
}

std::pair<IntMatrix, IntVector> word_effect(std::span<const Transition> w,
                                            const IntVector& u) {
  const int d = u.dim();
  IntMatrix m = IntMatrix::identity(d);
  IntVector x = u;
  for (const Transition& t : w) {
    if (t.mat.dim() != d) throw dimension_error("word_effect: dimension mismatch");
    m = t.mat * m;              // M(wt) = M(t)·M(w)
    x = t.mat * x + t.vec;
  }
  return {std::move(m), std::move(x)};
}

MatrixClassSet classify_matrix(const IntMatrix& m) {
  MatrixClassSet cs;
  for (const Int& x : m.a)
    if (x != 0 && x != 1) return cs;  // non-{0,1}: everything false

  const int d = m.dim();
  bool off_diag_zero = true;
  std::vector<int> row_ones(static_cast<std::size_t>(d), 0);
  std::vector<int> col_ones(static_cast<std::size_t>(d), 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (m.at(i, j) == 1) {
        ++row_ones[static_cast<std::size_t>(i)];
        ++col_ones[static_cast<std::size_t>(j)];
        if (i != j) off_diag_zero = false;
      }

  bool rows_exactly_one = true, cols_exactly_one = true, cols_at_most_one = true;
  for (int i = 0; i < d; ++i) {
    if (row_ones[static_cast<std::size_t>(i)] != 1) rows_exactly_one = false;
    if (col_ones[static_cast<std::size_t>(i)] != 1) cols_exactly_one = false;
    if (col_ones[static_cast<std::size_t>(i)] > 1) cols_at_most_one = false;
  }

  cs.reset = off_diag_zero;
  cs.permutation = rows_exactly_one && cols_exactly_one;
  cs.transfer = cols_exactly_one;
  cs.copyless = cols_at_most_one;
  cs.copy = rows_exactly_one;
  cs.identity = m.is_identity();
  return cs;
}

MatrixClassSet classify_vass(const AffineVass& v) {
  MatrixClassSet cs{true, true, true, true, true, true};
  for (const Transition& t : v.transitions) {
    MatrixClassSet m = classify_matrix(t.mat);
    cs.reset &= m.reset;
    cs.permutation &= m.permutation;
    cs.transfer &= m.transfer;
    cs.copyless &= m.copyless;
    cs.copy &= m.copy;
    cs.identity &= m.identity;
  }
  return cs;
}

Int vass_size(const AffineVass& v) {
  const Int d = v.dim;
  Int log_factor = static_cast<long>(bit_length(v.transition_norm()));
  if (log_factor < 1) log_factor = 1;  // ceil(log2(||T||+1)) = bitlength(||T||)
  return d + v.num_states() + (d * d + d) * v.num_transitions() * log_factor;
}

ReplayResult replay(const AffineVass& v, const Run& r) {
  ReplayResult res;
  res.configs.push_back(r.start);
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    int ti = r.steps[i];
    if (ti < 0 || ti >= v.num_transitions()) {
      res.ok = false;
      res.failed_step = i;
      return res;
    }
    const Transition& t = v.transitions[static_cast<std::size_t>(ti)];
    const Configuration& cur = res.configs.back();
    if (cur.state != t.src || t.mat.dim() != cur.values.dim()) {
      res.ok = false;
      res.failed_step = i;
      return res;
    }
    res.configs.push_back(apply_transition(t, cur));
  }
  return res;
}

namespace {

struct SearchNode {
  Configuration config;
  long parent;   // index into node list, -1 for root
  int via;       // transition index taken from parent
};

// Shared BFS engine: expands nodes in breadth order, dedupes on (state, values),
// prunes (but counts) configurations whose norm exceeds the bound.
template <typename Visit>
SearchStats bfs_engine(const AffineVass& v, const Configuration& from,
                       const SearchBounds& bounds, std::vector<SearchNode>& nodes,
                       Visit visit) {
  SearchStats stats;
  std::map<Configuration, long> seen;

  std::vector<std::vector<int>> out(static_cast<std::size_t>(v.num_states()));
  for (int i = 0; i < v.num_transitions(); ++i)
    out[static_cast<std::size_t>(v.transitions[static_cast<std::size_t>(i)].src)]
        .push_back(i);

  nodes.push_back(SearchNode{from, -1, -1});
  seen.emplace(from, 0);
  stats.visited = 1;
  if (!visit(0)) return stats;

  std::deque<std::pair<long, long>> queue;  // (node index, depth)
  queue.emplace_back(0, 0);
  while (!queue.empty()) {
    auto [ni, depth] = queue.front();
    queue.pop_front();
    if (depth >= bounds.max_steps) continue;
    Configuration cur = nodes[static_cast<std::size_t>(ni)].config;
    for (int ti : out[static_cast<std::size_t>(cur.state)]) {
      Configuration next =
          apply_transition(v.transitions[static_cast<std::size_t>(ti)], cur);
      if (next.values.norm() > bounds.max_abs_value) {
        stats.pruned = true;
        continue;
      }
      if (seen.count(next)) continue;
      if (stats.visited >= bounds.max_visited) {
        stats.hit_visit_cap = true;
        return stats;
      }
      long idx = static_cast<long>(nodes.size());
      nodes.push_back(SearchNode{next, ni, ti});
      seen.emplace(std::move(next), idx);
      ++stats.visited;
      if (!visit(idx)) return stats;
      queue.emplace_back(idx, depth + 1);
    }
  }
  return stats;
}

Run extract_run(const std::vector<SearchNode>& nodes, long idx,
                const Configuration& from) {
  std::vector<int> steps;
  for (long i = idx; nodes[static_cast<std::size_t>(i)].parent >= 0;
       i = nodes[static_cast<std::size_t>(i)].parent)
    steps.push_back(nodes[static_cast<std::size_t>(i)].via);
  std::reverse(steps.begin(), steps.end());
  return Run{from, std::move(steps)};
}

}  // namespace

BfsResult bfs_reach(const AffineVass& v, const Configuration& from,
                    const Configuration& to, const SearchBounds& bounds) {
  v.check_state(from.state);
  v.check_state(to.state);
  BfsResult res;
  std::vector<SearchNode> nodes;
  long hit = -1;
  res.stats = bfs_engine(v, from, bounds, nodes, [&](long idx) {
    if (nodes[static_cast<std::size_t>(idx)].config == to) {
      hit = idx;
      return false;
    }
    return true;
  });
  if (hit >= 0) {
    res.found = true;
    res.run = extract_run(nodes, hit, from);
  }
  return res;
}

std::vector<Configuration> bfs_explore(const AffineVass& v, const Configuration& from,
                                       const SearchBounds& bounds, SearchStats* stats) {
  std::vector<SearchNode> nodes;
  SearchStats st = bfs_engine(v, from, bounds, nodes, [](long) { return true; });
  if (stats) *stats = st;
  std::vector<Configuration> out;
  out.reserve(nodes.size());
  for (const SearchNode& n : nodes) out.push_back(n.config);
  return out;
}

}  // namespace avass
