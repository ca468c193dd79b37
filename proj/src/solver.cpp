#include "avass/solver.hpp"

#include <algorithm>
#include <deque>
#include <tuple>
#include <functional>
#include <set>

#include "avass/c1.hpp"
#include "avass/dioph.hpp"
#include "avass/errors.hpp"
#include "avass/reduce.hpp"

namespace avass {

namespace {

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

// Support-closure search: per particular solution, keep the maximal period
// subset whose joint support stays inside the component of p, and succeed
// when the particular's own support sits in that component too. Complete:
// any realizable Parikh vector decomposes into a particular plus periods
// whose supports all lie inside its connected support, and that family
// survives every filtering round.
struct SupportClosure {
  const std::vector<int>& edge_src;
  const std::vector<int>& edge_tgt;
  int num_states;

  std::optional<std::vector<int>> usable_periods(const IntVector& particular,
                                                 const std::vector<IntVector>& periods,
                                                 StateId p) const {
    std::vector<int> usable(periods.size(), 1);
    for (;;) {
      DisjointSet ds(num_states);
      auto add_support = [&](const IntVector& x) {
        for (int e = 0; e < x.dim(); ++e)
          if (x[e] != 0)
            ds.unite(edge_src[static_cast<std::size_t>(e)],
                     edge_tgt[static_cast<std::size_t>(e)]);
      };
      add_support(particular);
      for (std::size_t i = 0; i < periods.size(); ++i)
        if (usable[i]) add_support(periods[i]);

      int root = ds.find(p);
      bool p_touched = false;
      bool ok = true;
      for (int e = 0; e < particular.dim() && ok; ++e) {
        if (particular[e] == 0) continue;
        if (ds.find(edge_src[static_cast<std::size_t>(e)]) != root) ok = false;
        if (edge_src[static_cast<std::size_t>(e)] == p ||
            edge_tgt[static_cast<std::size_t>(e)] == p)
          p_touched = true;
      }
      if (!ok) return std::nullopt;

      bool changed = false;
      for (std::size_t i = 0; i < periods.size(); ++i) {
        if (!usable[i]) continue;
        for (int e = 0; e < periods[i].dim(); ++e) {
          if (periods[i][e] == 0) continue;
          if (ds.find(edge_src[static_cast<std::size_t>(e)]) != root) {
            usable[i] = 0;
            changed = true;
            break;
          }
          if (edge_src[static_cast<std::size_t>(e)] == p ||
              edge_tgt[static_cast<std::size_t>(e)] == p)
            p_touched = true;
        }
      }
      if (changed) continue;

      if (!p_touched) return std::nullopt;
      std::vector<int> out;
      for (std::size_t i = 0; i < periods.size(); ++i)
        if (usable[i]) out.push_back(static_cast<int>(i));
      minimize(particular, periods, out, p);
      return out;
    }
  }

  // admissible: supp(particular) plus the chosen period supports forms one
  // connected component containing p
  bool admissible(const IntVector& particular, const std::vector<IntVector>& periods,
                  const std::vector<int>& chosen, StateId p) const {
    DisjointSet ds(num_states);
    auto add_support = [&](const IntVector& x) {
      for (int e = 0; e < x.dim(); ++e)
        if (x[e] != 0)
          ds.unite(edge_src[static_cast<std::size_t>(e)],
                   edge_tgt[static_cast<std::size_t>(e)]);
    };
    add_support(particular);
    for (int i : chosen) add_support(periods[static_cast<std::size_t>(i)]);

    int root = ds.find(p);
    bool p_touched = false;
    auto check_support = [&](const IntVector& x) {
      for (int e = 0; e < x.dim(); ++e) {
        if (x[e] == 0) continue;
        if (ds.find(edge_src[static_cast<std::size_t>(e)]) != root) return false;
        if (edge_src[static_cast<std::size_t>(e)] == p ||
            edge_tgt[static_cast<std::size_t>(e)] == p)
          p_touched = true;
      }
      return true;
    };
    if (!check_support(particular)) return false;
    for (int i : chosen)
      if (!check_support(periods[static_cast<std::size_t>(i)])) return false;
    return p_touched;
  }

  // greedily drop periods the connectivity does not need; keeps witnesses
  // close to the particular solution
  void minimize(const IntVector& particular, const std::vector<IntVector>& periods,
                std::vector<int>& chosen, StateId p) const {
    for (std::size_t i = chosen.size(); i-- > 0;) {
      std::vector<int> without = chosen;
      without.erase(without.begin() + static_cast<long>(i));
      if (admissible(particular, periods, without, p)) chosen = std::move(without);
    }
  }
};

// Working edge for the Parikh system: possibly a contracted chain of
// original transitions (flow forces equal multiplicity along a chain).
struct FlowEdge {
  StateId src;
  StateId tgt;
  IntVector vec;           // summed effect of the chain
  std::vector<int> chain;  // original transition indices in path order
};

// Iterated simplification: keep only edges on a p -> q corridor, merge
// duplicate parallels, and contract interior states with in/out degree one.
// Returns false when the state graph already separates p from q.
bool simplify_graph(const AffineVass& v, StateId p, StateId q,
                    std::vector<FlowEdge>& edges) {
  edges.clear();
  for (int ti = 0; ti < v.num_transitions(); ++ti) {
    const Transition& t = v.transitions[static_cast<std::size_t>(ti)];
    edges.push_back(FlowEdge{t.src, t.tgt, t.vec, {ti}});
  }

  const int n = v.num_states();
  bool changed = true;
  while (changed) {
    changed = false;

    // corridor pruning
    std::vector<char> fwd(static_cast<std::size_t>(n), 0);
    std::vector<char> bwd(static_cast<std::size_t>(n), 0);
    fwd[static_cast<std::size_t>(p)] = 1;
    bwd[static_cast<std::size_t>(q)] = 1;
    bool grow = true;
    while (grow) {
      grow = false;
      for (const FlowEdge& e : edges) {
        if (fwd[static_cast<std::size_t>(e.src)] &&
            !fwd[static_cast<std::size_t>(e.tgt)]) {
          fwd[static_cast<std::size_t>(e.tgt)] = 1;
          grow = true;
        }
        if (bwd[static_cast<std::size_t>(e.tgt)] &&
            !bwd[static_cast<std::size_t>(e.src)]) {
          bwd[static_cast<std::size_t>(e.src)] = 1;
          grow = true;
        }
      }
    }
    if (!fwd[static_cast<std::size_t>(q)] || !bwd[static_cast<std::size_t>(p)])
      return false;
    std::vector<FlowEdge> kept;
    for (FlowEdge& e : edges)
      if (fwd[static_cast<std::size_t>(e.src)] && fwd[static_cast<std::size_t>(e.tgt)] &&
          bwd[static_cast<std::size_t>(e.src)] && bwd[static_cast<std::size_t>(e.tgt)])
        kept.push_back(std::move(e));
    if (kept.size() != edges.size()) changed = true;
    edges = std::move(kept);

    // duplicate parallel edges are interchangeable for reachability
    {
      std::set<std::tuple<StateId, StateId, std::vector<Int>>> seen;
      std::vector<FlowEdge> unique;
      for (FlowEdge& e : edges) {
        if (seen.emplace(e.src, e.tgt, e.vec.e).second)
          unique.push_back(std::move(e));
        else
          changed = true;
      }
      edges = std::move(unique);
    }

    // contract one interior state with a single in and single out edge
    std::vector<int> in_deg(static_cast<std::size_t>(n), 0);
    std::vector<int> out_deg(static_cast<std::size_t>(n), 0);
    for (const FlowEdge& e : edges) {
      ++out_deg[static_cast<std::size_t>(e.src)];
      ++in_deg[static_cast<std::size_t>(e.tgt)];
    }
    for (StateId s = 0; s < n && !changed; ++s) {
      if (s == p || s == q) continue;
      if (in_deg[static_cast<std::size_t>(s)] != 1 ||
          out_deg[static_cast<std::size_t>(s)] != 1)
        continue;
      int in_e = -1, out_e = -1;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].tgt == s) in_e = static_cast<int>(i);
        if (edges[i].src == s) out_e = static_cast<int>(i);
      }
      if (in_e == out_e) continue;  // lone self-loop
      FlowEdge merged;
      merged.src = edges[static_cast<std::size_t>(in_e)].src;
      merged.tgt = edges[static_cast<std::size_t>(out_e)].tgt;
      merged.vec = edges[static_cast<std::size_t>(in_e)].vec +
                   edges[static_cast<std::size_t>(out_e)].vec;
      merged.chain = edges[static_cast<std::size_t>(in_e)].chain;
      merged.chain.insert(merged.chain.end(),
                          edges[static_cast<std::size_t>(out_e)].chain.begin(),
                          edges[static_cast<std::size_t>(out_e)].chain.end());
      std::vector<FlowEdge> next;
      for (std::size_t i = 0; i < edges.size(); ++i)
        if (static_cast<int>(i) != in_e && static_cast<int>(i) != out_e)
          next.push_back(std::move(edges[i]));
      next.push_back(std::move(merged));
      edges = std::move(next);
      changed = true;
    }
  }
  return true;
}

// Euler path over flow edges with the given multiplicities (Hierholzer),
// expanded back to original transition indices.
std::vector<int> euler_path(const std::vector<FlowEdge>& edges,
                            std::vector<Int> remaining, StateId p, int num_states) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(num_states));
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (remaining[i] > 0)
      out[static_cast<std::size_t>(edges[i].src)].push_back(static_cast<int>(i));

  std::vector<int> path;
  std::vector<std::pair<StateId, int>> stack{{p, -1}};
  while (!stack.empty()) {
    auto [cur, via] = stack.back();
    int next = -1;
    for (int ei : out[static_cast<std::size_t>(cur)])
      if (remaining[static_cast<std::size_t>(ei)] > 0) {
        next = ei;
        break;
      }
    if (next >= 0) {
      --remaining[static_cast<std::size_t>(next)];
      stack.emplace_back(edges[static_cast<std::size_t>(next)].tgt, next);
    } else {
      stack.pop_back();
      if (via >= 0) path.push_back(via);
    }
  }
  std::reverse(path.begin(), path.end());

  std::vector<int> steps;
  for (int ei : path)
    for (int ti : edges[static_cast<std::size_t>(ei)].chain) steps.push_back(ti);
  return steps;
}

}  // namespace

Verdict reach_zvass(const AffineVass& v, StateId p, const IntVector& u, StateId q,
                    const IntVector& v_target) {
  if (!v.all_identity())
    throw precondition_error("reach_zvass: non-identity transition matrix");
  v.check_state(p);
  v.check_state(q);
  if (u.dim() != v.dim || v_target.dim() != v.dim)
    throw dimension_error("reach_zvass: vector dimension");

  Verdict verdict;
  if (p == q && u == v_target) {
    verdict.kind = Verdict::Kind::reachable;
    verdict.witness = ParikhWitness{{}, Run{Configuration{p, u}, {}}};
    verdict.note = "empty run";
    return verdict;
  }

  // corridor pruning, parallel dedup, chain contraction
  std::vector<FlowEdge> edges;
  if (!simplify_graph(v, p, q, edges) || edges.empty()) {
    verdict.kind = Verdict::Kind::unreachable;
    verdict.note = "state graph disconnects p from q";
    return verdict;
  }

  // flow balance per state plus d effect rows
  const int k = static_cast<int>(edges.size());
  const int d = v.dim;
  DioSystem sys(v.num_states() + d, k);
  for (int j = 0; j < k; ++j) {
    const FlowEdge& e = edges[static_cast<std::size_t>(j)];
    sys.at(e.tgt, j) += 1;
    sys.at(e.src, j) -= 1;
    for (int i = 0; i < d; ++i) sys.at(v.num_states() + i, j) = e.vec[i];
  }
  sys.c[static_cast<std::size_t>(q)] += 1;
  sys.c[static_cast<std::size_t>(p)] -= 1;
  for (int i = 0; i < d; ++i)
    sys.c[static_cast<std::size_t>(v.num_states() + i)] = v_target[i] - u[i];

  SolutionBasis basis = minimal_solutions(sys);
  if (basis.particulars.empty()) {
    verdict.kind = Verdict::Kind::unreachable;
    verdict.note = "flow and effect equations are infeasible";
    return verdict;
  }

  std::vector<int> edge_src, edge_tgt;
  for (const FlowEdge& e : edges) {
    edge_src.push_back(e.src);
    edge_tgt.push_back(e.tgt);
  }
  SupportClosure closure{edge_src, edge_tgt, v.num_states()};

  for (const IntVector& m : basis.particulars) {
    ++verdict.particulars_checked;
    std::optional<std::vector<int>> picked =
        closure.usable_periods(m, basis.periods, p);
    if (!picked) continue;

    IntVector x = m;
    for (int pi : *picked) x = x + basis.periods[static_cast<std::size_t>(pi)];

    std::vector<Int> mult(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) mult[static_cast<std::size_t>(j)] = x[j];
    std::vector<int> steps = euler_path(edges, std::move(mult), p, v.num_states());

    Run run{Configuration{p, u}, std::move(steps)};
    ReplayResult rep = replay(v, run);
    if (!rep.ok || !(rep.final_config() == Configuration{q, v_target}))
      throw internal_error("reach_zvass: Euler reconstruction failed to replay");

    ParikhWitness w;
    for (int s : run.steps) {
      auto [it, inserted] = w.counts.emplace(s, Int(1));
      if (!inserted) it->second += 1;
    }
    w.run = std::move(run);
    verdict.kind = Verdict::Kind::reachable;
    verdict.witness = std::move(w);
    return verdict;
  }

  verdict.kind = Verdict::Kind::unreachable;
  verdict.note = "no particular solution admits a connected support through p (" +
                 std::to_string(basis.particulars.size()) + " particulars, " +
                 std::to_string(basis.periods.size()) + " periods)";
  return verdict;
}

namespace {

// Shared by reach_affine and reach_reset: query the from-origin system per
// monoid element and map the witness back to an original run (the reduced
// word read backwards).
std::optional<Verdict> solve_via_origin(const AffineVass& v,
                                        const FromOriginVass& origin,
                                        const MatrixMonoid& monoid, StateId p,
                                        const IntVector& u, StateId q,
                                        const IntVector& v_target) {
  long particulars = 0;
  for (int e = 0; e < monoid.size(); ++e) {
    const IntMatrix& a = monoid.elements[static_cast<std::size_t>(e)];
    IntVector target = v_target - a * u;
    Verdict sub = reach_zvass(origin.vass, origin.pair_state(q, 0),
                              IntVector::zero(v.dim), origin.pair_state(p, e), target);
    particulars += sub.particulars_checked;
    if (!sub.reachable()) continue;

    std::vector<int> steps;
    for (auto it = sub.witness->run.steps.rbegin();
         it != sub.witness->run.steps.rend(); ++it)
      steps.push_back(origin.source_transition[static_cast<std::size_t>(*it)]);
    Run run{Configuration{p, u}, std::move(steps)};
    ReplayResult rep = replay(v, run);
    if (!rep.ok || !(rep.final_config() == Configuration{q, v_target}))
      throw internal_error("solve_via_origin: witness mapping failed to replay");

    Verdict out;
    out.kind = Verdict::Kind::reachable;
    ParikhWitness w;
    for (int s : run.steps) {
      auto [it2, inserted] = w.counts.emplace(s, Int(1));
      if (!inserted) it2->second += 1;
    }
    w.run = std::move(run);
    out.witness = std::move(w);
    out.hint = FormulaHint{e, sub.witness->counts};
    out.particulars_checked = particulars;
    return out;
  }
  return std::nullopt;
}

bool is_reset_matrix(const IntMatrix& m) {
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) {
      const Int& x = m.at(i, j);
      if (i == j ? (x != 0 && x != 1) : (x != 0)) return false;
    }
  return true;
}

Verdict empty_run_verdict(StateId p, const IntVector& u) {
  Verdict verdict;
  verdict.kind = Verdict::Kind::reachable;
  verdict.witness = ParikhWitness{{}, Run{Configuration{p, u}, {}}};
  verdict.note = "empty run";
  return verdict;
}

}  // namespace

Verdict reach_affine(const AffineVass& v, StateId p, const IntVector& u, StateId q,
                     const IntVector& v_target, const SolveCaps& caps) {
  v.check_state(p);
  v.check_state(q);

  if (p == q && u == v_target) return empty_run_verdict(p, u);
  if (v.all_identity()) {
    Verdict verdict = reach_zvass(v, p, u, q, v_target);
    // the from-origin system of an identity-only system keeps transition
    // indices, so the counts instantiate formula disjuncts directly
    if (verdict.reachable() && !verdict.witness->run.steps.empty())
      verdict.hint = FormulaHint{0, verdict.witness->counts};
    return verdict;
  }

  std::vector<IntMatrix> gens;
  for (const Transition& t : v.transitions) gens.push_back(t.mat);
  FinitenessResult fin = decide_finiteness(v.dim, gens, caps.monoid_cap);

  if (fin.kind == FinitenessResult::Kind::finite) {
    FromOriginVass origin = reduce_from_origin(v, fin.monoid);
    std::optional<Verdict> hit =
        solve_via_origin(v, origin, fin.monoid, p, u, q, v_target);
    Verdict verdict;
    if (hit) {
      verdict = std::move(*hit);
    } else {
      verdict.kind = Verdict::Kind::unreachable;
      verdict.note = "no monoid element admits a realizable Parikh flow";
    }
    verdict.monoid_size = fin.monoid.size();
    verdict.monoid_norm = fin.monoid.norm();
    return verdict;
  }

  if (fin.kind == FinitenessResult::Kind::infinite && is_c1(v)) {
    C1System sys = normalize_c1(v);
    Verdict verdict = decide_c1(sys, p, u, q, v_target, caps.c1_depth);
    verdict.note = "C1 route: " + verdict.note;
    return verdict;
  }

  Verdict verdict;
  verdict.kind = Verdict::Kind::unknown;
  verdict.note = fin.kind == FinitenessResult::Kind::infinite
                     ? "infinite monoid outside the decidable classes"
                     : "monoid finiteness undecided under the cap";
  if (caps.oracle) {
    BfsResult res =
        bfs_reach(v, Configuration{p, u}, Configuration{q, v_target}, *caps.oracle);
    if (res.found) {
      verdict.kind = Verdict::Kind::reachable;
      ParikhWitness w;
      for (int s : res.run.steps) {
        auto [it, inserted] = w.counts.emplace(s, Int(1));
        if (!inserted) it->second += 1;
      }
      w.run = res.run;
      verdict.witness = std::move(w);
      verdict.note += "; bounded oracle found a run";
    } else {
      verdict.note += res.exhaustive()
                          ? "; bounded oracle exhausted the space"
                          : "; bounded oracle gave up (pruned or capped)";
    }
  }
  return verdict;
}

Verdict reach_reset(const AffineVass& v, StateId p, const IntVector& u, StateId q,
                    const IntVector& v_target) {
  for (const Transition& t : v.transitions)
    if (!is_reset_matrix(t.mat))
      throw precondition_error("reach_reset: non-reset transition matrix");
  if (v.dim > 62) throw precondition_error("reach_reset: dimension too large");

  if (p == q && u == v_target) return empty_run_verdict(p, u);

  const int d = v.dim;
  const unsigned long full = (1UL << d) - 1;
  auto mask_of = [&](const IntMatrix& m) {
    unsigned long mask = 0;
    for (int i = 0; i < d; ++i)
      if (m.at(i, i) == 1) mask |= 1UL << i;
    return mask;
  };
  auto matrix_of = [&](unsigned long mask) {
    IntMatrix m(d);
    for (int i = 0; i < d; ++i)
      if (mask & (1UL << i)) m.at(i, i) = 1;
    return m;
  };

  // meet-closure of the generator supports, BFS order from the full support
  std::vector<unsigned long> closure{full};
  std::set<unsigned long> seen{full};
  std::vector<unsigned long> gen_masks;
  for (const Transition& t : v.transitions) gen_masks.push_back(mask_of(t.mat));
  for (std::size_t i = 0; i < closure.size(); ++i)
    for (unsigned long g : gen_masks) {
      unsigned long meet = closure[i] & g;
      if (seen.insert(meet).second) closure.push_back(meet);
    }

  // a chain is determined by its element set (subset order is total on it)
  std::vector<std::vector<unsigned long>> chains;
  std::vector<unsigned long> cur{full};
  std::function<void()> extend = [&]() {
    chains.push_back(cur);
    for (unsigned long m : closure) {
      unsigned long last = cur.back();
      if (m != last && (m & last) == m) {
        cur.push_back(m);
        extend();
        cur.pop_back();
      }
    }
  };
  extend();

  for (const std::vector<unsigned long>& chain : chains) {
    MatrixMonoid cm;
    cm.dim = d;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      IntMatrix m = matrix_of(chain[i]);
      cm.index_.emplace(m, static_cast<int>(i));
      cm.elements.push_back(std::move(m));
      cm.words.push_back({});
    }
    cm.status = MatrixMonoid::Status::finite;

    FromOriginVass origin = reduce_from_origin(v, cm, /*drop_missing_products=*/true);
    std::optional<Verdict> hit = solve_via_origin(v, origin, cm, p, u, q, v_target);
    if (hit) {
      hit->note = "reset chain of length " + std::to_string(chain.size());
      return std::move(*hit);
    }
  }
  Verdict verdict;
  verdict.kind = Verdict::Kind::unreachable;
  verdict.note =
      "all " + std::to_string(chains.size()) + " support chains are infeasible";
  return verdict;
}

std::vector<std::vector<int>> connected_supports(
    const std::vector<std::pair<StateId, StateId>>& edges, StateId root,
    std::optional<StateId> must_touch) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(edges.size());

  std::multiset<StateId> vertices;  // multiset: cheap add/remove on backtrack
  std::vector<char> in_set(static_cast<std::size_t>(n), 0);
  std::vector<int> current;

  auto touches = [&](int e) {
    return vertices.count(edges[static_cast<std::size_t>(e)].first) > 0 ||
           vertices.count(edges[static_cast<std::size_t>(e)].second) > 0;
  };

  // classic connected-subgraph enumeration: each recursion level picks one
  // frontier edge and forbids the ones considered before it
  std::function<void(std::vector<char>&)> rec = [&](std::vector<char>& forbidden) {
    if (!current.empty()) {
      if (!must_touch || vertices.count(*must_touch) > 0) {
        std::vector<int> sorted = current;
        std::sort(sorted.begin(), sorted.end());
        out.push_back(std::move(sorted));
      }
    }
    std::vector<int> frontier;
    for (int e = 0; e < n; ++e)
      if (!in_set[static_cast<std::size_t>(e)] &&
          !forbidden[static_cast<std::size_t>(e)] &&
          (current.empty() ? (edges[static_cast<std::size_t>(e)].first == root ||
                              edges[static_cast<std::size_t>(e)].second == root)
                           : touches(e)))
        frontier.push_back(e);

    std::vector<char> forbid_next = forbidden;
    for (int e : frontier) {
      in_set[static_cast<std::size_t>(e)] = 1;
      current.push_back(e);
      vertices.insert(edges[static_cast<std::size_t>(e)].first);
      vertices.insert(edges[static_cast<std::size_t>(e)].second);

      rec(forbid_next);

      vertices.erase(vertices.find(edges[static_cast<std::size_t>(e)].first));
      vertices.erase(vertices.find(edges[static_cast<std::size_t>(e)].second));
      current.pop_back();
      in_set[static_cast<std::size_t>(e)] = 0;
      forbid_next[static_cast<std::size_t>(e)] = 1;
    }
  };

  std::vector<char> forbidden(static_cast<std::size_t>(n), 0);
  rec(forbidden);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace avass
