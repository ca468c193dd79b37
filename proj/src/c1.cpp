#include "avass/c1.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "avass/dioph.hpp"
#include "avass/errors.hpp"

namespace avass {

namespace {

Int delta(const IntVector& v) {
  Int s = 0;
  for (int i = 0; i < v.dim(); ++i) s += v[i];
  return s;
}

// n >= 1 with A = d^{n-1}·1_d, or 0 when A is no such power.
int ones_power(const IntMatrix& m, int d) {
  const Int& c = m.at(0, 0);
  for (const Int& x : m.a)
    if (x != c) return 0;
  if (c < 1) return 0;
  if (d == 1) return c == 1 ? 1 : 0;
  int n = 1;
  Int x = c;
  while (x > 1) {
    if (x % d != 0) return 0;
    x /= d;
    ++n;
  }
  return n;
}

}  // namespace

bool is_c1(const AffineVass& v) {
  for (const Transition& t : v.transitions) {
    if (t.mat.is_identity()) continue;
    if (ones_power(t.mat, v.dim) == 0) return false;
  }
  return true;
}

C1System normalize_c1(const AffineVass& v) {
  if (!is_c1(v)) throw precondition_error("normalize_c1: system is not in C1");
  const int d = v.dim;
  C1System sys;
  sys.base = AffineVass(d);
  for (const std::string& s : v.states) sys.base.add_state(s);

  const IntMatrix id = IntMatrix::identity(d);
  const IntMatrix ones = IntMatrix::ones(d);
  for (int ti = 0; ti < v.num_transitions(); ++ti) {
    const Transition& t = v.transitions[static_cast<std::size_t>(ti)];
    if (t.mat.is_identity()) {
      int idx = sys.base.add_transition(t.src, t.tgt, t.vec);
      sys.t_identity.push_back(idx);
      sys.source_transition.push_back(ti);
      continue;
    }
    int n = ones_power(t.mat, d);
    // chain of n all-ones steps, then the vector if present
    StateId cur = t.src;
    bool tail_vec = !t.vec.is_zero();
    for (int k = 0; k < n; ++k) {
      StateId next;
      if (k + 1 == n && !tail_vec)
        next = t.tgt;
      else
        next = sys.base.add_state("t" + std::to_string(ti) + "_s" + std::to_string(k));
      int idx = sys.base.add_transition(cur, next, ones, IntVector::zero(d));
      sys.t_ones.push_back(idx);
      sys.source_transition.push_back(ti);
      cur = next;
    }
    if (tail_vec) {
      int idx = sys.base.add_transition(cur, t.tgt, t.vec);
      sys.t_identity.push_back(idx);
      sys.source_transition.push_back(ti);
    }
  }
  return sys;
}

OneCounterNet delta_abstract(const C1System& sys) {
  OneCounterNet net;
  net.states = sys.base.states;
  std::set<int> ones(sys.t_ones.begin(), sys.t_ones.end());
  for (int ti = 0; ti < sys.base.num_transitions(); ++ti) {
    const Transition& t = sys.base.transitions[static_cast<std::size_t>(ti)];
    if (ones.count(ti))
      net.transitions.push_back(NetTransition{t.src, t.tgt, true, Int(sys.base.dim)});
    else
      net.transitions.push_back(NetTransition{t.src, t.tgt, false, delta(t.vec)});
  }
  return net;
}

namespace {

// The identity-transition shadow as a standalone Z-VASS; steps map back to
// base indices through tio_index.
struct TioRestriction {
  AffineVass vass;
  std::vector<int> tio_index;
};

TioRestriction tio_restriction(const C1System& sys) {
  TioRestriction r;
  r.vass = AffineVass(sys.base.dim);
  for (const std::string& s : sys.base.states) r.vass.add_state(s);
  for (int ti : sys.t_identity) {
    const Transition& t = sys.base.transitions[static_cast<std::size_t>(ti)];
    r.vass.add_transition(t.src, t.tgt, t.vec);
    r.tio_index.push_back(ti);
  }
  return r;
}

// 1-dimensional delta shadow of the identity transitions.
TioRestriction delta_shadow(const C1System& sys) {
  TioRestriction r;
  r.vass = AffineVass(1);
  for (const std::string& s : sys.base.states) r.vass.add_state(s);
  for (int ti : sys.t_identity) {
    const Transition& t = sys.base.transitions[static_cast<std::size_t>(ti)];
    r.vass.add_transition(t.src, t.tgt, IntVector{delta(t.vec)});
    r.tio_index.push_back(ti);
  }
  return r;
}

// T_I path from s to s' whose delta effect is exactly a (base step indices).
std::optional<std::vector<int>> tio_path_with_delta(const TioRestriction& shadow,
                                                    StateId s, StateId s_prime,
                                                    const Int& a) {
  Verdict v = reach_zvass(shadow.vass, s, IntVector{0}, s_prime, IntVector{a});
  if (!v.reachable()) return std::nullopt;
  std::vector<int> steps;
  for (int st : v.witness->run.steps)
    steps.push_back(shadow.tio_index[static_cast<std::size_t>(st)]);
  return steps;
}

}  // namespace

UPSet compute_S(const C1System& sys, StateId q, const IntVector& v, StateId r) {
  const int d = sys.base.dim;
  const int nq = sys.base.num_states();
  UPSet out;

  // empty path: r(n,...,n) = q(v) forces a constant target vector
  if (r == q) {
    bool constant = true;
    for (int i = 1; i < d; ++i)
      if (v[i] != v[0]) constant = false;
    if (constant) out = out.unite(UPSet::singleton(Int(d) * v[0]));
  }

  std::vector<std::pair<StateId, StateId>> ends;
  for (int ti : sys.t_identity) {
    const Transition& t = sys.base.transitions[static_cast<std::size_t>(ti)];
    ends.emplace_back(t.src, t.tgt);
  }
  std::vector<std::vector<int>> supports = connected_supports(ends, r, q);

  for (const std::vector<int>& sup : supports) {
    const int k = static_cast<int>(sup.size());
    // unknowns: x'_t for t in sup, then n+, n-
    DioSystem dsys(nq + d, k + 2);
    for (int j = 0; j < k; ++j) {
      const Transition& t = sys.base.transitions[static_cast<std::size_t>(
          sys.t_identity[static_cast<std::size_t>(sup[static_cast<std::size_t>(j)])])];
      dsys.at(t.tgt, j) += 1;
      dsys.at(t.src, j) -= 1;
      dsys.c[static_cast<std::size_t>(t.tgt)] -= 1;  // the mandatory 1_S copy
      dsys.c[static_cast<std::size_t>(t.src)] += 1;
      for (int i = 0; i < d; ++i) {
        dsys.at(nq + i, j) = t.vec[i];
        dsys.c[static_cast<std::size_t>(nq + i)] -= t.vec[i];
      }
    }
    dsys.c[static_cast<std::size_t>(q)] += 1;
    dsys.c[static_cast<std::size_t>(r)] -= 1;
    for (int i = 0; i < d; ++i) {
      dsys.at(nq + i, k) = 1;       // n+
      dsys.at(nq + i, k + 1) = -1;  // n-
      dsys.c[static_cast<std::size_t>(nq + i)] += v[i];
    }

    SolutionBasis basis = minimal_solutions(dsys);
    std::vector<Int> weights(static_cast<std::size_t>(k + 2), Int(0));
    weights[static_cast<std::size_t>(k)] = d;
    weights[static_cast<std::size_t>(k + 1)] = -d;
    out = out.unite(project_to_int(basis, weights));
  }
  return out;
}

namespace {

struct MulEdge {
  int base_index;
  StateId src;
  StateId tgt;
};

struct LevelContext {
  const C1System& sys;
  TioRestriction shadow;               // 1-d delta shadow of T_I
  std::vector<MulEdge> mul_edges;
  std::map<std::pair<StateId, StateId>, UPSet> add_cache;

  explicit LevelContext(const C1System& s) : sys(s), shadow(delta_shadow(s)) {
    for (int ti : s.t_ones) {
      const Transition& t = s.base.transitions[static_cast<std::size_t>(ti)];
      mul_edges.push_back(MulEdge{ti, t.src, t.tgt});
    }
  }

  // Add(s, s'): exact delta effects of T_I paths s -> s'
  const UPSet& add_set(StateId s, StateId s_prime) {
    auto key = std::make_pair(s, s_prime);
    auto it = add_cache.find(key);
    if (it != add_cache.end()) return it->second;

    UPSet out;
    if (s == s_prime) out = out.unite(UPSet::singleton(0));
    std::vector<std::pair<StateId, StateId>> ends;
    for (int ti : sys.t_identity) {
      const Transition& t = sys.base.transitions[static_cast<std::size_t>(ti)];
      ends.emplace_back(t.src, t.tgt);
    }
    const int nq = sys.base.num_states();
    for (const std::vector<int>& sup : connected_supports(ends, s, s_prime)) {
      const int k = static_cast<int>(sup.size());
      DioSystem dsys(nq, k);
      for (int j = 0; j < k; ++j) {
        const Transition& t = sys.base.transitions[static_cast<std::size_t>(
            sys.t_identity[static_cast<std::size_t>(
                sup[static_cast<std::size_t>(j)])])];
        dsys.at(t.tgt, j) += 1;
        dsys.at(t.src, j) -= 1;
        dsys.c[static_cast<std::size_t>(t.tgt)] -= 1;
        dsys.c[static_cast<std::size_t>(t.src)] += 1;
      }
      dsys.c[static_cast<std::size_t>(s_prime)] += 1;
      dsys.c[static_cast<std::size_t>(s)] -= 1;

      SolutionBasis basis = minimal_solutions(dsys);
      std::vector<Int> weights;
      for (int j = 0; j < k; ++j)
        weights.push_back(delta(
            sys.base
                .transitions[static_cast<std::size_t>(sys.t_identity[
                    static_cast<std::size_t>(sup[static_cast<std::size_t>(j)])])]
                .vec));
      out = out.unite(project_to_int(basis, weights));
    }
    return add_cache.emplace(key, std::move(out)).first->second;
  }
};

// Accumulated level iteration: levels[k-1][s] holds every counter value
// obtainable at s right after the k-th (or earlier) multiplicative step.
struct LevelEngine {
  LevelContext& ctx;
  std::vector<std::vector<UPSet>> levels;

  LevelEngine(LevelContext& c, StateId p, const Int& c0) : ctx(c) {
    const int nq = ctx.sys.base.num_states();
    const Int d(ctx.sys.base.dim);
    std::vector<UPSet> first(static_cast<std::size_t>(nq));
    for (const MulEdge& e : ctx.mul_edges) {
      UPSet pre = ctx.add_set(p, e.src).add_constant(c0).scaled(d);
      first[static_cast<std::size_t>(e.tgt)] =
          first[static_cast<std::size_t>(e.tgt)].unite(pre);
    }
    levels.push_back(std::move(first));
  }

  // extends by one level; false when the union was already stable
  bool step() {
    const int nq = ctx.sys.base.num_states();
    const Int d(ctx.sys.base.dim);
    std::vector<UPSet> next = levels.back();
    for (const MulEdge& e : ctx.mul_edges) {
      UPSet gathered;
      for (StateId s = 0; s < nq; ++s) {
        const UPSet& prev = levels.back()[static_cast<std::size_t>(s)];
        if (prev.is_empty()) continue;
        gathered = gathered.unite(prev.minkowski(ctx.add_set(s, e.src)));
      }
      if (!gathered.is_empty())
        next[static_cast<std::size_t>(e.tgt)] =
            next[static_cast<std::size_t>(e.tgt)].unite(gathered.scaled(d));
    }
    bool changed = false;
    for (StateId s = 0; s < nq; ++s)
      if (!next[static_cast<std::size_t>(s)].equal(
              levels.back()[static_cast<std::size_t>(s)]))
        changed = true;
    levels.push_back(std::move(next));
    return changed;
  }
};

}  // namespace

LevelSets compute_levels(const C1System& sys, StateId p, const IntVector& u,
                         int depth_cap) {
  LevelSets out;
  LevelContext ctx(sys);
  if (ctx.mul_edges.empty()) {
    out.levels.push_back(
        std::vector<UPSet>(static_cast<std::size_t>(sys.base.num_states())));
    out.status = LevelSets::Status::fixpoint_reached;
    out.fixpoint_level = 1;
    return out;
  }
  LevelEngine engine(ctx, p, [&] {
    Int s = 0;
    for (int i = 0; i < u.dim(); ++i) s += u[i];
    return s;
  }());
  int k = 1;
  while (k < depth_cap) {
    bool changed = engine.step();
    ++k;
    if (!changed) {
      out.status = LevelSets::Status::fixpoint_reached;
      out.fixpoint_level = k;
      break;
    }
  }
  if (out.fixpoint_level < 0) out.status = LevelSets::Status::depth_capped;
  out.levels = std::move(engine.levels);
  return out;
}

Verdict decide_c1(const C1System& sys, StateId p, const IntVector& u, StateId q,
                  const IntVector& v, int depth_cap) {
  const int d = sys.base.dim;
  Verdict verdict;

  if (p == q && u == v) {
    verdict.kind = Verdict::Kind::reachable;
    verdict.witness = ParikhWitness{{}, Run{Configuration{p, u}, {}}};
    verdict.note = "empty run";
    return verdict;
  }

  // condition (1): reachability within the identity transitions
  TioRestriction tio = tio_restriction(sys);
  Verdict cond1 = reach_zvass(tio.vass, p, u, q, v);
  if (cond1.reachable()) {
    ParikhWitness w;
    std::vector<int> steps;
    for (int st : cond1.witness->run.steps)
      steps.push_back(tio.tio_index[static_cast<std::size_t>(st)]);
    for (int st : steps) {
      auto [it, inserted] = w.counts.emplace(st, Int(1));
      if (!inserted) it->second += 1;
    }
    w.run = Run{Configuration{p, u}, std::move(steps)};
    verdict.kind = Verdict::Kind::reachable;
    verdict.witness = std::move(w);
    verdict.note = "condition (1): identity transitions suffice";
    verdict.levels = 0;
    return verdict;
  }

  LevelContext ctx(sys);
  if (ctx.mul_edges.empty()) {
    verdict.kind = Verdict::Kind::unreachable;
    verdict.note = "condition (1) fails and there are no ones transitions";
    verdict.levels = 0;
    return verdict;
  }

  const int nq = sys.base.num_states();
  const Int c0 = delta(u);

  // S_r per possible landing state of the last ones transition
  std::map<StateId, UPSet> s_sets;
  for (const MulEdge& e : ctx.mul_edges)
    if (!s_sets.count(e.tgt)) s_sets.emplace(e.tgt, compute_S(sys, q, v, e.tgt));

  LevelEngine engine(ctx, p, c0);
  const std::vector<std::vector<UPSet>>& levels = engine.levels;

  auto intersection_at = [&](int level_index)
      -> std::optional<std::pair<StateId, Int>> {
    for (const auto& [r, s_set] : s_sets) {
      std::optional<Int> m =
          levels[static_cast<std::size_t>(level_index)][static_cast<std::size_t>(r)]
              .intersect_nonempty(s_set);
      if (m) return std::make_pair(r, *m);
    }
    return std::nullopt;
  };

  int found_level = -1;
  StateId found_state = -1;
  Int found_value;
  bool fixpoint = false;
  int k = 1;
  if (auto hit = intersection_at(0)) {
    found_level = 1;
    found_state = hit->first;
    found_value = hit->second;
  }
  while (found_level < 0 && k < depth_cap) {
    bool changed = engine.step();
    ++k;
    if (auto hit = intersection_at(k - 1)) {
      found_level = k;
      found_state = hit->first;
      found_value = hit->second;
      break;
    }
    if (!changed) {
      fixpoint = true;
      break;
    }
  }

  verdict.levels = k;
  if (found_level < 0) {
    if (fixpoint) {
      verdict.kind = Verdict::Kind::unreachable;
      verdict.note = "level fixpoint reached at " + std::to_string(k) +
                     " with all intersections empty";
    } else {
      verdict.kind = Verdict::Kind::unknown;
      verdict.note = "depth cap " + std::to_string(depth_cap) + " reached";
    }
    return verdict;
  }

  // reconstruct a concrete run: unwind the levels down to c0, then the T_I
  // suffix from the constant vector to the target
  std::vector<int> steps;
  std::function<void(int, StateId, const Int&)> unwind = [&](int level, StateId r,
                                                             const Int& m) {
    // find the cheapest level where m already appears
    int at = level;
    while (at > 1 && levels[static_cast<std::size_t>(at - 2)][static_cast<std::size_t>(r)]
                         .member(m))
      --at;
    for (const MulEdge& e : ctx.mul_edges) {
      if (e.tgt != r) continue;
      Int y = m / d;  // counter value right before the multiplication
      if (y * d != m) continue;
      if (at == 1) {
        std::optional<std::vector<int>> seg =
            tio_path_with_delta(ctx.shadow, p, e.src, y - c0);
        if (!seg) continue;
        steps.insert(steps.end(), seg->begin(), seg->end());
        steps.push_back(e.base_index);
        return;
      }
      const std::vector<UPSet>& prev = levels[static_cast<std::size_t>(at - 2)];
      for (StateId s = 0; s < nq; ++s) {
        const UPSet& w = prev[static_cast<std::size_t>(s)];
        if (w.is_empty()) continue;
        UPSet candidates = ctx.add_set(s, e.src).negated().add_constant(y);
        std::optional<Int> x = w.intersect_nonempty(candidates);
        if (!x) continue;
        std::optional<std::vector<int>> seg =
            tio_path_with_delta(ctx.shadow, s, e.src, y - *x);
        if (!seg) continue;
        unwind(at - 1, s, *x);
        steps.insert(steps.end(), seg->begin(), seg->end());
        steps.push_back(e.base_index);
        return;
      }
    }
    throw internal_error("decide_c1: level decomposition has no witness");
  };
  unwind(found_level, found_state, found_value);

  // suffix: from found_state((m/d)·1) to q(v) over T_I
  Int n = found_value / d;
  IntVector constant(d);
  for (int i = 0; i < d; ++i) constant[i] = n;
  Verdict suffix = reach_zvass(tio.vass, found_state, constant, q, v);
  if (!suffix.reachable())
    throw internal_error("decide_c1: S-set witness has no realizing suffix");
  for (int st : suffix.witness->run.steps)
    steps.push_back(tio.tio_index[static_cast<std::size_t>(st)]);

  Run run{Configuration{p, u}, std::move(steps)};
  ReplayResult rep = replay(sys.base, run);
  if (!rep.ok || !(rep.final_config() == Configuration{q, v}))
    throw internal_error("decide_c1: reconstructed run fails to replay");

  ParikhWitness w;
  for (int st : run.steps) {
    auto [it, inserted] = w.counts.emplace(st, Int(1));
    if (!inserted) it->second += 1;
  }
  w.run = std::move(run);
  verdict.kind = Verdict::Kind::reachable;
  verdict.witness = std::move(w);
  verdict.note = "condition (2): level " + std::to_string(found_level) +
                 " intersection at state " +
                 sys.base.states[static_cast<std::size_t>(found_state)];
  return verdict;
}

bool net_bounded_reach(const OneCounterNet& net, StateId from, const Int& from_value,
                       StateId to, const Int& to_value, long max_steps,
                       const Int& max_abs) {
  std::set<std::pair<StateId, Int>> seen;
  std::deque<std::pair<std::pair<StateId, Int>, long>> queue;
  queue.push_back({{from, from_value}, 0});
  seen.insert({from, from_value});
  while (!queue.empty()) {
    auto [cfg, depth] = queue.front();
    queue.pop_front();
    if (cfg.first == to && cfg.second == to_value) return true;
    if (depth >= max_steps) continue;
    for (const NetTransition& t : net.transitions) {
      if (t.src != cfg.first) continue;
      Int next = t.mul ? Int(cfg.second * t.c) : Int(cfg.second + t.c);
      if (int_abs(next) > max_abs) continue;
      if (seen.insert({t.tgt, next}).second)
        queue.push_back({{t.tgt, next}, depth + 1});
    }
  }
  return false;
}

OneCounterNet attach_gadget(const OneCounterNet& net, const UPSet& S, StateId r,
                            StateId* exit_state) {
  OneCounterNet out = net;
  StateId entry = static_cast<StateId>(out.states.size());
  out.states.push_back("gadget_in");
  StateId exit = static_cast<StateId>(out.states.size());
  out.states.push_back("gadget_out");
  if (exit_state) *exit_state = exit;

  for (const NetTransition& t : net.transitions)
    if (t.mul && t.tgt == r)
      out.transitions.push_back(NetTransition{t.src, entry, true, t.c});

  for (const Int& f : S.points())
    out.transitions.push_back(NetTransition{entry, exit, false, -f});

  auto add_ray = [&](const Int& base, const Int& period, bool up) {
    StateId loop_state = static_cast<StateId>(out.states.size());
    out.states.push_back("gadget_ray" + std::to_string(out.states.size()));
    out.transitions.push_back(NetTransition{entry, loop_state, false, -base});
    out.transitions.push_back(
        NetTransition{loop_state, loop_state, false, up ? -period : period});
    out.transitions.push_back(NetTransition{loop_state, exit, false, Int(0)});
  };
  for (const UPSet::Ray& ray : S.rays()) add_ray(ray.base, ray.period, ray.up);
  for (const UPSet::Line& line : S.lines()) {
    add_ray(line.base, line.period, true);
    add_ray(line.base - line.period, line.period, false);
  }
  return out;
}

}  // namespace avass
