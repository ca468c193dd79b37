#include "avass/reduce.hpp"

#include "avass/errors.hpp"

namespace avass {

namespace {

std::string pair_name(const AffineVass& v, StateId q, int elem) {
  return v.states[static_cast<std::size_t>(q)] + "@" + std::to_string(elem);
}

}  // namespace

FromOriginVass reduce_from_origin(const AffineVass& v, const MatrixMonoid& monoid,
                                  bool drop_missing_products) {
  if (monoid.status != MatrixMonoid::Status::finite)
    throw precondition_error("reduce_from_origin: monoid is not finite");

  FromOriginVass out;
  out.monoid_size = monoid.size();
  out.vass = AffineVass(v.dim);
  for (StateId q = 0; q < v.num_states(); ++q)
    for (int e = 0; e < monoid.size(); ++e) {
      out.vass.add_state(pair_name(v, q, e));
      out.labels.push_back(StateLabel{StateLabel::Kind::pair, q, e});
    }

  for (int e = 0; e < monoid.size(); ++e) {
    const IntMatrix& a = monoid.elements[static_cast<std::size_t>(e)];
    for (int ti = 0; ti < v.num_transitions(); ++ti) {
      const Transition& t = v.transitions[static_cast<std::size_t>(ti)];
      std::optional<int> prod = monoid.index_of(a * t.mat);
      if (!prod) {
        if (drop_missing_products) continue;
        throw precondition_error(
            "reduce_from_origin: monoid does not contain a required product");
      }
      out.vass.add_transition(out.pair_state(t.tgt, e), out.pair_state(t.src, *prod),
                              a * t.vec);
      out.source_transition.push_back(ti);
    }
  }
  return out;
}

ReducedVass build_reduced(const AffineVass& v, const MatrixMonoid& monoid, StateId p,
                          StateId q, bool drop_missing_products) {
  v.check_state(p);
  v.check_state(q);
  FromOriginVass origin = reduce_from_origin(v, monoid, drop_missing_products);

  const int d = v.dim;
  ReducedVass r;
  r.inner = AffineVass(2 * d);

  // plain states first (indices match the source system), then pairs, then
  // marked copies
  for (StateId s = 0; s < v.num_states(); ++s) {
    r.inner.add_state(v.states[static_cast<std::size_t>(s)]);
    r.labels.push_back(StateLabel{StateLabel::Kind::plain, s, -1});
  }
  const int n_pairs = origin.vass.num_states();
  auto pair_of = [&](StateId origin_state) {
    return v.num_states() + origin_state;
  };
  auto marked_of = [&](StateId origin_state) {
    return v.num_states() + n_pairs + origin_state;
  };
  for (StateId s = 0; s < n_pairs; ++s) {
    r.inner.add_state(origin.vass.states[static_cast<std::size_t>(s)]);
    StateLabel l = origin.labels[static_cast<std::size_t>(s)];
    r.labels.push_back(l);
  }
  for (StateId s = 0; s < n_pairs; ++s) {
    r.inner.add_state(origin.vass.states[static_cast<std::size_t>(s)] + "!");
    StateLabel l = origin.labels[static_cast<std::size_t>(s)];
    l.kind = StateLabel::Kind::marked;
    r.labels.push_back(l);
  }

  auto widen = [&](const IntVector& lo, const IntVector& hi) {
    IntVector w(2 * d);
    for (int i = 0; i < d; ++i) {
      w[i] = lo[i];
      w[d + i] = hi[i];
    }
    return w;
  };
  const IntVector zero_d = IntVector::zero(d);

  // T_simul: the from-origin transitions acting on the last d counters
  for (int ti = 0; ti < origin.vass.num_transitions(); ++ti) {
    const Transition& t = origin.vass.transitions[static_cast<std::size_t>(ti)];
    r.inner.add_transition(pair_of(t.src), pair_of(t.tgt), widen(zero_d, t.vec));
    r.stage.push_back(StageTag::simul);
    r.source_transition.push_back(
        origin.source_transition[static_cast<std::size_t>(ti)]);
  }
  // T_end: guess the end of the simulated path
  for (StateId s = 0; s < n_pairs; ++s) {
    r.inner.add_transition(pair_of(s), marked_of(s), IntVector::zero(2 * d));
    r.stage.push_back(StageTag::end_guess);
    r.source_transition.push_back(-1);
  }
  // T_mult: transfer A·u from the first d counters onto the last d
  for (StateId s = 0; s < n_pairs; ++s) {
    const IntMatrix& a = monoid.elements[static_cast<std::size_t>(
        origin.labels[static_cast<std::size_t>(s)].elem)];
    for (int i = 0; i < d; ++i) {
      IntVector ai = a.column(i);
      r.inner.add_transition(marked_of(s), marked_of(s),
                             widen(-IntVector::unit(d, i), ai));
      r.stage.push_back(StageTag::mult);
      r.source_transition.push_back(-1);
      r.inner.add_transition(marked_of(s), marked_of(s),
                             widen(IntVector::unit(d, i), -ai));
      r.stage.push_back(StageTag::mult);
      r.source_transition.push_back(-1);
    }
  }
  // T_final: guess the end of the multiplication
  for (StateId s = 0; s < n_pairs; ++s) {
    r.inner.add_transition(marked_of(s),
                           origin.labels[static_cast<std::size_t>(s)].base,
                           IntVector::zero(2 * d));
    r.stage.push_back(StageTag::final_guess);
    r.source_transition.push_back(-1);
  }

  r.start = pair_of(origin.pair_state(q, 0));  // (q, I)
  r.end = p;

  Thm31Bounds bounds = check_thm31_bounds(r, v, monoid);
  if (!bounds.states_ok || !bounds.transitions_ok || !bounds.norm_corrected_ok)
    throw internal_error("build_reduced: size accounting violated");
  return r;
}

Thm31Bounds check_thm31_bounds(const ReducedVass& r, const AffineVass& src,
                               const MatrixMonoid& monoid) {
  Thm31Bounds b;
  const Int m_size = monoid.size();
  const Int d = src.dim;
  b.states_ok = Int(r.inner.num_states()) <= 3 * m_size * src.num_states();
  b.transitions_ok = Int(r.inner.num_transitions()) <=
                     4 * d * m_size * (src.num_states() + src.num_transitions());

  Int t_norm = src.transition_norm();
  if (t_norm < 1) t_norm = 1;
  Int m_norm = monoid.norm();
  Int reduced_norm = r.inner.transition_norm();
  b.norm_ok = reduced_norm <= m_norm * t_norm;
  b.norm_corrected_ok = reduced_norm <= d * m_norm * t_norm;
  return b;
}

ReduceOutcome reduce_afmp(const AffineVass& v, StateId p, StateId q,
                          const std::optional<MonoidCaps>& user_cap) {
  std::vector<IntMatrix> gens;
  for (const Transition& t : v.transitions) gens.push_back(t.mat);
  FinitenessResult fin = decide_finiteness(v.dim, gens, user_cap);

  ReduceOutcome out;
  out.witness_word = fin.witness_word;
  switch (fin.kind) {
    case FinitenessResult::Kind::infinite:
      out.kind = ReduceOutcome::Kind::infinite_monoid;
      return out;
    case FinitenessResult::Kind::unknown:
      out.kind = ReduceOutcome::Kind::unknown_finiteness;
      return out;
    case FinitenessResult::Kind::finite:
      break;
  }
  out.kind = ReduceOutcome::Kind::ok;
  out.reduced = build_reduced(v, fin.monoid, p, q);
  return out;
}

std::pair<AffineVass, ReachQuery> cover_to_reach(const AffineVass& v, StateId p,
                                                 const IntVector& u, StateId q,
                                                 const IntVector& v_target) {
  AffineVass v2 = v;
  StateId sink = v2.add_state("q_f");
  v2.add_transition(q, sink, IntVector::zero(v.dim));
  for (int i = 0; i < v.dim; ++i)
    v2.add_transition(sink, sink, -IntVector::unit(v.dim, i));
  return {std::move(v2), ReachQuery{p, u, sink, v_target}};
}

std::pair<AffineVass, ReachQuery> reach_to_cover(const AffineVass& v, StateId p,
                                                 const IntVector& u, StateId q,
                                                 const IntVector& v_target) {
  const int d = v.dim;
  AffineVass v2(2 * d);
  for (const std::string& s : v.states) v2.add_state(s);
  for (const Transition& t : v.transitions) {
    IntMatrix m(2 * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        m.at(i, j) = t.mat.at(i, j);
        m.at(d + i, d + j) = t.mat.at(i, j);
      }
    IntVector b(2 * d);
    for (int i = 0; i < d; ++i) {
      b[i] = t.vec[i];
      b[d + i] = -t.vec[i];
    }
    v2.add_transition(t.src, t.tgt, std::move(m), std::move(b));
  }
  IntVector from(2 * d), to(2 * d);
  for (int i = 0; i < d; ++i) {
    from[i] = u[i];
    from[d + i] = -u[i];
    to[i] = v_target[i];
    to[d + i] = -v_target[i];
  }
  return {std::move(v2), ReachQuery{p, from, q, to}};
}

}  // namespace avass
