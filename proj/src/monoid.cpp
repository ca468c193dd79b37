#include "avass/monoid.hpp"

#include <deque>

#include "avass/errors.hpp"

namespace avass {

MonoidBounds ws91_bounds(int dim, const std::vector<IntMatrix>& generators) {
  Int g_norm = 0;
  for (const IntMatrix& m : generators) {
    if (!m.is_nonnegative())
      throw not_nonnegative_error("ws91_bounds: generator has a negative entry");
    Int n = m.norm();
    if (n > g_norm) g_norm = n;
  }
  if (g_norm < 1) g_norm = 1;

  const unsigned long d = static_cast<unsigned long>(dim);
  const Int dd(dim);

  // norm_bound^2 = ||G||^{2(d-1)} · 5^d · d^{2d}
  Int norm_sq = int_pow(g_norm, 2 * (d - 1)) * int_pow(5, d) * int_pow(dd, 2 * d);
  Int norm_bound = isqrt_ceil(norm_sq);

  // count_bound^2 = ||G||^{2d^2(d-1)} · 5^{d^3} · d^{2d^3} · d^4
  const unsigned long d3 = d * d * d;
  Int count_sq = int_pow(g_norm, 2 * d * d * (d - 1)) * int_pow(5, d3) *
                 int_pow(dd, 2 * d3) * int_pow(dd, 4);
  Int count_bound = isqrt_ceil(count_sq);

  if (norm_bound < 1) norm_bound = 1;
  if (count_bound < 1) count_bound = 1;
  return MonoidBounds{count_bound, norm_bound};
}

MatrixMonoid generate_monoid(int dim, const std::vector<IntMatrix>& generators,
                             const MonoidCaps& caps) {
  for (const IntMatrix& g : generators)
    if (g.dim() != dim) throw dimension_error("generate_monoid: generator dimension");
  if ((caps.max_count && *caps.max_count < 1) || (caps.max_norm && *caps.max_norm < 0))
    throw precondition_error("generate_monoid: caps must be positive");

  MatrixMonoid m;
  m.dim = dim;
  IntMatrix id = IntMatrix::identity(dim);
  m.elements.push_back(id);
  m.words.push_back({});
  m.index_.emplace(std::move(id), 0);

  std::deque<int> queue{0};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (std::size_t gi = 0; gi < generators.size(); ++gi) {
      IntMatrix prod = m.elements[static_cast<std::size_t>(cur)] * generators[gi];
      if (m.index_.count(prod)) continue;
      std::vector<int> word = m.words[static_cast<std::size_t>(cur)];
      word.push_back(static_cast<int>(gi));
      if (caps.max_norm && prod.norm() > *caps.max_norm) {
        m.status = MatrixMonoid::Status::cap_exceeded;
        m.witness_word = std::move(word);
        return m;
      }
      if (caps.max_count && Int(m.size()) + 1 > *caps.max_count) {
        m.status = MatrixMonoid::Status::cap_exceeded;
        m.witness_word = std::move(word);
        return m;
      }
      int idx = m.size();
      m.index_.emplace(prod, idx);
      m.elements.push_back(std::move(prod));
      m.words.push_back(std::move(word));
      queue.push_back(idx);
    }
  }
  return m;
}

FinitenessResult decide_finiteness(int dim, const std::vector<IntMatrix>& generators,
                                   const std::optional<MonoidCaps>& user_cap) {
  bool nonneg = true;
  for (const IntMatrix& g : generators)
    if (!g.is_nonnegative()) {
      nonneg = false;
      break;
    }

  FinitenessResult res;
  if (nonneg) {
    MonoidBounds bounds = ws91_bounds(dim, generators);
    MonoidCaps caps{bounds.count_bound, bounds.norm_bound};
    res.monoid = generate_monoid(dim, generators, caps);
    // for a finite monoid of nonnegative matrices both bounds are valid, so
    // a breach certifies infiniteness
    res.kind = res.monoid.status == MatrixMonoid::Status::finite
                   ? FinitenessResult::Kind::finite
                   : FinitenessResult::Kind::infinite;
  } else {
    MonoidCaps caps = user_cap.value_or(MonoidCaps{Int(1) << 16, Int(1) << 64});
    res.monoid = generate_monoid(dim, generators, caps);
    res.kind = res.monoid.status == MatrixMonoid::Status::finite
                   ? FinitenessResult::Kind::finite
                   : FinitenessResult::Kind::unknown;
  }
  res.witness_word = res.monoid.witness_word;
  return res;
}

}  // namespace avass
