#include "avass/gen_lba.hpp"

#include <set>

#include "avass/errors.hpp"

namespace avass {

void Lba::validate() const {
  if (initial < 0 || accept < 0 || reject < 0 ||
      initial >= static_cast<int>(states.size()) ||
      accept >= static_cast<int>(states.size()) ||
      reject >= static_cast<int>(states.size()))
    throw precondition_error("lba: initial/accept/reject must be declared states");
  if (accept == reject) throw precondition_error("lba: accept equals reject");
  for (char c : input_alphabet)
    if (tape_alphabet.find(c) == std::string::npos)
      throw precondition_error("lba: input alphabet not contained in tape alphabet");
  for (const auto& [key, val] : delta) {
    auto [p, a] = key;
    auto [q, b, right] = val;
    (void)right;
    if (p == accept || p == reject)
      throw precondition_error("lba: delta defined on a halting state");
    if (p < 0 || p >= static_cast<int>(states.size()) || q < 0 ||
        q >= static_cast<int>(states.size()))
      throw precondition_error("lba: delta references an undeclared state");
    if (tape_alphabet.find(a) == std::string::npos ||
        tape_alphabet.find(b) == std::string::npos)
      throw precondition_error("lba: delta references a non-tape letter");
  }
}

LbaOutcome simulate_lba(const Lba& lba, const std::string& word) {
  lba.validate();
  if (word.empty()) throw precondition_error("simulate_lba: empty word");
  for (char c : word)
    if (lba.input_alphabet.find(c) == std::string::npos)
      throw precondition_error("simulate_lba: word letter outside input alphabet");

  const int n = static_cast<int>(word.size());
  int state = lba.initial;
  int pos = 0;
  std::string tape = word;
  std::set<std::tuple<int, int, std::string>> visited;
  for (;;) {
    if (state == lba.accept) return LbaOutcome::accept;
    if (state == lba.reject) return LbaOutcome::reject;
    if (!visited.emplace(state, pos, tape).second) return LbaOutcome::reject;
    auto it = lba.delta.find({state, tape[static_cast<std::size_t>(pos)]});
    if (it == lba.delta.end()) return LbaOutcome::reject;  // stuck
    auto [q, b, right] = it->second;
    tape[static_cast<std::size_t>(pos)] = b;
    state = q;
    pos += right ? 1 : -1;
    if (pos < 0 || pos >= n) return LbaOutcome::reject;  // head leaves the input
  }
}

int lba_counter(const Lba& lba, int n, int i, char a) {
  std::size_t letter = lba.tape_alphabet.find(a);
  if (letter == std::string::npos || i < 1 || i > n)
    throw precondition_error("lba_counter: bad cell or letter");
  return (i - 1) * static_cast<int>(lba.tape_alphabet.size()) +
         static_cast<int>(letter);
}

GeneratedInstance gen_lba(const Lba& lba, const std::string& word) {
  lba.validate();
  if (word.empty()) throw precondition_error("gen_lba: empty word");
  for (char c : word)
    if (lba.input_alphabet.find(c) == std::string::npos)
      throw precondition_error("gen_lba: word letter outside input alphabet");

  const int n = static_cast<int>(word.size());
  const int g = static_cast<int>(lba.tape_alphabet.size());
  const int d = n * g + 1;
  const int y = d - 1;

  AffineVass v(d);
  std::vector<std::vector<StateId>> sim(lba.states.size());
  for (std::size_t p = 0; p < lba.states.size(); ++p)
    for (int i = 1; i <= n; ++i)
      sim[p].push_back(v.add_state("r_" + lba.states[p] + "_" + std::to_string(i)));
  std::map<std::pair<char, int>, StateId> gad;
  for (char a : lba.tape_alphabet)
    for (int i = 1; i <= n; ++i)
      gad[{a, i}] = v.add_state(std::string("g_") + a + "_" + std::to_string(i));
  StateId acc = v.add_state("r_acc");

  // one transition per delta rule and head position: swap x_{i,a} with
  // x_{i,b}, pay +1 into x_{i,b} and +1 into y
  for (const auto& [key, val] : lba.delta) {
    auto [p, a] = key;
    auto [q, b, right] = val;
    for (int i = 1; i <= n; ++i) {
      int j = right ? i + 1 : i - 1;
      if (j < 1 || j > n) continue;
      IntMatrix m = IntMatrix::identity(d);
      int ca = lba_counter(lba, n, i, a);
      int cb = lba_counter(lba, n, i, b);
      if (ca != cb) {
        m.at(ca, ca) = 0;
        m.at(cb, cb) = 0;
        m.at(ca, cb) = 1;
        m.at(cb, ca) = 1;
      }
      IntVector vec(d);
      vec[cb] += 1;
      vec[y] += 1;
      v.add_transition(
          sim[static_cast<std::size_t>(p)][static_cast<std::size_t>(i - 1)],
          sim[static_cast<std::size_t>(q)][static_cast<std::size_t>(j - 1)],
          std::move(m), std::move(vec));
    }
  }

  // verification gadget: guess one letter per cell and drain it together
  // with y, walking the cells left to right
  for (int i = 1; i <= n; ++i)
    for (char a : lba.tape_alphabet)
      v.add_transition(
          sim[static_cast<std::size_t>(lba.accept)][static_cast<std::size_t>(i - 1)],
          gad[{a, 1}], IntVector::zero(d));
  for (char a : lba.tape_alphabet)
    for (int i = 1; i <= n; ++i) {
      IntVector dec(d);
      dec[lba_counter(lba, n, i, a)] = -1;
      dec[y] = -1;
      v.add_transition(gad[{a, i}], gad[{a, i}], std::move(dec));
      if (i < n)
        for (char b : lba.tape_alphabet)
          v.add_transition(gad[{a, i}], gad[{b, i + 1}], IntVector::zero(d));
    }
  for (char a : lba.tape_alphabet)
    v.add_transition(gad[{a, n}], acc, IntVector::zero(d));

  IntVector u(d);
  for (int i = 1; i <= n; ++i)
    u[lba_counter(lba, n, i, word[static_cast<std::size_t>(i - 1)])] = 1;
  u[y] = n;

  GeneratedInstance out;
  out.query = ReachQuery{
      sim[static_cast<std::size_t>(lba.initial)][0], std::move(u), acc,
      IntVector::zero(d)};
  out.vass = std::move(v);
  return out;
}

}  // namespace avass
