#include "avass/gen_poly.hpp"

#include <algorithm>
#include <cctype>

#include "avass/core.hpp"
#include "avass/errors.hpp"

namespace avass {

// --- polynomial parsing (precedence climbing over +,-,*,^) ---

namespace {

struct PolyParser {
  const std::string& text;
  std::size_t pos = 0;

  // normalized form: map exponent vector -> coefficient
  using Terms = std::map<std::vector<int>, Int>;
  int nvars = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool eat(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(1, "polynomial: " + msg + " at offset " + std::to_string(pos));
  }

  static Terms constant(const Int& c) {
    Terms t;
    if (c != 0) t[{}] = c;
    return t;
  }

  static std::vector<int> pad(const std::vector<int>& e, std::size_t n) {
    std::vector<int> r = e;
    r.resize(n, 0);
    return r;
  }

  static Terms add(const Terms& a, const Terms& b, int sign) {
    Terms r = a;
    for (const auto& [e, c] : b) {
      r[e] += sign * c;
      if (r[e] == 0) r.erase(e);
    }
    return r;
  }

  static Terms mul(const Terms& a, const Terms& b) {
    Terms r;
    for (const auto& [ea, ca] : a)
      for (const auto& [eb, cb] : b) {
        std::vector<int> e = pad(ea, std::max(ea.size(), eb.size()));
        for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
        r[e] += ca * cb;
        if (r[e] == 0) r.erase(e);
      }
    return r;
  }

  Terms parse_atom() {
    skip();
    if (pos >= text.size()) fail("unexpected end");
    if (eat('(')) {
      Terms t = parse_sum();
      if (!eat(')')) fail("missing )");
      return t;
    }
    if (text[pos] == 'x') {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        ++pos;
      if (start == pos) fail("variable index expected");
      int idx = std::stoi(text.substr(start, pos - start));
      if (idx < 1) fail("variable indices start at 1");
      nvars = std::max(nvars, idx);
      std::vector<int> e(static_cast<std::size_t>(idx), 0);
      e[static_cast<std::size_t>(idx - 1)] = 1;
      Terms t;
      t[e] = 1;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        ++pos;
      return constant(Int(text.substr(start, pos - start)));
    }
    fail("unexpected character");
  }

  Terms parse_power() {
    Terms base = parse_atom();
    skip();
    if (eat('^')) {
      skip();
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        ++pos;
      if (start == pos) fail("exponent expected");
      int e = std::stoi(text.substr(start, pos - start));
      Terms r = constant(1);
      for (int i = 0; i < e; ++i) r = mul(r, base);
      return r;
    }
    return base;
  }

  Terms parse_product() {
    Terms t = parse_power();
    for (;;) {
      skip();
      if (eat('*'))
        t = mul(t, parse_power());
      else
        return t;
    }
  }

  Terms parse_sum() {
    skip();
    int sign = 1;
    if (eat('-')) sign = -1;
    Terms t = parse_product();
    if (sign < 0) t = add(Terms{}, t, -1);
    for (;;) {
      skip();
      if (eat('+'))
        t = add(t, parse_product(), 1);
      else if (eat('-'))
        t = add(t, parse_product(), -1);
      else
        return t;
    }
  }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text) {
  PolyParser parser{text};
  PolyParser::Terms terms = parser.parse_sum();
  parser.skip();
  if (parser.pos != text.size()) parser.fail("trailing input");

  Polynomial p;
  p.nvars = parser.nvars;
  for (const auto& [e, c] : terms) {
    Polynomial::Mono m;
    m.coeff = c;
    m.exp = PolyParser::pad(e, static_cast<std::size_t>(p.nvars));
    p.monomials.push_back(std::move(m));
  }
  if (p.monomials.empty())
    p.monomials.push_back(Polynomial::Mono{Int(0), std::vector<int>(
                                                       static_cast<std::size_t>(p.nvars), 0)});
  return p;
}

// --- compilation ---

namespace {

// Builds the instruction stream; variable copies are allocated lazily during
// monomial emission and the init loops are prepended at the end.
struct Compiler {
  const Polynomial& poly;
  CounterProgram out;
  std::vector<std::vector<int>> var_copies;  // unconsumed copy counters per var
  std::vector<CounterProgram::Instr> body;   // everything after the init loops

  explicit Compiler(const Polynomial& p) : poly(p) {
    var_copies.resize(static_cast<std::size_t>(p.nvars));
    out.copies_per_var.assign(static_cast<std::size_t>(p.nvars), 0);
  }

  int fresh(const std::string& name) {
    out.counters.push_back(name);
    return static_cast<int>(out.counters.size()) - 1;
  }

  int take_var_copy(int var) {
    int c = fresh("x" + std::to_string(var + 1) + "_" +
                  std::to_string(++out.copies_per_var[static_cast<std::size_t>(var)]));
    var_copies[static_cast<std::size_t>(var)].push_back(c);
    return c;
  }

  void emit(CounterProgram::Instr i) { body.push_back(std::move(i)); }

  void add(int counter, Int amount, const std::string& tag) {
    CounterProgram::Instr i;
    i.kind = CounterProgram::Instr::Kind::add;
    i.counter = counter;
    i.amount = std::move(amount);
    i.tag = tag;
    emit(std::move(i));
  }

  void zero_test(int counter, const std::string& tag) {
    CounterProgram::Instr i;
    i.kind = CounterProgram::Instr::Kind::zero_test;
    i.counter = counter;
    i.tag = tag;
    emit(std::move(i));
  }

  // loop_begin ... body ... loop_end with the driver drained in `step`s
  template <typename Body>
  void driven_loop(int driver, Int step, const std::string& tag, Body fill) {
    CounterProgram::Instr begin;
    begin.kind = CounterProgram::Instr::Kind::loop_begin;
    begin.driver = driver;
    begin.driver_step = std::move(step);
    begin.tag = tag;
    std::size_t begin_pos = body.size();
    emit(std::move(begin));
    fill();
    CounterProgram::Instr end;
    end.kind = CounterProgram::Instr::Kind::loop_end;
    end.match = static_cast<int>(begin_pos);
    end.tag = tag;
    std::size_t end_pos = body.size();
    emit(std::move(end));
    body[begin_pos].match = static_cast<int>(end_pos);
  }

  // y += x, x = 0
  void transfer(int x, int y, const std::string& tag) {
    driven_loop(x, Int(1), tag, [&] {
      add(x, Int(-1), tag);
      add(y, Int(1), tag);
    });
    zero_test(x, tag);
  }

  // y -= x, x = 0
  void remove(int x, int y, const std::string& tag) {
    driven_loop(x, Int(1), tag, [&] {
      add(x, Int(-1), tag);
      add(y, Int(-1), tag);
    });
    zero_test(x, tag);
  }

  // consumes two copies of the same value: out = value^2
  int square(int main_copy, int audit_copy) {
    int x = fresh("sq_x" + std::to_string(out.affine_pairs.size()));
    int y = fresh("sq_y" + std::to_string(out.affine_pairs.size()));
    int z = fresh("sq_z" + std::to_string(out.affine_pairs.size()));
    int t = fresh("sq_t" + std::to_string(out.affine_pairs.size()));
    out.affine_pairs.emplace_back(z, y);

    transfer(main_copy, x, "square");
    driven_loop(x, Int(1), "square", [&] {
      add(x, Int(-1), "square");
      CounterProgram::Instr aff;  // z += 2y + 1 with the pre-increment y
      aff.kind = CounterProgram::Instr::Kind::add_affine;
      aff.counter = z;
      aff.y_counter = y;
      aff.tag = "square";
      emit(std::move(aff));
      add(y, Int(1), "square");
    });
    zero_test(x, "square");
    transfer(z, t, "square");
    remove(audit_copy, y, "square");
    zero_test(y, "square");
    return t;
  }

  // consumes the operand counters; returns u·w
  int mult(int u1, int u2, int u3, int u4, int w1, int w2, int w3, int w4) {
    int xu = square(u1, u2);
    int xw = square(w1, w2);
    int zm = fresh("mul_sum" + std::to_string(out.affine_pairs.size()));
    transfer(u3, zm, "mult");
    transfer(w3, zm, "mult");
    int za = fresh("mul_sum_a" + std::to_string(out.affine_pairs.size()));
    transfer(u4, za, "mult");
    transfer(w4, za, "mult");
    int zz = square(zm, za);  // (u+w)^2
    remove(xu, zz, "mult");
    remove(xw, zz, "mult");  // zz = 2uw
    int t = fresh("mul_t" + std::to_string(out.affine_pairs.size()));
    driven_loop(zz, Int(2), "mult", [&] {
      add(zz, Int(-2), "mult");
      add(t, Int(1), "mult");
    });
    zero_test(zz, "mult");
    return t;
  }

  static int degree(const std::vector<int>& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
  }

  // splits e into two halves of near-equal degree
  static std::pair<std::vector<int>, std::vector<int>> split(
      const std::vector<int>& e) {
    int half = degree(e) / 2;
    std::vector<int> a(e.size(), 0), b = e;
    int got = 0;
    for (std::size_t i = 0; i < e.size() && got < half; ++i) {
      int take = std::min(e[i], half - got);
      a[i] = take;
      b[i] -= take;
      got += take;
    }
    return {a, b};
  }

  // emits code leaving the monomial value (without coefficient) in a fresh
  // counter; consumes variable copies
  int emit_value(const std::vector<int>& e) {
    int d = degree(e);
    if (d == 0) throw internal_error("emit_value: constant monomial");
    if (d == 1) {
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] == 1) return take_var_copy(static_cast<int>(i));
    }
    auto [lo, hi] = split(e);
    if (lo == hi) {
      int main_copy = emit_value(lo);
      int audit_copy = emit_value(lo);
      return square(main_copy, audit_copy);
    }
    int u1 = emit_value(lo), u2 = emit_value(lo);
    int u3 = emit_value(lo), u4 = emit_value(lo);
    int w1 = emit_value(hi), w2 = emit_value(hi);
    int w3 = emit_value(hi), w4 = emit_value(hi);
    return mult(u1, u2, u3, u4, w1, w2, w3, w4);
  }

  CounterProgram compile() {
    int acc = fresh("acc");
    for (const Polynomial::Mono& m : poly.monomials) {
      if (m.coeff == 0) continue;
      if (degree(m.exp) == 0) {
        add(acc, m.coeff, "constant");
        continue;
      }
      int value = emit_value(m.exp);
      Int mag = int_abs(m.coeff);
      int scaled = value;
      if (mag != 1) {
        scaled = fresh("coef" + std::to_string(out.counters.size()));
        driven_loop(value, Int(1), "coefficient", [&] {
          add(value, Int(-1), "coefficient");
          add(scaled, mag, "coefficient");
        });
        zero_test(value, "coefficient");
      }
      if (m.coeff > 0)
        transfer(scaled, acc, "accumulate");
      else
        remove(scaled, acc, "accumulate");
    }
    zero_test(acc, "accumulate");

    // init loops guessing each variable into all of its copies
    std::vector<CounterProgram::Instr> init;
    for (int var = 0; var < poly.nvars; ++var) {
      const std::vector<int>& copies = var_copies[static_cast<std::size_t>(var)];
      if (copies.empty()) continue;
      CounterProgram::Instr begin;
      begin.kind = CounterProgram::Instr::Kind::loop_begin;
      begin.var_index = var;
      begin.driver_step = 1;
      begin.tag = "init";
      std::size_t begin_pos = init.size();
      init.push_back(std::move(begin));
      for (int c : copies) {
        CounterProgram::Instr a;
        a.kind = CounterProgram::Instr::Kind::add;
        a.counter = c;
        a.amount = 1;
        a.tag = "init";
        init.push_back(std::move(a));
      }
      CounterProgram::Instr end;
      end.kind = CounterProgram::Instr::Kind::loop_end;
      end.match = static_cast<int>(begin_pos);
      end.tag = "init";
      init.push_back(std::move(end));
      init[begin_pos].match = static_cast<int>(init.size()) - 1;
    }

    // stitch: init block first, then the body with matches shifted
    const int shift = static_cast<int>(init.size());
    for (CounterProgram::Instr& i : body)
      if (i.match >= 0) i.match += shift;
    out.code = std::move(init);
    out.code.insert(out.code.end(), std::make_move_iterator(body.begin()),
                    std::make_move_iterator(body.end()));
    return std::move(out);
  }
};

}  // namespace

CounterProgram compile_poly(const Polynomial& p) {
  Compiler compiler(p);
  return compiler.compile();
}

IrResult run_ir(const CounterProgram& cp, const std::vector<Int>& assignment,
                long fuel) {
  IrResult res;
  std::vector<Int> vals(cp.counters.size(), Int(0));
  long spent = 0;

  std::size_t pc = 0;
  std::vector<Int> loop_left;  // iterations remaining per active loop

  auto fail = [&](const std::string& msg) {
    res.ok = false;
    res.failure = msg;
    res.final_values = vals;
    return res;
  };

  while (pc < cp.code.size()) {
    if (++spent > fuel) return fail("fuel exhausted");
    const CounterProgram::Instr& i = cp.code[pc];
    switch (i.kind) {
      case CounterProgram::Instr::Kind::add:
        vals[static_cast<std::size_t>(i.counter)] += i.amount;
        ++pc;
        break;
      case CounterProgram::Instr::Kind::add_affine:
        vals[static_cast<std::size_t>(i.counter)] +=
            2 * vals[static_cast<std::size_t>(i.y_counter)] + 1;
        ++pc;
        break;
      case CounterProgram::Instr::Kind::zero_test:
        if (vals[static_cast<std::size_t>(i.counter)] != 0)
          return fail("zero test failed on " +
                      cp.counters[static_cast<std::size_t>(i.counter)]);
        ++pc;
        break;
      case CounterProgram::Instr::Kind::loop_begin: {
        Int iterations;
        if (i.var_index >= 0) {
          if (i.var_index >= static_cast<int>(assignment.size()))
            return fail("assignment too short");
          iterations = assignment[static_cast<std::size_t>(i.var_index)];
          if (iterations < 0) return fail("negative assignment");
        } else {
          const Int& driver = vals[static_cast<std::size_t>(i.driver)];
          if (driver < 0) return fail("negative loop driver");
          if (driver % i.driver_step != 0) return fail("driver not drainable");
          iterations = driver / i.driver_step;
        }
        if (iterations == 0) {
          pc = static_cast<std::size_t>(i.match) + 1;
        } else {
          loop_left.push_back(iterations);
          ++pc;
        }
        break;
      }
      case CounterProgram::Instr::Kind::loop_end: {
        Int& left = loop_left.back();
        left -= 1;
        if (left == 0) {
          loop_left.pop_back();
          ++pc;
        } else {
          pc = static_cast<std::size_t>(i.match) + 1;
        }
        break;
      }
    }
  }
  res.ok = true;
  res.final_values = std::move(vals);
  return res;
}

LoweredProgram lower_ir(const CounterProgram& cp) {
  const int d = static_cast<int>(cp.counters.size());
  LoweredProgram lp;
  lp.vass = AffineVass(d);

  lp.shared_matrix = IntMatrix::identity(d);
  for (const auto& [z, y] : cp.affine_pairs) {
    if (z == y) throw precondition_error("lower_ir: affine pair aliases z and y");
    lp.shared_matrix.at(z, y) += 2;
  }
  lp.uses_shared_matrix = !cp.affine_pairs.empty();

  // one control state per instruction boundary
  for (std::size_t k = 0; k <= cp.code.size(); ++k)
    lp.vass.add_state("L" + std::to_string(k));

  for (std::size_t k = 0; k < cp.code.size(); ++k) {
    const CounterProgram::Instr& i = cp.code[k];
    StateId here = static_cast<StateId>(k);
    StateId next = static_cast<StateId>(k + 1);
    switch (i.kind) {
      case CounterProgram::Instr::Kind::add: {
        IntVector vec(d);
        vec[i.counter] = i.amount;
        lp.vass.add_transition(here, next, std::move(vec));
        break;
      }
      case CounterProgram::Instr::Kind::add_affine: {
        IntVector vec(d);
        vec[i.counter] = 1;
        lp.vass.add_transition(here, next, lp.shared_matrix, std::move(vec));
        break;
      }
      case CounterProgram::Instr::Kind::zero_test: {
        int ti = lp.vass.add_transition(here, next, IntVector::zero(d));
        lp.zero_test_counter[ti] = i.counter;
        break;
      }
      case CounterProgram::Instr::Kind::loop_begin: {
        lp.vass.add_transition(here, next, IntVector::zero(d));  // enter
        lp.vass.add_transition(here, static_cast<StateId>(i.match + 1),
                               IntVector::zero(d));  // skip/exit
        break;
      }
      case CounterProgram::Instr::Kind::loop_end: {
        lp.vass.add_transition(here, static_cast<StateId>(i.match),
                               IntVector::zero(d));  // back to the loop head
        break;
      }
    }
  }

  lp.query = ReachQuery{0, IntVector::zero(d),
                        static_cast<StateId>(cp.code.size()), IntVector::zero(d)};
  return lp;
}

bool audit_zero_tests(const LoweredProgram& lp, const Run& run) {
  ReplayResult rep = replay(lp.vass, run);
  if (!rep.ok) return false;

  std::vector<int> tested;  // counters whose zero test has been crossed
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const IntVector& before = rep.configs[i].values;
    const IntVector& after = rep.configs[i + 1].values;
    for (int c : tested)
      if (before[c] != after[c]) return false;
    auto it = lp.zero_test_counter.find(run.steps[i]);
    if (it != lp.zero_test_counter.end()) tested.push_back(it->second);
  }
  return true;
}

}  // namespace avass
