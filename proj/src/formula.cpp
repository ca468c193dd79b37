#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "avass/errors.hpp"
#include "avass/reduce.hpp"
#include "avass/solver.hpp"

namespace avass {

namespace {

std::string smt_int(const Int& x) {
  if (x < 0) return "(- " + to_string(-x) + ")";
  return to_string(x);
}

// (+ t1 t2 ...) with 0/1-term degenerate cases folded
std::string smt_sum(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  if (terms.size() == 1) return terms[0];
  std::string s = "(+";
  for (const std::string& t : terms) s += " " + t;
  return s + ")";
}

std::string smt_and(const std::vector<std::string>& parts) {
  if (parts.empty()) return "true";
  if (parts.size() == 1) return parts[0];
  std::string s = "(and";
  for (const std::string& p : parts) s += " " + p;
  return s + ")";
}

}  // namespace

std::string export_formula(const AffineVass& v, StateId p, StateId q) {
  v.check_state(p);
  v.check_state(q);
  std::vector<IntMatrix> gens;
  for (const Transition& t : v.transitions) gens.push_back(t.mat);
  FinitenessResult fin = decide_finiteness(v.dim, gens);
  if (fin.kind == FinitenessResult::Kind::infinite)
    throw precondition_error("export_formula: infinite matrix monoid");
  if (fin.kind == FinitenessResult::Kind::unknown)
    throw precondition_error("export_formula: monoid finiteness undecided");

  FromOriginVass origin = reduce_from_origin(v, fin.monoid);
  const int d = v.dim;

  auto uvar = [](int i) { return "u" + std::to_string(i + 1); };
  auto vvar = [](int i) { return "v" + std::to_string(i + 1); };

  // rhs_i of the effect rows for monoid element A: v_i - (A·u)_i
  auto effect_rhs = [&](const IntMatrix& a, int i) {
    std::vector<std::string> au;
    for (int j = 0; j < d; ++j)
      if (a.at(i, j) != 0) au.push_back("(* " + smt_int(a.at(i, j)) + " " + uvar(j) + ")");
    if (au.empty()) return std::string(vvar(i));
    return "(- " + vvar(i) + " " + smt_sum(au) + ")";
  };

  std::vector<std::pair<StateId, StateId>> edge_ends;
  for (const Transition& t : origin.vass.transitions) edge_ends.emplace_back(t.src, t.tgt);

  std::vector<std::string> disjuncts;
  for (int e = 0; e < fin.monoid.size(); ++e) {
    const IntMatrix& a = fin.monoid.elements[static_cast<std::size_t>(e)];
    StateId start = origin.pair_state(q, 0);
    StateId end = origin.pair_state(p, e);

    if (start == end) {
      // empty run: v = A·u (A = I here since e = 0 and p = q)
      std::vector<std::string> eqs;
      for (int i = 0; i < d; ++i) eqs.push_back("(= " + effect_rhs(a, i) + " 0)");
      disjuncts.push_back(smt_and(eqs));
    }

    std::vector<std::vector<int>> supports =
        connected_supports(edge_ends, start, end);
    if (supports.size() > 100000)
      throw precondition_error("export_formula: too many supports");
    for (const std::vector<int>& sup : supports) {
      std::vector<std::string> binders, conj;
      auto nvar = [](int t) { return "n" + std::to_string(t); };
      for (int t : sup) {
        binders.push_back("(" + nvar(t) + " Int)");
        conj.push_back("(>= " + nvar(t) + " 0)");
      }
      // flow balance rows over the support's states
      std::set<StateId> touched;
      for (int t : sup) {
        touched.insert(edge_ends[static_cast<std::size_t>(t)].first);
        touched.insert(edge_ends[static_cast<std::size_t>(t)].second);
      }
      for (StateId s : touched) {
        std::vector<std::string> terms;
        long constant = 0;
        for (int t : sup) {
          int inc = (edge_ends[static_cast<std::size_t>(t)].second == s ? 1 : 0) -
                    (edge_ends[static_cast<std::size_t>(t)].first == s ? 1 : 0);
          if (inc == 0) continue;
          constant += inc;
          terms.push_back(inc > 0 ? nvar(t) : "(- 0 " + nvar(t) + ")");
        }
        long rhs = (s == end ? 1 : 0) - (s == start ? 1 : 0);
        terms.push_back(smt_int(Int(constant)));
        conj.push_back("(= " + smt_sum(terms) + " " + smt_int(Int(rhs)) + ")");
      }
      // effect rows
      for (int i = 0; i < d; ++i) {
        std::vector<std::string> terms;
        Int constant = 0;
        for (int t : sup) {
          const Int& b =
              origin.vass.transitions[static_cast<std::size_t>(t)].vec[i];
          if (b == 0) continue;
          constant += b;
          terms.push_back("(* " + smt_int(b) + " " + nvar(t) + ")");
        }
        terms.push_back(smt_int(constant));
        conj.push_back("(= " + smt_sum(terms) + " " + effect_rhs(a, i) + ")");
      }
      std::string body = smt_and(conj);
      std::string binder_list;
      for (const std::string& b : binders) binder_list += b;
      disjuncts.push_back("(exists (" + binder_list + ") " + body + ")");
    }
  }

  std::ostringstream out;
  out << "(set-logic LIA)\n";
  for (int i = 0; i < d; ++i) out << "(declare-const " << uvar(i) << " Int)\n";
  for (int i = 0; i < d; ++i) out << "(declare-const " << vvar(i) << " Int)\n";
  out << "(define-fun phi () Bool\n  (or";
  if (disjuncts.empty()) out << " false";
  for (const std::string& dj : disjuncts) out << "\n    " << dj;
  out << "))\n(assert phi)\n(check-sat)\n";
  return out.str();
}

// --- s-expression parsing and evaluation ---

namespace {

struct Tokenizer {
  const std::string& text;
  std::size_t pos = 0;

  std::optional<std::string> next() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos >= text.size()) return std::nullopt;
    char c = text[pos];
    if (c == '(' || c == ')') {
      ++pos;
      return std::string(1, c);
    }
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    return text.substr(start, pos - start);
  }
};

SmtNode parse_node(Tokenizer& tok, const std::string& first) {
  if (first != "(") return SmtNode{first, {}};
  SmtNode node;
  for (;;) {
    std::optional<std::string> t = tok.next();
    if (!t) throw error("smt parse: unbalanced parentheses");
    if (*t == ")") return node;
    node.kids.push_back(parse_node(tok, *t));
  }
}

struct Evaluator {
  const std::map<std::string, Int>& env;
  const SmtNode* phi_body = nullptr;

  Int eval_int(const SmtNode& n) const {
    if (!n.atom.empty()) {
      if (std::isdigit(static_cast<unsigned char>(n.atom[0])))
        return Int(n.atom);
      auto it = env.find(n.atom);
      if (it == env.end()) throw error("smt eval: unbound variable " + n.atom);
      return it->second;
    }
    const std::string& op = n.kids.at(0).atom;
    if (op == "+") {
      Int s = 0;
      for (std::size_t i = 1; i < n.kids.size(); ++i) s += eval_int(n.kids[i]);
      return s;
    }
    if (op == "-") {
      if (n.kids.size() == 2) return -eval_int(n.kids[1]);
      Int s = eval_int(n.kids[1]);
      for (std::size_t i = 2; i < n.kids.size(); ++i) s -= eval_int(n.kids[i]);
      return s;
    }
    if (op == "*") {
      Int s = 1;
      for (std::size_t i = 1; i < n.kids.size(); ++i) s *= eval_int(n.kids[i]);
      return s;
    }
    throw error("smt eval: unknown integer operator " + op);
  }

  bool eval_bool(const SmtNode& n) const {
    if (!n.atom.empty()) {
      if (n.atom == "true") return true;
      if (n.atom == "false") return false;
      if (n.atom == "phi" && phi_body) return eval_bool(*phi_body);
      throw error("smt eval: unknown boolean atom " + n.atom);
    }
    const std::string& op = n.kids.at(0).atom;
    if (op == "and") {
      for (std::size_t i = 1; i < n.kids.size(); ++i)
        if (!eval_bool(n.kids[i])) return false;
      return true;
    }
    if (op == "or") {
      for (std::size_t i = 1; i < n.kids.size(); ++i)
        if (eval_bool(n.kids[i])) return true;
      return false;
    }
    if (op == "not") return !eval_bool(n.kids.at(1));
    if (op == "=") return eval_int(n.kids.at(1)) == eval_int(n.kids.at(2));
    if (op == ">=") return eval_int(n.kids.at(1)) >= eval_int(n.kids.at(2));
    if (op == "<=") return eval_int(n.kids.at(1)) <= eval_int(n.kids.at(2));
    if (op == ">") return eval_int(n.kids.at(1)) > eval_int(n.kids.at(2));
    if (op == "<") return eval_int(n.kids.at(1)) < eval_int(n.kids.at(2));
    if (op == "exists") {
      // witnessed evaluation: every binder must be assigned in env
      for (const SmtNode& b : n.kids.at(1).kids)
        if (!env.count(b.kids.at(0).atom)) return false;
      return eval_bool(n.kids.at(2));
    }
    throw error("smt eval: unknown boolean operator " + op);
  }
};

}  // namespace

std::vector<SmtNode> parse_smt(const std::string& text) {
  Tokenizer tok{text};
  std::vector<SmtNode> doc;
  for (;;) {
    std::optional<std::string> t = tok.next();
    if (!t) break;
    doc.push_back(parse_node(tok, *t));
  }
  return doc;
}

bool eval_smt_formula(const std::vector<SmtNode>& doc,
                      const std::map<std::string, Int>& env) {
  const SmtNode* phi_body = nullptr;
  const SmtNode* asserted = nullptr;
  for (const SmtNode& n : doc) {
    if (n.atom.empty() && !n.kids.empty()) {
      if (n.kids[0].atom == "define-fun" && n.kids.size() >= 5 &&
          n.kids[1].atom == "phi")
        phi_body = &n.kids[4];
      if (n.kids[0].atom == "assert") asserted = &n.kids[1];
    }
  }
  if (!asserted) throw error("smt eval: no assert in document");
  Evaluator ev{env, phi_body};
  return ev.eval_bool(*asserted);
}

}  // namespace avass
