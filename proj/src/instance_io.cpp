#include "avass/instance_io.hpp"

#include <map>
#include <sstream>

#include "avass/errors.hpp"

namespace avass {

namespace {

// splits a line into tokens, keeping [ ] ; as their own tokens
std::vector<std::string> tokenize(const std::string& line) {
  std::string padded;
  for (char c : line) {
    if (c == '[' || c == ']' || c == ';') {
      padded += ' ';
      padded += c;
      padded += ' ';
    } else {
      padded += c;
    }
  }
  std::istringstream in(padded);
  std::vector<std::string> tokens;
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

struct LineReader {
  std::vector<std::pair<int, std::vector<std::string>>> lines;

  explicit LineReader(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      std::size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.resize(hash);
      std::vector<std::string> tokens = tokenize(raw);
      if (!tokens.empty()) lines.emplace_back(number, std::move(tokens));
    }
  }
};

Int parse_int(const std::string& tok, int line) {
  try {
    return Int(tok);
  } catch (const std::invalid_argument&) {
    throw parse_error(line, "expected an integer, got '" + tok + "'");
  }
}

class InstanceParser {
 public:
  explicit InstanceParser(const std::string& text) : reader_(text) {}

  InstanceFile run() {
    InstanceFile file;
    bool have_header = false;
    for (const auto& [line, tokens] : reader_.lines) {
      const std::string& head = tokens[0];
      std::size_t pos = 1;
      if (head == "vass") {
        if (have_header) throw parse_error(line, "duplicate vass header");
        if (tokens.size() != 2 || tokens[1].rfind("d=", 0) != 0)
          throw parse_error(line, "expected: vass d=<INT>");
        int d = static_cast<int>(to_long(parse_int(tokens[1].substr(2), line)));
        if (d < 1) throw parse_error(line, "dimension must be positive");
        file.system = AffineVass(d);
        have_header = true;
      } else if (!have_header) {
        throw parse_error(line, "vass header must come first");
      } else if (head == "state") {
        if (tokens.size() < 2) throw parse_error(line, "state needs at least one id");
        for (std::size_t i = 1; i < tokens.size(); ++i) {
          if (file.system.find_state(tokens[i]))
            throw parse_error(line, "duplicate state " + tokens[i]);
          file.system.add_state(tokens[i]);
        }
      } else if (head == "trans") {
        StateId src = state_at(file, tokens, pos, line);
        expect(tokens, pos, "->", line);
        StateId tgt = state_at(file, tokens, pos, line);
        IntMatrix mat = IntMatrix::identity(file.system.dim);
        IntVector vec = IntVector::zero(file.system.dim);
        while (pos < tokens.size()) {
          if (tokens[pos] == "mat") {
            ++pos;
            mat = parse_matrix(file.system.dim, tokens, pos, line);
          } else if (tokens[pos] == "vec") {
            ++pos;
            vec = parse_vector(file.system.dim, tokens, pos, line);
          } else {
            throw parse_error(line, "unexpected token '" + tokens[pos] + "'");
          }
        }
        file.system.add_transition(src, tgt, std::move(mat), std::move(vec));
      } else if (head == "query") {
        if (pos >= tokens.size()) throw parse_error(line, "query kind missing");
        bool cover;
        if (tokens[pos] == "reach")
          cover = false;
        else if (tokens[pos] == "cover")
          cover = true;
        else
          throw parse_error(line, "query kind must be reach or cover");
        ++pos;
        ReachQuery q;
        q.from_state = state_at(file, tokens, pos, line);
        q.from_values = parse_vector(file.system.dim, tokens, pos, line);
        q.to_state = state_at(file, tokens, pos, line);
        q.to_values = parse_vector(file.system.dim, tokens, pos, line);
        if (pos != tokens.size()) throw parse_error(line, "trailing tokens in query");
        file.queries.push_back(InstanceQuery{cover, std::move(q)});
      } else {
        throw parse_error(line, "unknown directive '" + head + "'");
      }
    }
    if (!have_header) throw parse_error(1, "missing vass header");
    return file;
  }

 private:
  static void expect(const std::vector<std::string>& tokens, std::size_t& pos,
                     const std::string& what, int line) {
    if (pos >= tokens.size() || tokens[pos] != what)
      throw parse_error(line, "expected '" + what + "'");
    ++pos;
  }

  static StateId state_at(const InstanceFile& file,
                          const std::vector<std::string>& tokens, std::size_t& pos,
                          int line) {
    if (pos >= tokens.size()) throw parse_error(line, "state id expected");
    std::optional<StateId> s = file.system.find_state(tokens[pos]);
    if (!s) throw parse_error(line, "undeclared state '" + tokens[pos] + "'");
    ++pos;
    return *s;
  }

  static IntVector parse_vector(int d, const std::vector<std::string>& tokens,
                                std::size_t& pos, int line) {
    if (pos >= tokens.size() || tokens[pos] != "[")
      throw parse_error(line, "expected '['");
    ++pos;
    std::vector<Int> entries;
    while (pos < tokens.size() && tokens[pos] != "]")
      entries.push_back(parse_int(tokens[pos++], line));
    if (pos >= tokens.size()) throw parse_error(line, "unterminated vector");
    ++pos;
    if (static_cast<int>(entries.size()) != d)
      throw parse_error(line, "vector has " + std::to_string(entries.size()) +
                                  " entries, expected " + std::to_string(d));
    return IntVector(std::move(entries));
  }

  static IntMatrix parse_matrix(int d, const std::vector<std::string>& tokens,
                                std::size_t& pos, int line) {
    if (pos < tokens.size() && tokens[pos] == "I") {
      ++pos;
      return IntMatrix::identity(d);
    }
    if (pos >= tokens.size() || tokens[pos] != "[")
      throw parse_error(line, "expected 'I' or '['");
    ++pos;
    IntMatrix m(d);
    for (int row = 0; row < d; ++row) {
      for (int col = 0; col < d; ++col) {
        if (pos >= tokens.size() || tokens[pos] == ";" || tokens[pos] == "]")
          throw parse_error(line, "matrix row " + std::to_string(row + 1) + " has " +
                                      std::to_string(col) + " entries, expected " +
                                      std::to_string(d));
        m.at(row, col) = parse_int(tokens[pos++], line);
      }
      bool last = row + 1 == d;
      if (pos >= tokens.size())
        throw parse_error(line, "unterminated matrix");
      if (last) {
        if (tokens[pos] != "]")
          throw parse_error(line, "matrix has too many rows or entries");
        ++pos;
      } else {
        if (tokens[pos] != ";")
          throw parse_error(line, "matrix row " + std::to_string(row + 1) +
                                      " too long or missing ';'");
        ++pos;
      }
    }
    return m;
  }

  LineReader reader_;
};

std::string vector_text(const IntVector& v) {
  std::string s = "[";
  for (int i = 0; i < v.dim(); ++i) {
    if (i) s += " ";
    s += to_string(v[i]);
  }
  return s + "]";
}

std::string matrix_text(const IntMatrix& m) {
  std::string s = "[";
  for (int i = 0; i < m.dim(); ++i) {
    if (i) s += "; ";
    for (int j = 0; j < m.dim(); ++j) {
      if (j) s += " ";
      s += to_string(m.at(i, j));
    }
  }
  return s + "]";
}

std::string query_text(const AffineVass& v, const InstanceQuery& q) {
  return std::string("query ") + (q.cover ? "cover" : "reach") + " " +
         v.states[static_cast<std::size_t>(q.query.from_state)] + " " +
         vector_text(q.query.from_values) + " " +
         v.states[static_cast<std::size_t>(q.query.to_state)] + " " +
         vector_text(q.query.to_values);
}

std::string transition_text(const AffineVass& v, const Transition& t) {
  std::string line = "trans " + v.states[static_cast<std::size_t>(t.src)] + " -> " +
                     v.states[static_cast<std::size_t>(t.tgt)];
  if (!t.mat.is_identity()) line += " mat " + matrix_text(t.mat);
  if (!t.vec.is_zero()) line += " vec " + vector_text(t.vec);
  return line;
}

}  // namespace

InstanceFile parse_instance(const std::string& text) {
  return InstanceParser(text).run();
}

std::string serialize_instance(const AffineVass& v,
                               const std::vector<InstanceQuery>& queries) {
  std::ostringstream out;
  out << "vass d=" << v.dim << "\n";
  if (!v.states.empty()) {
    out << "state";
    for (const std::string& s : v.states) out << " " << s;
    out << "\n";
  }
  for (const Transition& t : v.transitions) out << transition_text(v, t) << "\n";
  for (const InstanceQuery& q : queries) out << query_text(v, q) << "\n";
  return out.str();
}

std::string serialize_reduced(const ReducedVass& r, const InstanceQuery& query) {
  std::ostringstream out;
  const AffineVass& v = r.inner;
  out << "vass d=" << v.dim << "\n";
  out << "state";
  for (const std::string& s : v.states) out << " " << s;
  out << "\n";
  for (int ti = 0; ti < v.num_transitions(); ++ti) {
    out << transition_text(v, v.transitions[static_cast<std::size_t>(ti)]);
    switch (r.stage[static_cast<std::size_t>(ti)]) {
      case StageTag::simul:
        out << "  # stage simul (source transition "
            << r.source_transition[static_cast<std::size_t>(ti)] << ")";
        break;
      case StageTag::end_guess:
        out << "  # stage end";
        break;
      case StageTag::mult:
        out << "  # stage mult";
        break;
      case StageTag::final_guess:
        out << "  # stage final";
        break;
    }
    out << "\n";
  }
  out << query_text(v, query) << "\n";
  return out.str();
}

Lba parse_lba_file(const std::string& text, std::string* word_out) {
  LineReader reader(text);
  Lba lba;
  std::map<std::string, int> states;
  std::string word;
  bool have_header = false;

  auto state_of = [&](const std::string& name) {
    auto it = states.find(name);
    if (it != states.end()) return it->second;
    int idx = lba.add_state(name);
    states.emplace(name, idx);
    return idx;
  };
  auto single_char = [](const std::string& tok, int line) {
    if (tok.size() != 1) throw parse_error(line, "expected a single character");
    return tok[0];
  };

  for (const auto& [line, tokens] : reader.lines) {
    const std::string& head = tokens[0];
    if (head == "lba") {
      have_header = true;
    } else if (!have_header) {
      throw parse_error(line, "lba header must come first");
    } else if (head == "tape") {
      if (tokens.size() != 2) throw parse_error(line, "expected: tape <chars>");
      lba.tape_alphabet = tokens[1];
    } else if (head == "input") {
      if (tokens.size() != 2) throw parse_error(line, "expected: input <chars>");
      lba.input_alphabet = tokens[1];
    } else if (head == "initial") {
      if (tokens.size() != 2) throw parse_error(line, "expected: initial <ID>");
      lba.initial = state_of(tokens[1]);
    } else if (head == "accept") {
      if (tokens.size() != 2) throw parse_error(line, "expected: accept <ID>");
      lba.accept = state_of(tokens[1]);
    } else if (head == "reject") {
      if (tokens.size() != 2) throw parse_error(line, "expected: reject <ID>");
      lba.reject = state_of(tokens[1]);
    } else if (head == "delta") {
      // delta <ID> <char> -> <ID> <char> L|R
      if (tokens.size() != 7 || tokens[3] != "->")
        throw parse_error(line, "expected: delta <ID> <char> -> <ID> <char> L|R");
      int p = state_of(tokens[1]);
      char a = single_char(tokens[2], line);
      int q = state_of(tokens[4]);
      char b = single_char(tokens[5], line);
      bool right;
      if (tokens[6] == "R")
        right = true;
      else if (tokens[6] == "L")
        right = false;
      else
        throw parse_error(line, "direction must be L or R");
      if (lba.delta.count({p, a}))
        throw parse_error(line, "nondeterministic delta entry");
      lba.delta[{p, a}] = {q, b, right};
    } else if (head == "word") {
      if (tokens.size() != 2) throw parse_error(line, "expected: word <string>");
      word = tokens[1];
    } else {
      throw parse_error(line, "unknown directive '" + head + "'");
    }
  }
  if (!have_header) throw parse_error(1, "missing lba header");
  try {
    lba.validate();
  } catch (const precondition_error& e) {
    throw parse_error(1, e.what());
  }
  if (word_out) *word_out = word;
  return lba;
}

PcpInstance parse_pcp_file(const std::string& text) {
  LineReader reader(text);
  PcpInstance inst;
  bool have_header = false;
  for (const auto& [line, tokens] : reader.lines) {
    if (tokens[0] == "pcp") {
      have_header = true;
    } else if (!have_header) {
      throw parse_error(line, "pcp header must come first");
    } else if (tokens[0] == "tile") {
      if (tokens.size() != 3) throw parse_error(line, "expected: tile <bits> <bits>");
      for (char c : tokens[1] + tokens[2])
        if (c != '0' && c != '1') throw parse_error(line, "tiles must be over {0,1}");
      inst.tiles.emplace_back(tokens[1], tokens[2]);
    } else {
      throw parse_error(line, "unknown directive '" + tokens[0] + "'");
    }
  }
  if (!have_header) throw parse_error(1, "missing pcp header");
  if (inst.tiles.empty()) throw parse_error(1, "pcp needs at least one tile");
  return inst;
}

}  // namespace avass
