#include "avass/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "avass/c1.hpp"
#include "avass/errors.hpp"
#include "avass/gen_poly.hpp"
#include "avass/instance_io.hpp"
#include "avass/monoid.hpp"
#include "avass/solver.hpp"
#include "json.hpp"

namespace avass {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json vector_json(const IntVector& v) {
  json arr = json::array();
  for (int i = 0; i < v.dim(); ++i) arr.push_back(to_string(v[i]));
  return arr;
}

struct CheckOptions {
  std::optional<long> max_steps;
  std::optional<long> max_abs;
  std::optional<long> max_monoid;
  int depth = 16;
  bool witness = false;
  bool json_format = false;
};

SolveCaps caps_from(const CheckOptions& opt) {
  SolveCaps caps;
  caps.c1_depth = opt.depth;
  if (opt.max_steps || opt.max_abs) {
    SearchBounds b;
    if (opt.max_steps) b.max_steps = *opt.max_steps;
    if (opt.max_abs) b.max_abs_value = *opt.max_abs;
    caps.oracle = b;
  }
  if (opt.max_monoid) caps.monoid_cap = MonoidCaps{Int(*opt.max_monoid), std::nullopt};
  return caps;
}

json caps_json(const CheckOptions& opt) {
  json j;
  j["depth"] = opt.depth;
  j["max_steps"] = opt.max_steps ? json(*opt.max_steps) : json(nullptr);
  j["max_abs"] = opt.max_abs ? json(*opt.max_abs) : json(nullptr);
  j["max_monoid"] = opt.max_monoid ? json(*opt.max_monoid) : json(nullptr);
  return j;
}

const char* verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::reachable:
      return "reachable";
    case Verdict::Kind::unreachable:
      return "unreachable";
    case Verdict::Kind::unknown:
      return "unknown";
  }
  return "unknown";
}

int cmd_check(const std::string& path, const CheckOptions& opt, std::ostream& out) {
  InstanceFile file = parse_instance(read_file(path));
  SolveCaps caps = caps_from(opt);

  json doc;
  doc["caps"] = caps_json(opt);
  doc["queries"] = json::array();

  bool any_unknown = false;
  for (std::size_t qi = 0; qi < file.queries.size(); ++qi) {
    const InstanceQuery& iq = file.queries[qi];
    Verdict verdict;
    const AffineVass* run_system = &file.system;
    AffineVass cover_system;  // keeps the transformed system alive for replay
    if (iq.cover) {
      auto [v2, rq] = cover_to_reach(file.system, iq.query.from_state,
                                     iq.query.from_values, iq.query.to_state,
                                     iq.query.to_values);
      cover_system = std::move(v2);
      verdict = reach_affine(cover_system, rq.from_state, rq.from_values,
                             rq.to_state, rq.to_values, caps);
      run_system = &cover_system;
    } else {
      verdict = reach_affine(file.system, iq.query.from_state, iq.query.from_values,
                             iq.query.to_state, iq.query.to_values, caps);
    }
    any_unknown |= verdict.kind == Verdict::Kind::unknown;

    json q;
    q["index"] = qi;
    q["type"] = iq.cover ? "cover" : "reach";
    q["from"] = {{"state",
                  file.system.states[static_cast<std::size_t>(iq.query.from_state)]},
                 {"values", vector_json(iq.query.from_values)}};
    q["to"] = {{"state",
                file.system.states[static_cast<std::size_t>(iq.query.to_state)]},
               {"values", vector_json(iq.query.to_values)}};
    q["verdict"] = verdict_name(verdict.kind);
    q["note"] = verdict.note;
    json stats;
    stats["monoid_size"] = to_string(verdict.monoid_size);
    stats["monoid_norm"] = to_string(verdict.monoid_norm);
    stats["particulars_checked"] = verdict.particulars_checked;
    stats["levels"] = verdict.levels;
    q["stats"] = stats;
    if (verdict.witness) {
      json steps = json::array();
      for (int s : verdict.witness->run.steps) steps.push_back(s);
      q["witness"] = steps;
      q["witness_on_cover_system"] = iq.cover;
    }
    doc["queries"].push_back(q);

    if (!opt.json_format) {
      out << "query " << qi << " (" << (iq.cover ? "cover" : "reach")
          << "): " << verdict_name(verdict.kind);
      if (!verdict.note.empty()) out << " -- " << verdict.note;
      out << "\n";
      if (opt.witness && verdict.witness) {
        out << "  witness steps:";
        for (int s : verdict.witness->run.steps) out << " " << s;
        out << "\n";
        ReplayResult rep = replay(*run_system, verdict.witness->run);
        if (rep.ok) {
          out << "  final: "
              << run_system->states[static_cast<std::size_t>(
                     rep.final_config().state)]
              << rep.final_config().values.str() << "\n";
        }
      }
    }
  }
  if (opt.json_format) out << doc.dump(2) << "\n";
  return any_unknown ? 2 : 0;
}

int cmd_classify(const std::string& path, bool json_format, std::ostream& out) {
  InstanceFile file = parse_instance(read_file(path));
  MatrixClassSet cls = classify_vass(file.system);
  std::set<IntMatrix> distinct, non_identity;
  for (const Transition& t : file.system.transitions) {
    distinct.insert(t.mat);
    if (!t.mat.is_identity()) non_identity.insert(t.mat);
  }
  if (json_format) {
    json j;
    j["reset"] = cls.reset;
    j["permutation"] = cls.permutation;
    j["transfer"] = cls.transfer;
    j["copyless"] = cls.copyless;
    j["copy"] = cls.copy;
    j["identity"] = cls.identity;
    j["distinct_matrices"] = distinct.size();
    j["distinct_non_identity"] = non_identity.size();
    out << j.dump(2) << "\n";
  } else {
    auto flag = [&](const char* name, bool b) {
      out << "  " << name << ": " << (b ? "yes" : "no") << "\n";
    };
    out << "matrix classes (all transitions):\n";
    flag("reset", cls.reset);
    flag("permutation", cls.permutation);
    flag("transfer", cls.transfer);
    flag("copyless", cls.copyless);
    flag("copy", cls.copy);
    flag("identity", cls.identity);
    out << "distinct matrices: " << distinct.size() << "\n";
    out << "distinct non-identity matrices: " << non_identity.size() << "\n";
  }
  return 0;
}

int cmd_monoid(const std::string& path, const CheckOptions& opt, std::ostream& out) {
  InstanceFile file = parse_instance(read_file(path));
  std::vector<IntMatrix> gens;
  for (const Transition& t : file.system.transitions) gens.push_back(t.mat);
  std::optional<MonoidCaps> cap;
  if (opt.max_monoid) cap = MonoidCaps{Int(*opt.max_monoid), std::nullopt};
  FinitenessResult fin = decide_finiteness(file.system.dim, gens, cap);

  if (opt.json_format) {
    json j;
    j["status"] = fin.kind == FinitenessResult::Kind::finite ? "finite"
                  : fin.kind == FinitenessResult::Kind::infinite ? "infinite"
                                                                 : "unknown";
    j["elements"] = fin.monoid.size();
    j["norm"] = to_string(fin.monoid.norm());
    json w = json::array();
    for (int g : fin.witness_word) w.push_back(g);
    j["witness_word"] = w;
    out << j.dump(2) << "\n";
  } else {
    switch (fin.kind) {
      case FinitenessResult::Kind::finite:
        out << "monoid: finite, " << fin.monoid.size() << " elements, norm "
            << to_string(fin.monoid.norm()) << "\n";
        break;
      case FinitenessResult::Kind::infinite: {
        out << "monoid: infinite; witness product of transitions";
        for (int g : fin.witness_word) out << " " << g;
        out << "\n";
        break;
      }
      case FinitenessResult::Kind::unknown:
        out << "monoid: unknown (cap exceeded; generators have negative entries)\n";
        return 2;
    }
  }
  return fin.kind == FinitenessResult::Kind::unknown ? 2 : 0;
}

const InstanceQuery& first_reach_query(const InstanceFile& file) {
  for (const InstanceQuery& q : file.queries)
    if (!q.cover) return q;
  throw error("this command needs a reach query in the instance file");
}

int cmd_reduce(const std::string& path, std::ostream& out) {
  InstanceFile file = parse_instance(read_file(path));
  const InstanceQuery& q = first_reach_query(file);
  ReduceOutcome outcome =
      reduce_afmp(file.system, q.query.from_state, q.query.to_state);
  switch (outcome.kind) {
    case ReduceOutcome::Kind::infinite_monoid:
      throw error("matrix monoid is infinite; no finite reduction exists");
    case ReduceOutcome::Kind::unknown_finiteness:
      throw error("matrix monoid finiteness undecided under the cap");
    case ReduceOutcome::Kind::ok:
      break;
  }
  const ReducedVass& r = *outcome.reduced;
  const int d = file.system.dim;
  IntVector from(2 * d), to(2 * d);
  for (int i = 0; i < d; ++i) {
    from[i] = q.query.from_values[i];
    to[d + i] = q.query.to_values[i];
  }
  InstanceQuery rq{false, ReachQuery{r.start, std::move(from), r.end, std::move(to)}};
  out << serialize_reduced(r, rq);
  return 0;
}

int cmd_formula(const std::string& path, std::ostream& out) {
  InstanceFile file = parse_instance(read_file(path));
  const InstanceQuery& q = first_reach_query(file);
  out << export_formula(file.system, q.query.from_state, q.query.to_state);
  return 0;
}

int cmd_oracle(const std::string& path, const CheckOptions& opt, std::ostream& out) {
  InstanceFile file = parse_instance(read_file(path));
  SearchBounds bounds;
  if (opt.max_steps) bounds.max_steps = *opt.max_steps;
  if (opt.max_abs) bounds.max_abs_value = *opt.max_abs;

  json doc;
  doc["caps"] = caps_json(opt);
  doc["queries"] = json::array();
  bool any_unknown = false;
  for (std::size_t qi = 0; qi < file.queries.size(); ++qi) {
    const InstanceQuery& iq = file.queries[qi];
    if (iq.cover) throw error("oracle handles reach queries only");
    BfsResult res = bfs_reach(
        file.system, Configuration{iq.query.from_state, iq.query.from_values},
        Configuration{iq.query.to_state, iq.query.to_values}, bounds);
    std::string verdict =
        res.found ? "reachable" : (res.exhaustive() ? "unreachable" : "unknown");
    any_unknown |= !res.found && !res.exhaustive();
    if (opt.json_format) {
      json q;
      q["index"] = qi;
      q["verdict"] = verdict;
      q["visited"] = res.stats.visited;
      q["pruned"] = res.stats.pruned;
      if (res.found) {
        json steps = json::array();
        for (int s : res.run.steps) steps.push_back(s);
        q["witness"] = steps;
      }
      doc["queries"].push_back(q);
    } else {
      out << "query " << qi << ": " << verdict << " (visited " << res.stats.visited
          << (res.stats.pruned ? ", pruned" : "") << ")\n";
      if (opt.witness && res.found) {
        out << "  witness steps:";
        for (int s : res.run.steps) out << " " << s;
        out << "\n";
      }
    }
  }
  if (opt.json_format) out << doc.dump(2) << "\n";
  return any_unknown ? 2 : 0;
}

int cmd_gen_lba(const std::string& path, std::ostream& out) {
  std::string word;
  Lba lba = parse_lba_file(read_file(path), &word);
  if (word.empty()) throw error("lba file must carry a word directive");
  GeneratedInstance inst = gen_lba(lba, word);
  out << "# membership instance for word " << word << "\n";
  out << serialize_instance(inst.vass, {InstanceQuery{false, inst.query}});
  return 0;
}

int cmd_gen_pcp(const std::string& path, std::ostream& out) {
  PcpInstance inst = parse_pcp_file(read_file(path));
  GeneratedInstance gen = gen_pcp(inst);
  out << "# correspondence instance with " << inst.tiles.size() << " tiles\n";
  out << serialize_instance(gen.vass, {InstanceQuery{false, gen.query}});
  return 0;
}

int cmd_compile_poly(const std::string& expr, std::ostream& out) {
  Polynomial p = parse_polynomial(expr);
  CounterProgram cp = compile_poly(p);
  LoweredProgram lp = lower_ir(cp);
  out << "# zero-solvability instance for " << expr << "\n";
  out << "# counters:";
  for (const std::string& c : cp.counters) out << " " << c;
  out << "\n";
  out << serialize_instance(lp.vass, {InstanceQuery{false, lp.query}});
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact reachability toolkit for affine integer VASS"};
  app.require_subcommand(1);

  std::string path, expr;
  CheckOptions opt;
  std::string format = "human";

  auto add_common = [&](CLI::App* cmd, bool with_caps) {
    cmd->add_option("--format", format, "output format: human or json")
        ->check(CLI::IsMember({"human", "json"}));
    if (with_caps) {
      cmd->add_option("--max-steps", opt.max_steps, "oracle step cap");
      cmd->add_option("--max-abs", opt.max_abs, "oracle value cap");
      cmd->add_option("--max-monoid", opt.max_monoid, "monoid element cap");
      cmd->add_option("--depth", opt.depth, "level iteration depth cap");
      cmd->add_flag("--witness", opt.witness, "print witness runs");
    }
  };

  CLI::App* check = app.add_subcommand("check", "decide the queries of an instance");
  check->add_option("file", path)->required();
  add_common(check, true);

  CLI::App* classify = app.add_subcommand("classify", "matrix class report");
  classify->add_option("file", path)->required();
  add_common(classify, false);

  CLI::App* monoid = app.add_subcommand("monoid", "matrix monoid finiteness");
  monoid->add_option("file", path)->required();
  add_common(monoid, true);

  CLI::App* reduce = app.add_subcommand("reduce", "emit the simulation Z-VASS");
  reduce->add_option("file", path)->required();

  CLI::App* formula = app.add_subcommand("formula", "emit the reachability formula");
  formula->add_option("file", path)->required();

  CLI::App* oracle = app.add_subcommand("oracle", "bounded breadth-first search");
  oracle->add_option("file", path)->required();
  add_common(oracle, true);

  CLI::App* genlba = app.add_subcommand("gen-lba", "compile an LBA membership file");
  genlba->add_option("file", path)->required();

  CLI::App* genpcp = app.add_subcommand("gen-pcp", "compile a correspondence file");
  genpcp->add_option("file", path)->required();

  CLI::App* poly = app.add_subcommand("compile-poly", "compile a polynomial");
  poly->add_option("expr", expr)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }
  opt.json_format = format == "json";

  try {
    if (check->parsed()) return cmd_check(path, opt, out);
    if (classify->parsed()) return cmd_classify(path, opt.json_format, out);
    if (monoid->parsed()) return cmd_monoid(path, opt, out);
    if (reduce->parsed()) return cmd_reduce(path, out);
    if (formula->parsed()) return cmd_formula(path, out);
    if (oracle->parsed()) return cmd_oracle(path, opt, out);
    if (genlba->parsed()) return cmd_gen_lba(path, out);
    if (genpcp->parsed()) return cmd_gen_pcp(path, out);
    if (poly->parsed()) return cmd_compile_poly(expr, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand\n";
  return 1;
}

}  // namespace avass
