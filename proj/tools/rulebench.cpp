// rulebench: command-line driver over the library.
//
// Reports go to stdout in the fact grammar (non-fact lines are `%` comments
// or a leading verdict word); --json switches to one JSON document.
// Exit codes: 0 ok, 1 usage, 2 parse, 3 validation, 4 resource cap.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

#include "rulebench/binarycase.hpp"
#include "rulebench/chase.hpp"
#include "rulebench/cliquewidth.hpp"
#include "rulebench/datalog.hpp"
#include "rulebench/gridrw.hpp"
#include "rulebench/io.hpp"
#include "rulebench/reify.hpp"

using namespace rulebench;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kValidation = 3, kResource = 4 };

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json atoms_json(const Instance& inst) {
  json out = json::array();
  for (const Atom& a : inst.sorted_atoms()) out.push_back(a.to_string());
  return out;
}

json hom_json(const Homomorphism& h) {
  json out = json::object();
  for (const auto& [k, v] : h.mapping()) out[k.is_variable() ? k.name() : k.to_string()] = v.to_string();
  return out;
}

Signature signature_of(const Instance& inst) {
  Signature sig;
  for (const Atom& a : inst.atoms()) sig.declare(a);
  return sig;
}

std::vector<std::string> issues_text(const std::vector<CwIssue>& issues) {
  std::vector<std::string> out;
  for (const CwIssue& i : issues) out.push_back(i.path + ": " + i.message);
  return out;
}

void require_valid(const EquationSystem& s, const Signature* sig = nullptr) {
  auto issues = validate(s, sig);
  if (issues.empty()) return;
  std::string msg = "invalid expression";
  for (const std::string& line : issues_text(issues)) msg += "\n  " + line;
  throw ValidationFailure(msg);
}

struct Context {
  Workspace ws;
  bool as_json = false;
  std::ostream& out = std::cout;

  void emit(const json& j) { out << j.dump(2) << "\n"; }
};

int cmd_chase(Context& c, const std::string& rules_path, const std::string& db_path,
              std::size_t depth) {
  const RuleSet& rules = c.ws.rules(rules_path);
  const Instance& db = c.ws.facts(db_path);
  Instance result = chase_k(db, rules, ChaseBudget{depth});
  if (c.as_json) {
    c.emit({{"command", "chase"}, {"depth", depth}, {"size", result.size()}, {"atoms", atoms_json(result)}});
  } else {
    c.out << "% chase depth " << depth << ", " << result.size() << " atoms\n" << print_facts(result);
  }
  return kOk;
}

int cmd_entail(Context& c, const std::string& rules_path, const std::string& db_path,
               const std::string& query_path, std::size_t budget) {
  const RuleSet& rules = c.ws.rules(rules_path);
  const Instance& db = c.ws.facts(db_path);
  const ConjunctiveQuery& q = c.ws.query(query_path);
  EntailmentResult r = entails_bcq(db, rules, q, ChaseBudget{budget});
  if (c.as_json) {
    json j{{"command", "entail"}, {"budget", budget}, {"result", r.entailed ? "ENTAILED" : "UNKNOWN"}};
    if (r.entailed) {
      j["step"] = r.step;
      j["witness"] = hom_json(*r.witness);
    }
    c.emit(j);
  } else if (r.entailed) {
    c.out << "ENTAILED\n% step " << r.step << "\n% witness " << r.witness->to_string() << "\n";
  } else {
    c.out << "UNKNOWN\n% not entailed by the chase up to step " << budget << "\n";
  }
  return kOk;
}

int cmd_datalog(Context& c, const std::string& program_path, const std::string& db_path) {
  const DatalogQuery& q = c.ws.datalog(program_path);
  const Instance& db = c.ws.facts(db_path);
  Instance idb = eval_datalog(db, q);
  bool goal = idb.contains(Atom(q.goal, {}));
  if (c.as_json) {
    c.emit({{"command", "datalog"}, {"goal", q.goal.name()}, {"holds", goal}, {"idb", atoms_json(idb)}});
  } else {
    c.out << "% goal " << q.goal.name() << (goal ? " holds" : " does not hold") << "\n" << print_facts(idb);
  }
  return kOk;
}

int cmd_reify(Context& c, const std::string& db, const std::string& rules, const std::string& query,
              const std::string& program) {
  int given = !db.empty() + !rules.empty() + !query.empty() + !program.empty();
  if (given != 1) throw CLI::ValidationError("reify", "give exactly one of --db, --rules, --query, --program");
  std::string text;
  json j{{"command", "reify"}};
  if (!db.empty()) {
    const Instance& inst = c.ws.facts(db);
    Instance r = reify_instance(inst, ReifiedSignature(c.ws.signature()));
    text = print_facts(r);
    j["atoms"] = atoms_json(r);
  } else if (!rules.empty()) {
    const RuleSet& rs = c.ws.rules(rules);
    text = print_rules(reify_rules(rs, ReifiedSignature(c.ws.signature())));
    j["rules"] = text;
  } else if (!query.empty()) {
    const ConjunctiveQuery& q = c.ws.query(query);
    text = print_query(reify_cq(q, ReifiedSignature(c.ws.signature())));
    j["query"] = text;
  } else {
    const DatalogQuery& q = c.ws.datalog(program);
    text = print_datalog(reify_datalog(q, ReifiedSignature(c.ws.signature())));
    j["program"] = text;
  }
  if (c.as_json) {
    c.emit(j);
  } else {
    c.out << text;
  }
  return kOk;
}

int cmd_dereify(Context& c, const std::string& db_path) {
  const Instance& inst = c.ws.facts(db_path);
  ReifiedSignature sig = ReifiedSignature::infer(signature_of(inst));
  Instance base = dereify_instance(inst, sig);
  if (c.as_json) {
    c.emit({{"command", "dereify"}, {"atoms", atoms_json(base)}});
  } else {
    c.out << print_facts(base);
  }
  return kOk;
}

int cmd_cw_eval(Context& c, const std::string& expr_path, std::size_t depth,
                const std::string& expected_path, bool show_coloring) {
  const EquationSystem& s = c.ws.cwexpr(expr_path);
  require_valid(s);
  ColoredInstance ci = eval(s, depth);
  std::optional<bool> iso;
  if (!expected_path.empty()) iso = is_isomorphic(ci.inst, c.ws.facts(expected_path));
  std::size_t colors = count_colors(s);
  if (c.as_json) {
    json j{{"command", "cw-eval"}, {"unfold", depth}, {"colors", colors}, {"atoms", atoms_json(ci.inst)}};
    if (show_coloring) {
      json col = json::object();
      for (const auto& [t, k] : ci.coloring) col[t.to_string()] = k.to_string();
      j["coloring"] = col;
    }
    if (iso) j["isomorphic"] = *iso;
    c.emit(j);
  } else {
    c.out << "% unfold " << depth << ", " << colors << " colors, " << ci.inst.size() << " atoms\n";
    c.out << print_facts(ci.inst);
    if (show_coloring)
      for (const auto& [t, k] : ci.coloring) c.out << "% color " << t.to_string() << " : " << k.to_string() << ".\n";
    if (iso) c.out << (*iso ? "ISOMORPHIC\n" : "NOT-ISOMORPHIC\n");
  }
  return iso.value_or(true) ? kOk : kValidation;
}

int cmd_td2cw(Context& c, const std::string& db_path, const std::string& td_path) {
  const Instance& inst = c.ws.facts(db_path);
  const TreeDecomposition& td = c.ws.td(td_path);
  if (std::string why = check_tree_decomposition(inst, td); !why.empty()) throw ValidationFailure(why);
  EquationSystem s = td_to_cw(inst, td);
  std::size_t colors = count_colors(s), bound = td_to_cw_color_bound(inst, td);
  if (c.as_json) {
    c.emit({{"command", "td2cw"}, {"width", td.width()}, {"colors", colors}, {"bound", bound},
            {"expression", to_string(s)}});
  } else {
    c.out << "% width " << td.width() << ", " << colors << " colors, bound " << bound << "\n"
          << to_string(s);
  }
  return kOk;
}

int cmd_recolor(Context& c, const std::string& expr_path, std::size_t depth,
                const std::string& coloring_path) {
  const EquationSystem& s = c.ws.cwexpr(expr_path);
  require_valid(s);
  const auto& target = c.ws.coloring(coloring_path);
  EquationSystem w = recolor_witness(s, target, depth);
  ColoredInstance expected = eval(s, depth);
  expected.coloring = target;
  bool ok = is_colored_isomorphic(eval(w, 0), expected);
  std::size_t colors = count_colors(w);
  if (c.as_json) {
    c.emit({{"command", "recolor"}, {"colors", colors}, {"verified", ok}, {"expression", to_string(w)}});
  } else {
    c.out << "% " << colors << " colors, " << (ok ? "verified" : "NOT verified") << "\n" << to_string(w);
  }
  return ok ? kOk : kValidation;
}

std::set<Term> resolve_marked(const ConjunctiveQuery& q, const std::vector<std::string>& names) {
  std::set<Term> out;
  auto terms = q.terms();
  for (const std::string& n : names) {
    auto it = std::find_if(terms.begin(), terms.end(), [&](Term t) { return t.name() == n; });
    if (it == terms.end()) throw ValidationFailure("marked term " + n + " does not occur in the query");
    out.insert(*it);
  }
  return out;
}

int cmd_grid_rewrite(Context& c, const std::string& query_path, const std::vector<std::string>& marked,
                     std::size_t cap) {
  const ConjunctiveQuery& q = c.ws.query(query_path);
  MarkedQuery mq(q.atoms, resolve_marked(q, marked));
  RewriteOptions opts;
  opts.cap = cap;
  auto out = rewrite(mq, opts);
  if (c.as_json) {
    json list = json::array();
    for (const MarkedQuery& d : out) list.push_back(d.to_string());
    c.emit({{"command", "grid-rewrite"}, {"input", proper_closure(mq).to_string()}, {"count", out.size()},
            {"rewriting", list}});
  } else {
    c.out << "% " << out.size() << " dead queries\n";
    for (const MarkedQuery& d : out) c.out << "% " << d.to_string() << "\n";
  }
  return kOk;
}

int cmd_grid_entail(Context& c, const std::string& db_path, const std::string& query_path, std::size_t cap) {
  const Instance& db = c.ws.facts(db_path);
  const ConjunctiveQuery& q = c.ws.query(query_path);
  RewriteOptions opts;
  opts.cap = cap;
  GridEntailment r = entails_grid(db, q, opts);
  if (c.as_json) {
    json j{{"command", "grid-entail"}, {"result", r.entailed ? "ENTAILED" : "NOT-ENTAILED"}};
    if (r.witness) j["witness"] = r.witness->to_string();
    c.emit(j);
  } else {
    c.out << (r.entailed ? "ENTAILED\n" : "NOT-ENTAILED\n");
    if (r.witness) c.out << "% witness " << r.witness->to_string() << "\n";
  }
  return kOk;
}

int cmd_disc_saturate(Context& c, const std::string& rules_path, const std::string& db_path) {
  const RuleSet& rules = c.ws.rules(rules_path);
  const Instance& db = c.ws.facts(db_path);
  auto types = disc_types(db, rules);
  Instance out = saturate_disconnected(db, rules);
  if (c.as_json) {
    json tj = json::object();
    for (const auto& [t, type] : types) {
      json markers = json::array();
      for (const DiscMarker& m : type) markers.push_back(m.rule + "/" + std::to_string(m.side));
      tj[t.to_string()] = markers;
    }
    c.emit({{"command", "disc-saturate"}, {"types", tj}, {"atoms", atoms_json(out)}});
  } else {
    for (const auto& [t, type] : types) {
      c.out << "% type " << t.to_string() << ":";
      for (const DiscMarker& m : type) c.out << " " << m.rule << "/" << m.side;
      c.out << "\n";
    }
    c.out << print_facts(out);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rulebench: existential rules, chase, cliquewidth and grid rewriting"};
  app.require_subcommand(1);
  Context ctx;
  app.add_flag("--json", ctx.as_json, "structured output");

  std::string rules, db, query, program, expr, expected, td, coloring;
  std::size_t depth = 0, budget = 10, cap = 100000;
  std::vector<std::string> marked;
  bool show_coloring = false;
  std::function<int()> run;

  auto* chase = app.add_subcommand("chase", "Skolem chase to a depth");
  chase->add_option("--rules", rules)->required();
  chase->add_option("--db", db)->required();
  chase->add_option("--depth", depth)->required();
  chase->callback([&] { run = [&] { return cmd_chase(ctx, rules, db, depth); }; });

  auto* entail = app.add_subcommand("entail", "bounded BCQ entailment");
  entail->add_option("--rules", rules)->required();
  entail->add_option("--db", db)->required();
  entail->add_option("--query", query)->required();
  entail->add_option("--budget", budget, "chase steps")->capture_default_str();
  entail->callback([&] { run = [&] { return cmd_entail(ctx, rules, db, query, budget); }; });

  auto* datalog = app.add_subcommand("datalog", "evaluate a datalog query");
  datalog->add_option("--program", program)->required();
  datalog->add_option("--db", db)->required();
  datalog->callback([&] { run = [&] { return cmd_datalog(ctx, program, db); }; });

  auto* reify = app.add_subcommand("reify", "reify facts, rules, a query or a program");
  reify->add_option("--db", db);
  reify->add_option("--rules", rules);
  reify->add_option("--query", query);
  reify->add_option("--program", program);
  reify->callback([&] { run = [&] { return cmd_reify(ctx, db, rules, query, program); }; });

  auto* dereify = app.add_subcommand("dereify", "rebuild high-arity atoms from reified facts");
  dereify->add_option("--db", db)->required();
  dereify->callback([&] { run = [&] { return cmd_dereify(ctx, db); }; });

  auto* cw_eval = app.add_subcommand("cw-eval", "evaluate a cliquewidth equation system");
  cw_eval->add_option("--expr", expr)->required();
  cw_eval->add_option("--unfold", depth)->required();
  cw_eval->add_option("--check-iso", expected, "facts the result must be isomorphic to");
  cw_eval->add_flag("--coloring", show_coloring, "print the coloring");
  cw_eval->callback([&] { run = [&] { return cmd_cw_eval(ctx, expr, depth, expected, show_coloring); }; });

  auto* td2cw = app.add_subcommand("td2cw", "cliquewidth expression from a tree decomposition");
  td2cw->add_option("--db", db)->required();
  td2cw->add_option("--td", td)->required();
  td2cw->callback([&] { run = [&] { return cmd_td2cw(ctx, db, td); }; });

  auto* recolor = app.add_subcommand("recolor", "expression for an arbitrary recoloring");
  recolor->add_option("--expr", expr)->required();
  recolor->add_option("--unfold", depth)->required();
  recolor->add_option("--coloring", coloring)->required();
  recolor->callback([&] { run = [&] { return cmd_recolor(ctx, expr, depth, coloring); }; });

  auto* grid_rewrite = app.add_subcommand("grid-rewrite", "rewrite a marked query for the grid rules");
  grid_rewrite->add_option("--query", query)->required();
  grid_rewrite->add_option("--marked", marked, "terms mapped to constants")->delimiter(',');
  grid_rewrite->add_option("--cap", cap)->capture_default_str();
  grid_rewrite->callback([&] { run = [&] { return cmd_grid_rewrite(ctx, query, marked, cap); }; });

  auto* grid_entail = app.add_subcommand("grid-entail", "query entailment under the grid rules");
  grid_entail->add_option("--db", db)->required();
  grid_entail->add_option("--query", query)->required();
  grid_entail->add_option("--cap", cap)->capture_default_str();
  grid_entail->callback([&] { run = [&] { return cmd_grid_entail(ctx, db, query, cap); }; });

  auto* disc = app.add_subcommand("disc-saturate", "one step of disconnected binary datalog rules");
  disc->add_option("--rules", rules)->required();
  disc->add_option("--db", db)->required();
  disc->callback([&] { run = [&] { return cmd_disc_saturate(ctx, rules, db); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return run();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kResource;
  } catch (const ValidationFailure& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}
