#include "rulebench/rules.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace rulebench {

namespace {

std::set<Term> variables_in(const std::vector<Atom>& atoms) {
  std::set<Term> out;
  for (const Atom& a : atoms)
    for (Term t : a.args)
      if (t.is_variable()) out.insert(t);
  return out;
}

std::string atoms_to_string(const std::vector<Atom>& atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out.append(", ");
    const Atom& a = atoms[i];
    out.append(a.predicate.name());
    out.push_back('(');
    for (std::size_t j = 0; j < a.args.size(); ++j) {
      if (j) out.push_back(',');
      Term t = a.args[j];
      // Inside rules bare identifiers are variables, so constants are quoted.
      if (t.is_variable()) {
        out.append(t.name());
      } else {
        std::string q = "\"";
        for (char c : t.name()) {
          if (c == '"' || c == '\\') q.push_back('\\');
          q.push_back(c);
        }
        out.append(q).push_back('"');
      }
    }
    out.push_back(')');
  }
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

// Maps each body variable to a component representative.
std::map<Term, std::size_t> body_components(const Rule& rule) {
  std::vector<Term> vars = rule.body_variables();
  std::map<Term, std::size_t> index;
  for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = i;
  UnionFind uf(vars.size());
  for (const Atom& a : rule.body) {
    std::optional<std::size_t> first;
    for (Term t : a.args) {
      if (!t.is_variable()) continue;
      if (first) uf.unite(*first, index[t]);
      else first = index[t];
    }
  }
  std::map<Term, std::size_t> out;
  for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i]] = uf.find(i);
  return out;
}

}  // namespace

std::vector<Term> Rule::frontier() const {
  std::set<Term> b = variables_in(body), h = variables_in(head);
  std::vector<Term> out;
  std::set_intersection(b.begin(), b.end(), h.begin(), h.end(), std::back_inserter(out));
  return out;
}

std::vector<Term> Rule::existentials() const {
  std::set<Term> b = variables_in(body), h = variables_in(head);
  std::vector<Term> out;
  std::set_difference(h.begin(), h.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Term> Rule::body_variables() const {
  std::set<Term> b = variables_in(body);
  return {b.begin(), b.end()};
}

std::string Rule::to_string() const {
  std::string out;
  if (!label.empty()) out.append("[").append(label).append("] ");
  out.append(atoms_to_string(body));
  out.append(body.empty() ? "-> " : " -> ");
  auto ex = existentials();
  if (!ex.empty()) {
    out.append("exists ");
    for (std::size_t i = 0; i < ex.size(); ++i) out.append(i ? "," : "").append(ex[i].name());
    out.append(". ");
  }
  out.append(atoms_to_string(head)).append(".");
  return out;
}

RuleSet::RuleSet(std::initializer_list<Rule> rules) {
  for (const Rule& r : rules) add(r);
}

RuleSet::RuleSet(std::vector<Rule> rules) {
  for (Rule& r : rules) add(std::move(r));
}

void RuleSet::add(Rule rule) {
  if (rule.label.empty()) rule.label = "r" + std::to_string(rules_.size());
  for (const Rule& r : rules_)
    if (r.label == rule.label) throw RuleError("duplicate rule label " + rule.label);
  Signature sig = signature_;
  for (const auto* part : {&rule.body, &rule.head}) {
    for (const Atom& a : *part) {
      for (Term t : a.args)
        if (t.is_null()) throw RuleError("rule " + rule.label + " mentions a null");
      try {
        sig.declare(a);
      } catch (const SignatureError& e) {
        throw RuleError("rule " + rule.label + ": " + e.what());
      }
    }
  }
  signature_ = std::move(sig);
  rules_.push_back(std::move(rule));
}

std::string RuleSet::to_string() const {
  std::string out;
  for (const Rule& r : rules_) out.append(r.to_string()).push_back('\n');
  return out;
}

RuleClass classify(const Rule& rule) {
  RuleClass c;
  c.is_datalog = rule.existentials().empty();
  c.is_single_headed = rule.head.size() == 1;
  for (const auto* part : {&rule.body, &rule.head})
    for (const Atom& a : *part) c.max_arity = std::max(c.max_arity, a.arity());
  if (!c.is_datalog) return c;
  c.connectivity = Connectivity::Connected;
  auto comp = body_components(rule);
  std::set<std::size_t> seen;
  for (const Atom& a : rule.head)
    for (Term t : a.args)
      if (t.is_variable()) seen.insert(comp.at(t));
  if (seen.size() > 1) c.connectivity = Connectivity::Disconnected;
  return c;
}

BodySplit split_disconnected_body(const Rule& rule) {
  RuleClass c = classify(rule);
  if (!c.is_datalog || c.connectivity != Connectivity::Disconnected)
    throw RuleError("rule " + rule.label + " is not a disconnected datalog rule");
  if (rule.head.size() != 1 || rule.head[0].arity() != 2)
    throw RuleError("rule " + rule.label + " does not have a single binary head");
  BodySplit split;
  split.x1 = rule.head[0].args[0];
  split.x2 = rule.head[0].args[1];
  if (!split.x1.is_variable() || !split.x2.is_variable())
    throw RuleError("rule " + rule.label + " has a constant in its head");
  auto comp = body_components(rule);
  std::size_t c1 = comp.at(split.x1);
  for (const Atom& a : rule.body) {
    bool in_first = std::any_of(a.args.begin(), a.args.end(),
                                [&](Term t) { return t.is_variable() && comp.at(t) == c1; });
    (in_first ? split.phi1 : split.phi2).push_back(a);
  }
  return split;
}

}  // namespace rulebench
