#include "rulebench/reify.hpp"

#include <charconv>
#include <cstdio>

namespace rulebench {

ReifiedSignature::ReifiedSignature(const Signature& base) : base_(base) {
  for (const auto& [name, arity] : base.arities())
    if (arity < 3) reified_.declare(Predicate(name), arity);
  for (const auto& [name, arity] : base.arities()) {
    if (arity < 3) continue;
    Predicate p(name);
    std::vector<Predicate> parts;
    for (std::size_t i = 1; i <= arity; ++i) {
      std::string sep = "_";
      std::string candidate = name + sep + std::to_string(i);
      while (base.contains(Predicate(candidate)) || reified_.contains(Predicate(candidate))) {
        sep.push_back('_');
        candidate = name + sep + std::to_string(i);
      }
      Predicate c(candidate);
      reified_.declare(c, 2);
      parts.push_back(c);
      origins_.emplace(c, std::make_pair(p, i));
    }
    components_.emplace(p, std::move(parts));
  }
}

ReifiedSignature ReifiedSignature::infer(const Signature& reified) {
  std::map<std::string, std::set<std::size_t>> groups;
  std::set<std::string> grouped;
  for (const auto& [name, arity] : reified.arities()) {
    if (arity != 2) continue;
    auto pos = name.rfind('_');
    if (pos == std::string::npos || pos == 0 || pos + 1 == name.size()) continue;
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(name.data() + pos + 1, name.data() + name.size(), idx);
    if (ec != std::errc() || ptr != name.data() + name.size()) continue;
    groups[name.substr(0, pos)].insert(idx);
  }
  Signature base;
  for (const auto& [name, arity] : reified.arities()) {
    auto pos = name.rfind('_');
    if (arity == 2 && pos != std::string::npos) {
      auto it = groups.find(name.substr(0, pos));
      if (it != groups.end() && it->second.size() >= 3 && *it->second.begin() == 1 &&
          *it->second.rbegin() == it->second.size())
        continue;
    }
    base.declare(Predicate(name), arity);
  }
  for (const auto& [stem, idx] : groups)
    if (idx.size() >= 3 && *idx.begin() == 1 && *idx.rbegin() == idx.size())
      base.declare(Predicate(stem), idx.size());
  return ReifiedSignature(base);
}

bool ReifiedSignature::is_reified(Predicate p) const { return components_.count(p) > 0; }

Predicate ReifiedSignature::component(Predicate p, std::size_t i) const {
  auto it = components_.find(p);
  if (it == components_.end() || i == 0 || i > it->second.size())
    throw std::out_of_range("no reified component " + std::to_string(i) + " for " + p.name());
  return it->second[i - 1];
}

std::optional<std::pair<Predicate, std::size_t>> ReifiedSignature::origin(Predicate p) const {
  auto it = origins_.find(p);
  if (it == origins_.end()) return std::nullopt;
  return it->second;
}

std::string hub_name(const Atom& a) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : a.to_string()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("u!") + buf;
}

std::vector<Atom> reify_atom(const Atom& a, Term hub, const ReifiedSignature& sig) {
  if (a.arity() < 3) return {a};
  if (!sig.is_reified(a.predicate))
    throw SignatureError("predicate " + a.predicate.name() + " is not in the base signature");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < a.arity(); ++i)
    out.emplace_back(sig.component(a.predicate, i + 1), std::vector<Term>{hub, a.args[i]});
  return out;
}

Instance reify_instance(const Instance& inst, const ReifiedSignature& sig) {
  Instance out;
  for (const Atom& a : inst.atoms()) {
    Term hub = a.arity() >= 3 ? Term::null(hub_name(a)) : Term();
    for (const Atom& b : reify_atom(a, hub, sig)) out.insert(b);
  }
  return out;
}

namespace {

// Body hubs become universal variables u!b!.., head hubs existential u!h!..
std::vector<Atom> reify_atoms(const std::vector<Atom>& atoms, std::string_view tag,
                              const ReifiedSignature& sig) {
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    Term hub;
    if (a.arity() >= 3) {
      std::string name = hub_name(a);
      hub = Term::variable(tag.empty() ? name : "u!" + std::string(tag) + name.substr(1));
    }
    for (Atom& b : reify_atom(a, hub, sig)) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

Rule reify_rule(const Rule& rule, const ReifiedSignature& sig) {
  return Rule{rule.label, reify_atoms(rule.body, "b", sig), reify_atoms(rule.head, "h", sig)};
}

RuleSet reify_rules(const RuleSet& rules, const ReifiedSignature& sig) {
  RuleSet out;
  for (const Rule& r : rules.rules()) out.add(reify_rule(r, sig));
  return out;
}

ConjunctiveQuery reify_cq(const ConjunctiveQuery& q, const ReifiedSignature& sig) {
  return ConjunctiveQuery{reify_atoms(q.atoms, "", sig)};
}

DatalogQuery reify_datalog(const DatalogQuery& q, const ReifiedSignature& sig) {
  auto reify_edb = [&](const std::vector<Atom>& atoms, std::string_view tag) {
    std::vector<Atom> out;
    for (const Atom& a : atoms) {
      if (q.idb.count(a.predicate)) {
        out.push_back(a);
        continue;
      }
      for (Atom& b : reify_atoms({a}, tag, sig)) out.push_back(std::move(b));
    }
    return out;
  };
  RuleSet rules;
  for (const Rule& r : q.rules.rules()) rules.add(Rule{r.label, reify_edb(r.body, "b"), r.head});
  return DatalogQuery::make(std::move(rules), q.goal);
}

Instance dereify_instance(const Instance& inst, const ReifiedSignature& sig) {
  Instance out;
  // hub -> R -> position -> values
  std::map<Term, std::map<Predicate, std::vector<std::vector<Term>>>> stars;
  for (const Atom& a : inst.atoms()) {
    auto o = sig.origin(a.predicate);
    if (!o) {
      out.insert(a);
      continue;
    }
    auto& slots = stars[a.args[0]][o->first];
    slots.resize(*sig.base().arity(o->first));
    slots[o->second - 1].push_back(a.args[1]);
  }
  for (const auto& [hub, by_pred] : stars) {
    for (const auto& [p, slots] : by_pred) {
      if (std::any_of(slots.begin(), slots.end(), [](const auto& s) { return s.empty(); }))
        continue;
      std::vector<std::size_t> idx(slots.size(), 0);
      while (true) {
        std::vector<Term> args;
        for (std::size_t i = 0; i < slots.size(); ++i) args.push_back(slots[i][idx[i]]);
        out.insert(Atom(p, std::move(args)));
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == slots[i].size()) idx[i++] = 0;
        if (i == idx.size()) break;
      }
    }
  }
  return out;
}

}  // namespace rulebench
