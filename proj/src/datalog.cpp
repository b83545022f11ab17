#include "rulebench/datalog.hpp"

#include <algorithm>

namespace rulebench {

DatalogQuery DatalogQuery::make(RuleSet rules, Predicate goal) {
  DatalogQuery q;
  q.goal = goal;
  if (auto ar = rules.signature().arity(goal); ar && *ar != 0)
    throw DatalogError("goal " + goal.name() + " must be nullary");
  for (const Rule& r : rules.rules()) {
    if (!r.existentials().empty())
      throw DatalogError("rule " + r.label + " has existential variables");
    for (const Atom& a : r.head) {
      if (a.predicate.is_top()) throw DatalogError("rule " + r.label + " derives top");
      q.idb.insert(a.predicate);
    }
  }
  q.idb.insert(goal);
  for (const Rule& r : rules.rules())
    for (const Atom& a : r.body)
      if (!a.predicate.is_top() && !q.idb.count(a.predicate)) q.edb.insert(a.predicate);
  q.rules = std::move(rules);
  return q;
}

Instance eval_datalog(const Instance& inst, const DatalogQuery& q) {
  for (const Atom& a : inst.atoms())
    if (q.idb.count(a.predicate))
      throw DatalogError("input contains the IDB fact " + a.to_string());

  Instance all = inst;
  Instance idb;
  std::size_t delta_begin = 0;
  bool full_round = true;
  while (true) {
    std::vector<Atom> produced;
    for (const Rule& rule : q.rules.rules()) {
      auto fire = [&](const Homomorphism& h) {
        for (const Atom& a : rule.head) produced.push_back(h.apply(a));
        return true;
      };
      if (full_round) {
        for_each_homomorphism(rule.body, all, {}, fire);
        continue;
      }
      // Only IDB atoms change after the first round.
      for (const Atom& pattern : rule.body) {
        if (!q.idb.count(pattern.predicate)) continue;
        auto cands = all.with_predicate(pattern.predicate);
        for (auto it = std::lower_bound(cands.begin(), cands.end(), delta_begin);
             it != cands.end(); ++it) {
          const Atom& fact = all.atom(*it);
          Homomorphism fixed;
          bool ok = fact.arity() == pattern.arity();
          for (std::size_t i = 0; ok && i < pattern.args.size(); ++i) {
            Term p = pattern.args[i];
            if (!p.is_variable()) ok = p == fact.args[i];
            else if (fixed.contains(p)) ok = fixed.apply(p) == fact.args[i];
            else fixed.set(p, fact.args[i]);
          }
          if (ok) for_each_homomorphism(rule.body, all, fixed, fire);
        }
      }
    }
    std::size_t old_size = all.size();
    std::size_t old_adom = all.adom_size();
    for (const Atom& a : produced)
      if (all.insert(a)) idb.insert(a);
    if (all.size() == old_size) break;
    delta_begin = old_size;
    // A head constant can enlarge the domain, which top atoms then see.
    full_round = all.adom_size() != old_adom;
  }
  return idb;
}

bool holds(const Instance& inst, const DatalogQuery& q) {
  return eval_datalog(inst, q).contains(Atom(q.goal, {}));
}

}  // namespace rulebench
