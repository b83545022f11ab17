#include "rulebench/binarycase.hpp"

#include "rulebench/cliquewidth.hpp"

namespace rulebench {

namespace {

bool side_holds(const std::vector<Atom>& phi, Term x, Term t, const Instance& inst) {
  Homomorphism fixed;
  fixed.set(x, t);
  // x may be absent from phi only when phi is empty or constant-only.
  std::vector<Atom> source = phi;
  source.emplace_back(Predicate::top(), std::vector<Term>{x});
  return find_homomorphism(source, inst, fixed).has_value();
}

}  // namespace

std::map<Term, DiscType> disc_types(const Instance& inst, const RuleSet& rules) {
  std::vector<BodySplit> splits;
  for (const Rule& r : rules.rules()) splits.push_back(split_disconnected_body(r));
  std::map<Term, DiscType> out;
  for (Term t : inst.adom()) {
    DiscType& type = out[t];
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (side_holds(splits[i].phi1, splits[i].x1, t, inst)) type.insert({rules[i].label, 1});
      if (side_holds(splits[i].phi2, splits[i].x2, t, inst)) type.insert({rules[i].label, 2});
    }
  }
  return out;
}

Instance saturate_disconnected(const Instance& inst, const RuleSet& rules) {
  auto types = disc_types(inst, rules);
  Instance out = inst;
  for (const Rule& r : rules.rules()) {
    // Color each term by which sides of r it satisfies.
    ColoredInstance ci;
    ci.inst = inst;
    for (const auto& [t, type] : types) {
      int code = (type.count({r.label, 1}) ? 1 : 0) | (type.count({r.label, 2}) ? 2 : 0);
      ci.coloring.emplace(t, Color(code));
    }
    Predicate p = r.head[0].predicate;
    for (int c1 : {1, 3})
      for (int c2 : {2, 3}) add_atoms_in_place(ci, p, {Color(c1), Color(c2)});
    out.merge(ci.inst);
  }
  return out;
}

}  // namespace rulebench
