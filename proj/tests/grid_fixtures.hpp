#pragma once

// Random grid databases and queries, and chase-side marked satisfaction.

#include "oracles.hpp"
#include "rulebench/chase.hpp"
#include "rulebench/gridrw.hpp"

namespace rulebench {
inline std::ostream& operator<<(std::ostream& os, const MarkedQuery& q) { return os << q.to_string(); }
}  // namespace rulebench

namespace oracle {

using namespace rulebench;

inline const std::vector<std::string>& grid_constants() {
  static const std::vector<std::string> names{"a", "b", "c"};
  return names;
}

// At most `consts` constants and `max_facts` H/V/top facts; never empty.
inline Instance random_grid_db(Rng& rng, std::size_t consts, std::size_t max_facts) {
  Instance db;
  std::size_t n = 1 + pick(rng, max_facts);
  auto c = [&] { return C(grid_constants()[pick(rng, consts)]); };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t kind = pick(rng, 3);
    if (kind == 0) db.insert(top(c()));
    else db.insert(A(kind == 1 ? "H" : "V", {c(), c()}));
  }
  return db;
}

inline std::vector<Atom> random_grid_atoms(Rng& rng, std::size_t max_atoms, std::size_t max_consts) {
  std::vector<Term> pool{X("x"), X("y"), X("z"), X("w")};
  std::size_t nc = pick(rng, max_consts + 1);
  for (std::size_t i = 0; i < nc; ++i) pool.push_back(C(grid_constants()[i]));
  std::vector<Atom> atoms;
  std::size_t n = 1 + pick(rng, max_atoms);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t kind = pick(rng, 7);
    if (kind == 0) atoms.push_back(top(pool[pick(rng, pool.size())]));
    else atoms.push_back(A(kind % 2 ? "H" : "V", {pool[pick(rng, pool.size())], pool[pick(rng, pool.size())]}));
  }
  return atoms;
}

inline ConjunctiveQuery random_grid_cq(Rng& rng, std::size_t max_atoms, std::size_t max_consts) {
  return ConjunctiveQuery{random_grid_atoms(rng, max_atoms, max_consts)};
}

inline MarkedQuery random_marked_query(Rng& rng, std::size_t max_atoms, std::size_t max_consts) {
  auto atoms = random_grid_atoms(rng, max_atoms, max_consts);
  std::set<Term> marked;
  for (Term t : terms_of(atoms))
    if (t.is_constant() || coin(rng, 0.3)) marked.insert(t);
  return MarkedQuery(atoms, marked);
}

inline Instance grid_chase(const Instance& db, std::size_t k) { return chase_k(db, grid_rules(), {k}); }

// Some h maps the query into `inst` with t marked iff h(t) is a constant.
inline bool chase_marked(const Instance& inst, const MarkedQuery& mq) {
  HomSearchOptions opts;
  opts.admissible = [&](Term s, Term img) { return (mq.marked.count(s) > 0) == img.is_constant(); };
  return find_homomorphism(mq.atoms, inst, {}, opts).has_value();
}

// Converging atoms: H(t1,x) and V(t2,x) sharing the target x.
inline std::size_t converging_atoms(const MarkedQuery& mq) {
  std::map<Term, std::pair<bool, bool>> in;
  for (const Atom& a : mq.atoms) {
    if (a.predicate == Predicate("H")) in[a.args[1]].first = true;
    if (a.predicate == Predicate("V")) in[a.args[1]].second = true;
  }
  std::size_t n = 0;
  for (const Atom& a : mq.atoms) {
    if (a.predicate.is_top()) continue;
    auto [h, v] = in[a.args[1]];
    if (h && v) ++n;
  }
  return n;
}

}  // namespace oracle
