#pragma once

// Slow, independent reference implementations and random generators for the
// tests.  Nothing here calls the library's search or chase code.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rulebench/cliquewidth.hpp"
#include "rulebench/kernel.hpp"
#include "rulebench/rules.hpp"

// Readable failure messages in doctest.
namespace rulebench {
inline std::ostream& operator<<(std::ostream& os, Term t) { return os << t.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << a.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const Instance& i) { return os << "\n" << i.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const Color& c) { return os << c.to_string(); }
}  // namespace rulebench

namespace oracle {

using namespace rulebench;

inline Term C(const std::string& n) { return Term::constant(n); }
inline Term N(const std::string& n) { return Term::null(n); }
inline Term X(const std::string& n) { return Term::variable(n); }
inline Atom A(const std::string& p, std::vector<Term> args) { return Atom(Predicate(p), std::move(args)); }
inline Atom top(Term t) { return Atom(Predicate::top(), {t}); }

inline std::set<Atom> atom_set(const Instance& inst) {
  return std::set<Atom>(inst.atoms().begin(), inst.atoms().end());
}

inline std::set<Term> adom_set(const Instance& inst) {
  std::set<Term> out;
  for (const Atom& a : inst.atoms()) out.insert(a.args.begin(), a.args.end());
  return out;
}

// Every map from the non-constant terms of `source` into adom(target) that
// sends `source` into `target` (top(t) only needs h(t) in adom).  Brute force
// over |adom|^|terms|.
inline std::vector<std::map<Term, Term>> brute_homs(const std::vector<Atom>& source, const Instance& target,
                                                    std::size_t limit = SIZE_MAX) {
  std::set<Term> vars;
  for (const Atom& a : source)
    for (Term t : a.args)
      if (!t.is_constant()) vars.insert(t);
  std::vector<Term> vs(vars.begin(), vars.end());
  std::set<Term> dom_set = adom_set(target);
  std::vector<Term> dom(dom_set.begin(), dom_set.end());
  std::set<Atom> facts = atom_set(target);
  std::vector<std::map<Term, Term>> out;
  std::vector<std::size_t> idx(vs.size(), 0);
  if (!vs.empty() && dom.empty()) return out;
  for (;;) {
    std::map<Term, Term> h;
    for (std::size_t i = 0; i < vs.size(); ++i) h[vs[i]] = dom[idx[i]];
    bool ok = true;
    for (const Atom& a : source) {
      std::vector<Term> img;
      for (Term t : a.args) img.push_back(t.is_constant() ? t : h[t]);
      if (a.predicate.is_top()) {
        if (!dom_set.count(img[0])) ok = false;
      } else if (!facts.count(Atom(a.predicate, img))) {
        ok = false;
      }
      if (!ok) break;
    }
    if (ok) {
      out.push_back(h);
      if (out.size() >= limit) return out;
    }
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == dom.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

inline bool brute_hom_exists(const Instance& from, const Instance& to) {
  return !brute_homs(from.atoms(), to, 1).empty();
}

// Isomorphism by trying every bijection of the nulls (constants fixed),
// comparing with top facts added on both sides.
inline bool brute_isomorphic(const Instance& a0, const Instance& b0) {
  Instance a = a0.with_top_facts(), b = b0.with_top_facts();
  if (a.size() != b.size()) return false;
  std::set<Term> da = adom_set(a), db = adom_set(b);
  if (da.size() != db.size()) return false;
  std::vector<Term> na, nb;
  for (Term t : da) {
    if (t.is_constant()) {
      if (!db.count(t)) return false;
    } else {
      na.push_back(t);
    }
  }
  for (Term t : db)
    if (!t.is_constant()) nb.push_back(t);
  if (na.size() != nb.size()) return false;
  std::sort(nb.begin(), nb.end());
  std::set<Atom> fb = atom_set(b);
  do {
    std::map<Term, Term> h;
    for (std::size_t i = 0; i < na.size(); ++i) h[na[i]] = nb[i];
    bool ok = true;
    for (const Atom& x : a.atoms()) {
      std::vector<Term> img;
      for (Term t : x.args) img.push_back(t.is_constant() ? t : h[t]);
      if (!fb.count(Atom(x.predicate, img))) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(nb.begin(), nb.end()));
  return false;
}

// Skolem one-step from the definition: every assignment of the body
// variables into the active domain that satisfies the body fires.
inline Instance naive_one_step(const Instance& inst, const RuleSet& rules) {
  Instance out = inst;
  for (const Rule& r : rules.rules()) {
    for (const auto& h : brute_homs(r.body, inst)) {
      std::vector<Term> fr;
      for (Term v : r.frontier()) fr.push_back(h.at(v));
      std::map<Term, Term> ext = h;
      for (Term z : r.existentials()) ext[z] = Term::skolem(r.label, z.name(), fr);
      for (const Atom& a : r.head) {
        std::vector<Term> img;
        for (Term t : a.args) img.push_back(t.is_variable() ? ext.at(t) : t);
        out.insert(Atom(a.predicate, img));
      }
    }
  }
  return out;
}

inline Instance naive_chase(const Instance& inst, const RuleSet& rules, std::size_t k) {
  Instance cur = inst;
  for (std::size_t i = 0; i < k; ++i) cur = naive_one_step(cur, rules);
  return cur;
}

// Transitive closure of a binary relation over named vertices.
inline std::set<std::pair<Term, Term>> floyd_warshall(const Instance& inst, Predicate e) {
  std::vector<Term> vs;
  for (const Atom& a : inst.atoms())
    if (a.predicate == e)
      for (Term t : a.args) vs.push_back(t);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::size_t n = vs.size();
  auto id = [&](Term t) { return std::lower_bound(vs.begin(), vs.end(), t) - vs.begin(); };
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (const Atom& a : inst.atoms())
    if (a.predicate == e) r[id(a.args[0])][id(a.args[1])] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = 1;
  std::set<std::pair<Term, Term>> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j]) out.insert({vs[i], vs[j]});
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : p_(n) { std::iota(p_.begin(), p_.end(), 0); }
  std::size_t find(std::size_t x) { return p_[x] == x ? x : p_[x] = find(p_[x]); }
  void unite(std::size_t a, std::size_t b) { p_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> p_;
};

// Body components over variables, as sets of atom indexes.
inline std::vector<std::set<std::size_t>> body_components(const std::vector<Atom>& body) {
  std::map<Term, std::size_t> vid;
  for (const Atom& a : body)
    for (Term t : a.args)
      if (t.is_variable()) vid.emplace(t, vid.size());
  UnionFind uf(vid.size() + body.size());
  for (std::size_t i = 0; i < body.size(); ++i)
    for (Term t : body[i].args)
      if (t.is_variable()) uf.unite(vid.size() + i, vid[t]);
  std::map<std::size_t, std::set<std::size_t>> groups;
  for (std::size_t i = 0; i < body.size(); ++i) groups[uf.find(vid.size() + i)].insert(i);
  std::vector<std::set<std::size_t>> out;
  for (auto& [k, g] : groups) out.push_back(g);
  return out;
}

// ---------------------------------------------------------------------------
// Random generators.

using Rng = std::mt19937;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct PredSpec {
  std::string name;
  std::size_t arity;
};

inline Instance random_instance(Rng& rng, const std::vector<PredSpec>& preds, const std::vector<Term>& terms,
                                std::size_t max_atoms) {
  Instance out;
  std::size_t n = 1 + pick(rng, max_atoms);
  for (std::size_t i = 0; i < n; ++i) {
    const PredSpec& p = preds[pick(rng, preds.size())];
    std::vector<Term> args;
    for (std::size_t j = 0; j < p.arity; ++j) args.push_back(terms[pick(rng, terms.size())]);
    out.insert(Atom(Predicate(p.name), args));
  }
  return out;
}

inline std::vector<Term> make_terms(const std::string& prefix, std::size_t consts, std::size_t nulls) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < consts; ++i) out.push_back(C(prefix + "c" + std::to_string(i)));
  for (std::size_t i = 0; i < nulls; ++i) out.push_back(N(prefix + "n" + std::to_string(i)));
  return out;
}

// Random rule over `preds`: 1-2 body atoms over 3 variables, 1-2 head atoms
// that may use one existential variable.
inline Rule random_rule(Rng& rng, const std::vector<PredSpec>& preds, const std::string& label) {
  Rule r;
  r.label = label;
  std::vector<Term> bv = {X("x"), X("y"), X("w")};
  std::size_t nb = 1 + pick(rng, 2);
  for (std::size_t i = 0; i < nb; ++i) {
    const PredSpec& p = preds[pick(rng, preds.size())];
    std::vector<Term> args;
    for (std::size_t j = 0; j < p.arity; ++j) args.push_back(bv[pick(rng, bv.size())]);
    r.body.push_back(Atom(Predicate(p.name), args));
  }
  std::vector<Term> used = terms_of(r.body);
  std::vector<Term> hv = used.empty() ? std::vector<Term>{} : used;
  if (hv.empty() || coin(rng)) hv.push_back(X("z"));
  std::size_t nh = 1 + pick(rng, 2);
  for (std::size_t i = 0; i < nh; ++i) {
    const PredSpec& p = preds[pick(rng, preds.size())];
    std::vector<Term> args;
    for (std::size_t j = 0; j < p.arity; ++j) args.push_back(hv[pick(rng, hv.size())]);
    r.head.push_back(Atom(Predicate(p.name), args));
  }
  return r;
}

// A random tree decomposition of width <= 2 and a binary instance it covers.
struct TdInstance {
  Instance inst;
  TreeDecomposition td;
};

inline TdInstance random_td_instance(Rng& rng, std::size_t max_terms, const std::string& prefix) {
  std::vector<Term> pool;
  for (std::size_t i = 0; i < max_terms; ++i)
    pool.push_back(coin(rng, 0.3) ? C(prefix + "k" + std::to_string(i)) : N(prefix + "v" + std::to_string(i)));
  std::size_t next = 0;
  TdInstance out;
  std::size_t first = 1 + pick(rng, 3);
  out.td.bags.push_back({});
  out.td.parent.push_back(-1);
  for (std::size_t i = 0; i < first && next < pool.size(); ++i) out.td.bags[0].insert(pool[next++]);
  while (next < pool.size()) {
    std::size_t par = pick(rng, out.td.bags.size());
    std::vector<Term> keep(out.td.bags[par].begin(), out.td.bags[par].end());
    std::shuffle(keep.begin(), keep.end(), rng);
    keep.resize(std::min<std::size_t>(keep.size(), pick(rng, 3)));
    std::set<Term> bag(keep.begin(), keep.end());
    bag.insert(pool[next++]);
    if (bag.size() < 3 && next < pool.size() && coin(rng, 0.3)) bag.insert(pool[next++]);
    out.td.bags.push_back(bag);
    out.td.parent.push_back(static_cast<int>(par));
  }
  const char* binary[] = {"E", "F"};
  const char* unary[] = {"A", "B"};
  for (const auto& bag : out.td.bags) {
    std::vector<Term> b(bag.begin(), bag.end());
    for (std::size_t i = 0; i < 1 + pick(rng, 3); ++i) {
      if (coin(rng, 0.25)) {
        out.inst.insert(A(unary[pick(rng, 2)], {b[pick(rng, b.size())]}));
      } else {
        out.inst.insert(A(binary[pick(rng, 2)], {b[pick(rng, b.size())], b[pick(rng, b.size())]}));
      }
    }
  }
  // Drop bag members the atoms never mention.
  std::set<Term> dom = adom_set(out.inst);
  for (auto& bag : out.td.bags)
    for (auto it = bag.begin(); it != bag.end();) it = dom.count(*it) ? std::next(it) : bag.erase(it);
  return out;
}

}  // namespace oracle
