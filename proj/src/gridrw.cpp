#include "rulebench/gridrw.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace rulebench {

namespace {

const Predicate& pred_h() {
  static const Predicate p("H");
  return p;
}
const Predicate& pred_v() {
  static const Predicate p("V");
  return p;
}

bool is_edge(const Atom& a) {
  return a.arity() == 2 && (a.predicate == pred_h() || a.predicate == pred_v());
}

Atom top_of(Term t) { return Atom(Predicate::top(), {t}); }

void canonicalize(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

MarkedQuery restrict_marking(std::vector<Atom> atoms, const std::set<Term>& marked) {
  MarkedQuery out(std::move(atoms), {});
  for (Term t : out.terms())
    if (marked.count(t)) out.marked.insert(t);
  return out;
}

// Terms reachable from `from` along directed H/V edges (excluding `from`
// unless it lies on a cycle).
std::set<Term> successors_closure(const std::vector<Atom>& atoms, Term from) {
  std::set<Term> seen;
  std::vector<Term> stack{from};
  while (!stack.empty()) {
    Term cur = stack.back();
    stack.pop_back();
    for (const Atom& a : atoms)
      if (is_edge(a) && a.args[0] == cur && seen.insert(a.args[1]).second) stack.push_back(a.args[1]);
  }
  return seen;
}

}  // namespace

MarkedQuery::MarkedQuery(std::vector<Atom> a, std::set<Term> m)
    : atoms(std::move(a)), marked(std::move(m)) {
  canonicalize(atoms);
}

std::vector<Term> MarkedQuery::terms() const { return terms_of(atoms); }

bool MarkedQuery::is_dead() const {
  for (Term t : terms())
    if (!marked.count(t)) return false;
  return true;
}

std::string MarkedQuery::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out.append(", ");
    out.append(atoms[i].to_string());
  }
  if (atoms.empty()) out.append("true");
  out.append(" | marked {");
  bool first = true;
  for (Term t : marked) {
    if (!first) out.append(", ");
    first = false;
    out.append(t.to_string());
  }
  out.append("}");
  return out;
}

bool eval_marked(const Instance& inst, const MarkedQuery& mq) {
  for (Term t : mq.terms())
    if (t.is_constant() && !mq.marked.count(t)) return false;
  HomSearchOptions opts;
  opts.admissible = [&](Term src, Term img) {
    return (mq.marked.count(src) > 0) == img.is_constant();
  };
  return find_homomorphism(mq.atoms, inst, {}, opts).has_value();
}

MarkedQuery proper_closure(const MarkedQuery& mq) {
  MarkedQuery out = restrict_marking(mq.atoms, mq.marked);
  std::vector<Term> terms = out.terms();
  std::set<Term>& m = out.marked;
  for (Term t : terms)
    if (t.is_constant()) m.insert(t);
  // Directed cycles through a constant.
  for (Term c : terms) {
    if (!c.is_constant()) continue;
    std::set<Term> fwd = successors_closure(out.atoms, c);
    if (!fwd.count(c)) continue;
    for (Term t : fwd)
      if (successors_closure(out.atoms, t).count(c)) m.insert(t);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    auto mark = [&](Term t) {
      if (m.insert(t).second) changed = true;
    };
    for (const Atom& a : out.atoms) {
      if (!is_edge(a)) continue;
      if (m.count(a.args[1])) mark(a.args[0]);
      for (const Atom& b : out.atoms) {
        if (!is_edge(b) || b.predicate != a.predicate || b.args[1] != a.args[1]) continue;
        if (m.count(a.args[0])) mark(b.args[0]);
        if (a.args[0].is_constant() && b.args[0].is_constant() && a.args[0] != b.args[0])
          mark(a.args[1]);
      }
    }
  }
  return out;
}

bool is_properly_marked(const MarkedQuery& mq) {
  return proper_closure(mq).marked == mq.marked;
}

std::optional<MarkedQuery> normalize(const MarkedQuery& mq) {
  std::vector<Term> terms = mq.terms();
  std::map<Term, std::size_t> index;
  for (std::size_t i = 0; i < terms.size(); ++i) index[terms[i]] = i;
  std::vector<std::size_t> parent(terms.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Atom& a : mq.atoms)
    for (std::size_t i = 1; i < a.args.size(); ++i)
      parent[find(index[a.args[i]])] = find(index[a.args[0]]);

  std::set<std::size_t> has_mark, has_cycle;
  for (Term t : mq.marked)
    if (index.count(t)) has_mark.insert(find(index[t]));
  std::vector<Atom> unmarked_edges;
  for (const Atom& a : mq.atoms)
    if (is_edge(a) && !mq.marked.count(a.args[0]) && !mq.marked.count(a.args[1]))
      unmarked_edges.push_back(a);
  for (Term t : terms)
    if (!mq.marked.count(t) && successors_closure(unmarked_edges, t).count(t))
      has_cycle.insert(find(index[t]));
  for (std::size_t c : has_cycle)
    if (has_mark.count(c)) return std::nullopt;

  std::map<Term, std::size_t> occurrences;
  for (const Atom& a : mq.atoms)
    if (!a.predicate.is_top())
      for (Term t : a.args) ++occurrences[t];
  std::vector<Atom> kept;
  for (const Atom& a : mq.atoms) {
    if (!a.args.empty() && !has_mark.count(find(index[a.args[0]]))) continue;
    if (a.predicate.is_top() && a.arity() == 1 && occurrences[a.args[0]] > 0) continue;
    kept.push_back(a);
  }
  return restrict_marking(std::move(kept), mq.marked);
}

std::vector<Term> maximal_variables(const MarkedQuery& mq) {
  std::set<Term> has_out;
  for (const Atom& a : mq.atoms)
    if (is_edge(a)) has_out.insert(a.args[0]);
  std::vector<Term> out;
  for (Term t : mq.terms())
    if (t.is_variable() && !mq.marked.count(t) && !has_out.count(t)) out.push_back(t);
  return out;
}

MaximalCase classify_maximal(const MarkedQuery& mq, Term x) {
  auto maxes = maximal_variables(mq);
  if (!std::binary_search(maxes.begin(), maxes.end(), x))
    throw std::invalid_argument(x.to_string() + " is not a maximal variable");
  std::map<Predicate, std::vector<Term>> sources;
  for (const Atom& a : mq.atoms)
    if (is_edge(a) && a.args[1] == x) sources[a.predicate].push_back(a.args[0]);
  MaximalCase c;
  for (auto& [p, ts] : sources) {
    std::sort(ts.begin(), ts.end());
    if (ts.size() >= 2) {
      c.kind = MaximalCase::Kind::Converging;
      c.predicate = p;
      c.t = ts[0];
      c.t2 = ts[1];
      return c;
    }
  }
  auto h = sources.find(pred_h());
  auto v = sources.find(pred_v());
  if (h != sources.end() && v != sources.end()) {
    c.kind = MaximalCase::Kind::TwoAtoms;
    c.t = h->second[0];
    c.t2 = v->second[0];
    return c;
  }
  if (sources.empty()) {
    c.kind = MaximalCase::Kind::Isolated;
    return c;
  }
  c.kind = MaximalCase::Kind::OneAtom;
  c.predicate = sources.begin()->first;
  c.t = sources.begin()->second[0];
  return c;
}

MarkedQuery cut(const MarkedQuery& mq, Term x) {
  MaximalCase c = classify_maximal(mq, x);
  if (c.kind != MaximalCase::Kind::OneAtom)
    throw std::invalid_argument("cut needs " + x.to_string() + " in exactly one atom");
  std::vector<Atom> rest;
  for (const Atom& a : mq.atoms) {
    if (is_edge(a) && a.args[1] == x) continue;
    if (a.predicate.is_top() && a.args[0] == x) continue;
    rest.push_back(a);
  }
  bool t_remains = std::any_of(rest.begin(), rest.end(), [&](const Atom& a) {
    return std::find(a.args.begin(), a.args.end(), c.t) != a.args.end();
  });
  // A vanishing constant or marked variable still demands a constant.
  if (!t_remains && (c.t.is_constant() || mq.marked.count(c.t))) rest.push_back(top_of(c.t));
  return proper_closure(restrict_marking(std::move(rest), mq.marked));
}

std::vector<MarkedQuery> reduce(const MarkedQuery& mq, Term x) {
  MaximalCase c = classify_maximal(mq, x);
  if (c.kind != MaximalCase::Kind::TwoAtoms)
    throw std::invalid_argument("reduce needs " + x.to_string() + " in one H and one V atom");
  std::set<std::string> names;
  for (Term t : mq.terms()) names.insert(t.name());
  std::size_t n = 0;
  while (names.count("_r" + std::to_string(n))) ++n;
  Term fresh = Term::variable("_r" + std::to_string(n));
  std::vector<Atom> atoms;
  for (const Atom& a : mq.atoms) {
    if (is_edge(a) && a.args[1] == x) continue;
    if (a.predicate.is_top() && a.args[0] == x) continue;
    atoms.push_back(a);
  }
  atoms.push_back(Atom(pred_h(), {fresh, c.t2}));
  atoms.push_back(Atom(pred_v(), {fresh, c.t}));
  std::set<Term> with_fresh = mq.marked;
  with_fresh.insert(fresh);
  return {proper_closure(restrict_marking(atoms, mq.marked)),
          proper_closure(restrict_marking(atoms, with_fresh))};
}

MarkedQuery merge(const MarkedQuery& mq, Term x, Term t, Term t2) {
  (void)x;
  if (t == t2) throw std::invalid_argument("merge needs two distinct terms");
  if (t.is_constant() && t2.is_constant())
    throw std::invalid_argument("cannot merge distinct constants " + t.to_string() + " and " +
                                t2.to_string());
  if (t.is_constant()) std::swap(t, t2);
  Homomorphism sub{{t, t2}};
  std::vector<Atom> atoms = sub.apply(mq.atoms);
  atoms.push_back(top_of(t));
  return proper_closure(MarkedQuery(std::move(atoms), mq.marked));
}

namespace {

Instance frozen(const MarkedQuery& mq) {
  Homomorphism freeze;
  for (Term t : mq.terms())
    if (t.is_variable()) freeze.set(t, Term::null("q!" + t.name()));
  Instance out;
  for (const Atom& a : mq.atoms) out.insert(freeze.apply(a));
  for (Term t : mq.marked) out.insert(Atom("marked!", {freeze.apply(t)}));
  return out;
}

std::uint64_t fingerprint(const MarkedQuery& mq) {
  std::vector<std::uint64_t> parts;
  std::map<Term, std::array<std::uint32_t, 5>> deg;
  for (const Atom& a : mq.atoms) {
    if (a.predicate == pred_h()) {
      ++deg[a.args[0]][0];
      ++deg[a.args[1]][1];
    } else if (a.predicate == pred_v()) {
      ++deg[a.args[0]][2];
      ++deg[a.args[1]][3];
    } else {
      for (Term t : a.args) ++deg[t][4];
    }
  }
  for (const auto& [t, d] : deg) {
    std::uint64_t h = mq.marked.count(t) ? 7 : 3;
    if (t.is_constant()) h = h * 31 + t.id();
    for (std::uint32_t v : d) h = h * 1000003 + v;
    parts.push_back(h);
  }
  std::sort(parts.begin(), parts.end());
  std::uint64_t h = mq.atoms.size();
  for (std::uint64_t p : parts) h = (h ^ p) * 1099511628211ULL;
  return h;
}

}  // namespace

bool equivalent_up_to_renaming(const MarkedQuery& a, const MarkedQuery& b) {
  if (a.atoms.size() != b.atoms.size() || a.marked.size() != b.marked.size()) return false;
  return is_isomorphic(frozen(a), frozen(b));
}

std::vector<MarkedQuery> rewrite(const MarkedQuery& mq, const RewriteOptions& options) {
  std::vector<MarkedQuery> result;
  std::map<std::uint64_t, std::vector<std::size_t>> seen_index;
  std::vector<MarkedQuery> seen;
  std::deque<MarkedQuery> work;

  auto admit = [&](const MarkedQuery& q) {
    std::uint64_t fp = fingerprint(q);
    auto& bucket = seen_index[fp];
    for (std::size_t i : bucket)
      if (equivalent_up_to_renaming(seen[i], q)) return false;
    if (seen.size() >= options.cap)
      throw ResourceError("grid rewriting explored more than " + std::to_string(options.cap) +
                          " queries");
    bucket.push_back(seen.size());
    seen.push_back(q);
    return true;
  };

  if (auto start = normalize(proper_closure(mq)))
    if (admit(*start)) work.push_back(*start);

  while (!work.empty()) {
    MarkedQuery q = std::move(work.front());
    work.pop_front();
    if (q.is_dead()) {
      result.push_back(q);
      continue;
    }
    auto maxes = maximal_variables(q);
    if (maxes.empty())
      throw std::logic_error("alive query without a maximal variable: " + q.to_string());
    Term x = maxes.front();
    MaximalCase c = classify_maximal(q, x);
    std::vector<MarkedQuery> raw;
    switch (c.kind) {
      case MaximalCase::Kind::OneAtom:
        raw.push_back(cut(q, x));
        break;
      case MaximalCase::Kind::TwoAtoms:
        raw = reduce(q, x);
        break;
      case MaximalCase::Kind::Converging:
        if (!(c.t.is_constant() && c.t2.is_constant())) raw.push_back(merge(q, x, c.t, c.t2));
        break;
      case MaximalCase::Kind::Isolated: {
        std::vector<Atom> rest;
        for (const Atom& a : q.atoms)
          if (!(a.predicate.is_top() && a.args[0] == x)) rest.push_back(a);
        raw.push_back(proper_closure(restrict_marking(std::move(rest), q.marked)));
        break;
      }
    }
    std::vector<MarkedQuery> next;
    for (const MarkedQuery& r : raw)
      if (auto n = normalize(r)) next.push_back(std::move(*n));
    if (options.on_step) options.on_step(q, c.kind, next);
    for (MarkedQuery& n : next)
      if (admit(n)) work.push_back(std::move(n));
  }
  return result;
}

GridEntailment entails_grid(const Instance& db, const ConjunctiveQuery& q,
                            const RewriteOptions& options) {
  for (const Atom& a : q.atoms) {
    bool ok = (a.predicate.is_top() && a.arity() == 1) || is_edge(a);
    if (!ok) throw std::invalid_argument("not a grid query atom: " + a.to_string());
  }
  GridEntailment out;
  if (!q.has_constants()) {
    out.entailed = true;
    return out;
  }
  std::vector<Term> terms = q.terms();
  if (terms.size() > 24) throw ResourceError("too many query terms to enumerate markings");
  std::vector<Term> vars;
  std::set<Term> base;
  for (Term t : terms) {
    if (t.is_constant()) base.insert(t);
    else vars.push_back(t);
  }
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << vars.size()); ++bits) {
    std::set<Term> m = base;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (bits >> i & 1) m.insert(vars[i]);
    MarkedQuery mq(q.atoms, m);
    if (!is_properly_marked(mq)) continue;
    for (const MarkedQuery& dead : rewrite(mq, options)) {
      if (eval_marked(db, dead)) {
        out.entailed = true;
        out.witness = dead;
        return out;
      }
    }
  }
  return out;
}

}  // namespace rulebench
