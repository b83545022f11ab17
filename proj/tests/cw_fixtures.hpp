#pragma once

// Cliquewidth systems shared by the unit and acceptance tests.

#include "oracles.hpp"
#include "rulebench/cliquewidth.hpp"
#include "rulebench/reify.hpp"

namespace oracle {

using namespace rulebench;

// E = Add_{R,(1,2)}(*1 (+) Recolor_{1->2}(E))
inline EquationSystem iless_system() {
  EquationSystem s;
  s.equations["E"] = cw::add(Predicate("R"), {Color(1), Color(2)},
                             cw::unite(cw::null_leaf(1), cw::recolor(1, 2, cw::ref("E"))));
  s.root = cw::ref("E");
  return s;
}

// {R(i,j) | 0 <= i < j < n} over nulls.
inline Instance strict_order(std::size_t n) {
  Instance out;
  for (std::size_t i = 0; i < n; ++i) {
    out.insert(top(N("o" + std::to_string(i))));
    for (std::size_t j = i + 1; j < n; ++j) out.insert(A("R", {N("o" + std::to_string(i)), N("o" + std::to_string(j))}));
  }
  return out;
}

inline ReifiedSignature tern_signature() {
  Signature s;
  s.declare(Predicate("R"), 3);
  return ReifiedSignature(s);
}

// Root Add_{R1,(5,1)}(*1 (+) E),
// E = Recolor_{2->3} Recolor_{4->5} Recolor_{3->6} Add_{R3,(4,3)} Add_{R2,(4,2)} (*2 (+) (*4 (+) E))
inline EquationSystem itern_system() {
  ReifiedSignature rs = tern_signature();
  Predicate r1 = rs.component(Predicate("R"), 1), r2 = rs.component(Predicate("R"), 2),
            r3 = rs.component(Predicate("R"), 3);
  EquationSystem s;
  CwExpr inner = cw::unite(cw::null_leaf(2), cw::unite(cw::null_leaf(4), cw::ref("E")));
  s.equations["E"] = cw::recolor(
      2, 3,
      cw::recolor(4, 5, cw::recolor(3, 6, cw::add(r3, {Color(4), Color(3)}, cw::add(r2, {Color(4), Color(2)}, inner)))));
  s.root = cw::add(r1, {Color(5), Color(1)}, cw::unite(cw::null_leaf(1), cw::ref("E")));
  return s;
}

// reify({R(-1, n, n+1) | 0 <= n < d}) over nulls.
inline Instance itern_reified(std::size_t d) {
  auto t = [](long v) { return N("t" + std::to_string(v)); };
  Instance base;
  for (std::size_t n = 0; n < d; ++n) base.insert(A("R", {t(-1), t(long(n)), t(long(n) + 1)}));
  return reify_instance(base, tern_signature()).with_top_facts();
}

// What unfolding depth d produces: the first d reified triples without the
// last triple's third argument, which only the next level introduces.
inline Instance itern_prefix(std::size_t d) {
  Instance full = itern_reified(d);
  std::set<Term> keep;
  for (Term x : full.adom())
    if (x != N("t" + std::to_string(d))) keep.insert(x);
  return induced_subinstance(full, keep);
}

// Random valid system over colors 1..k with predicates E (binary) and A
// (unary), one possibly recursive equation F, and constants only outside F.
inline EquationSystem random_system(Rng& rng, int k, const std::string& tag) {
  for (;;) {
    int constants = 0, refs = 0;
    std::function<CwExpr(int, bool)> gen = [&](int budget, bool in_f) -> CwExpr {
      auto color = [&] { return Color(static_cast<int>(1 + pick(rng, std::size_t(k)))); };
      std::size_t choice = budget <= 0 ? pick(rng, 3) : pick(rng, 7);
      switch (choice) {
        case 0:
          return cw::null_leaf(color());
        case 1:
          if (!in_f && constants < 2) return cw::const_leaf(C(tag + "k" + std::to_string(constants++)), color());
          return cw::null_leaf(color());
        case 2:
          if (refs < 2 && coin(rng, 0.5)) {
            ++refs;
            return cw::ref("F");
          }
          return cw::null_leaf(color());
        case 3:
        case 4:
          return cw::unite(gen(budget - 1, in_f), gen(budget - 1, in_f));
        case 5:
          if (coin(rng, 0.3)) return cw::add(Predicate("A"), {color()}, gen(budget - 1, in_f));
          return cw::add(Predicate("E"), {color(), color()}, gen(budget - 1, in_f));
        default:
          return cw::recolor(color(), color(), gen(budget - 1, in_f));
      }
    };
    EquationSystem s;
    s.equations["F"] = gen(3, true);
    refs = 0;
    s.root = gen(3, false);
    if (validate(s).empty()) return s;
  }
}

}  // namespace oracle
