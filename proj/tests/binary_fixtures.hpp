#pragma once

#include "oracles.hpp"

namespace oracle {

using namespace rulebench;

// A random disconnected datalog rule with head R(x,y): two variable-disjoint
// random bodies around x and y.
inline Rule random_disc_rule(Rng& rng, const std::string& label) {
  std::vector<PredSpec> preds{{"A", 1}, {"B", 1}, {"E", 2}};
  auto side = [&](Term v, Term w) {
    std::vector<Atom> out;
    for (std::size_t i = 0; i < 1 + pick(rng, 2); ++i) {
      const PredSpec& p = preds[pick(rng, preds.size())];
      if (p.arity == 1) {
        out.push_back(A(p.name, {coin(rng, 0.8) ? v : w}));
      } else {
        std::vector<Term> pool{v, w, C("c0")};
        out.push_back(A(p.name, {pool[pick(rng, 3)], pool[pick(rng, 3)]}));
      }
    }
    auto ts = terms_of(out);
    if (!std::count(ts.begin(), ts.end(), v)) out.push_back(A("A", {v}));
    return out;
  };
  Rule r;
  r.label = label;
  r.body = side(X("x"), X("u"));
  auto rest = side(X("y"), X("w"));
  r.body.insert(r.body.end(), rest.begin(), rest.end());
  r.head = {A(coin(rng) ? "E" : "F", {X("x"), X("y")})};
  return r;
}

}  // namespace oracle
