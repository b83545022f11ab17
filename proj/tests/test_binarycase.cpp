#include <doctest.h>

#include "binary_fixtures.hpp"
#include "oracles.hpp"
#include "rulebench/binarycase.hpp"
#include "rulebench/chase.hpp"

using namespace rulebench;
using namespace oracle;

namespace {

Rule product(const std::string& label, const std::string& a, const std::string& b, const std::string& head) {
  return Rule{label, {A(a, {X("x")}), A(b, {X("y")})}, {A(head, {X("x"), X("y")})}};
}

}  // namespace

TEST_CASE("disc_types spec examples") {
  RuleSet rs{product("rho", "A", "A", "E")};
  auto types = disc_types(Instance{A("A", {C("a")}), A("A", {C("b")})}, rs);
  DiscType both{{"rho", 1}, {"rho", 2}};
  CHECK(types.at(C("a")) == both);
  CHECK(types.at(C("b")) == both);

  auto t2 = disc_types(Instance{A("A", {C("a")}), A("B", {C("b")})}, rs);
  CHECK(t2.at(C("b")).empty());
  CHECK(t2.at(C("a")) == both);

  RuleSet two{product("r1", "A", "B", "E"), product("r2", "B", "A", "E")};
  auto t3 = disc_types(Instance{A("A", {C("a")}), A("B", {C("b")})}, two);
  CHECK(t3.at(C("a")) == DiscType{{"r1", 1}, {"r2", 2}});
  CHECK(t3.at(C("b")) == DiscType{{"r1", 2}, {"r2", 1}});
}

TEST_CASE("disc_types rejects connected rules") {
  RuleSet rs{Rule{"c", {A("E", {X("x"), X("y")})}, {A("F", {X("x"), X("y")})}}};
  CHECK_THROWS_AS(disc_types(Instance{A("E", {C("a"), C("b")})}, rs), RuleError);
}

TEST_CASE("saturate_disconnected spec examples") {
  RuleSet rs{product("rho", "A", "A", "E")};
  Instance i{A("A", {C("a")}), A("A", {C("b")})};
  Instance out = saturate_disconnected(i, rs);
  for (Term x : {C("a"), C("b")})
    for (Term y : {C("a"), C("b")}) CHECK(out.contains(A("E", {x, y})));
  CHECK(out == one_step(i, rs));

  Instance none{A("B", {C("a")})};
  CHECK(saturate_disconnected(none, rs) == none);
  CHECK(saturate_disconnected(i, RuleSet{}) == i);
}

TEST_CASE("saturation equals one chase step on random inputs") {
  Rng rng(61);
  std::vector<PredSpec> preds{{"A", 1}, {"B", 1}, {"E", 2}};
  for (int round = 0; round < 60; ++round) {
    Instance i = random_instance(rng, preds, make_terms("bc", 3, 1), 6);
    RuleSet rs;
    for (std::size_t k = 0; k < 1 + pick(rng, 2); ++k) rs.add(random_disc_rule(rng, "d" + std::to_string(k)));
    CHECK(atom_set(saturate_disconnected(i, rs)) == atom_set(naive_one_step(i, rs)));
  }
}

TEST_CASE("types are invariant under isomorphism") {
  Rng rng(67);
  std::vector<PredSpec> preds{{"A", 1}, {"B", 1}, {"E", 2}};
  for (int round = 0; round < 30; ++round) {
    Instance i = random_instance(rng, preds, make_terms("ti", 1, 3), 6);
    RuleSet rs{random_disc_rule(rng, "t")};
    std::map<Term, Term> ren;
    for (Term t : i.adom()) ren[t] = t.is_null() ? N("iso" + t.name()) : t;
    Instance j;
    for (const Atom& a : i.atoms()) j.insert(Homomorphism(ren).apply(a));
    auto ti = disc_types(i, rs), tj = disc_types(j, rs);
    for (const auto& [t, type] : ti) CHECK(tj.at(ren.at(t)) == type);
  }
}
