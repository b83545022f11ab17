#include <doctest.h>

#include "oracles.hpp"
#include "rulebench/cliquewidth.hpp"
#include "rulebench/reify.hpp"

using namespace rulebench;
using namespace oracle;

namespace {

TreeDecomposition td_of(std::vector<std::set<Term>> bags, std::vector<int> parent) {
  TreeDecomposition td;
  td.bags = std::move(bags);
  td.parent = std::move(parent);
  return td;
}

bool roundtrips(const Instance& inst, const TreeDecomposition& td) {
  EquationSystem s = td_to_cw(inst, td);
  if (!validate(s).empty()) return false;
  ColoredInstance ci = eval(s, 0);
  return is_isomorphic(ci.inst, inst) && count_colors(s) <= td_to_cw_color_bound(inst, td);
}

}  // namespace

TEST_CASE("tree decomposition checks") {
  Instance path{A("E", {C("a"), C("b")}), A("E", {C("b"), C("c")})};
  CHECK(check_tree_decomposition(path, td_of({{C("a"), C("b")}, {C("b"), C("c")}}, {-1, 0})).empty());
  // atom E(b,c) not covered
  CHECK_FALSE(check_tree_decomposition(path, td_of({{C("a"), C("b")}, {C("c")}}, {-1, 0})).empty());
  // b's bags are disconnected
  CHECK_FALSE(check_tree_decomposition(
                  path, td_of({{C("a"), C("b")}, {C("a"), C("c")}, {C("b"), C("c")}}, {-1, 0, 1}))
                  .empty());
  // two roots
  CHECK_FALSE(check_tree_decomposition(path, td_of({{C("a"), C("b")}, {C("b"), C("c")}}, {-1, -1})).empty());
  TreeDecomposition td = td_of({{C("a"), C("b")}, {C("b"), C("c")}}, {-1, 0});
  CHECK(td.width() == 1);
  CHECK(td.root() == 0);
}

TEST_CASE("td_to_cw spec examples") {
  Instance e{A("E", {C("a"), C("b")})};
  CHECK(roundtrips(e, td_of({{C("a"), C("b")}}, {-1})));

  Instance path{A("E", {C("a"), C("b")}), A("E", {C("b"), C("c")})};
  TreeDecomposition ptd = td_of({{C("a"), C("b")}, {C("b"), C("c")}}, {-1, 0});
  CHECK(roundtrips(path, ptd));
  // b has one leaf: it is introduced at its pivot only
  EquationSystem s = td_to_cw(path, ptd);
  CHECK(to_string(s).find("const b") == to_string(s).rfind("const b"));

  Instance loop{A("E", {C("a"), C("a")})};
  CHECK(roundtrips(loop, td_of({{C("a")}}, {-1})));

  Instance nulls{A("E", {N("p"), N("q")}), A("F", {N("q"), N("p")}), A("A", {N("q")})};
  CHECK(roundtrips(nulls, td_of({{N("p"), N("q")}}, {-1})));
}

TEST_CASE("td_to_cw rejects bad input") {
  Instance t{A("R", {C("a"), C("b"), C("c")})};
  CHECK_THROWS_AS(td_to_cw(t, td_of({{C("a"), C("b"), C("c")}}, {-1})), std::invalid_argument);
  Instance path{A("E", {C("a"), C("b")}), A("E", {C("b"), C("c")})};
  CHECK_THROWS_AS(td_to_cw(path, td_of({{C("a"), C("b")}, {C("c")}}, {-1, 0})), std::invalid_argument);
}

TEST_CASE("nullary atoms survive") {
  Instance i{A("E", {C("a"), C("b")}), Atom(Predicate("Z"), {})};
  CHECK(roundtrips(i, td_of({{C("a"), C("b")}}, {-1})));
}

TEST_CASE("color bound") {
  Instance e{A("E", {C("a"), C("b")}), A("A", {C("a")})};
  // k = 1, |S1| = 1, |S2| = 1: 2 * 2^(1 + 5) = 128
  CHECK(td_to_cw_color_bound(e, td_of({{C("a"), C("b")}}, {-1})) == 128);
}

TEST_CASE("td_to_cw on random instances") {
  Rng rng(59);
  for (int round = 0; round < 40; ++round) {
    TdInstance ti = random_td_instance(rng, 1 + pick(rng, 8), "t" + std::to_string(round) + "_");
    REQUIRE(check_tree_decomposition(ti.inst, ti.td).empty());
    CHECK(ti.td.width() <= 2);
    CHECK(roundtrips(ti.inst, ti.td));
  }
}

TEST_CASE("td_to_cw on reified instances") {
  // treewidth transfer exercised through the converter
  Instance base{A("R", {C("a"), C("b"), C("c")}), A("R", {C("c"), C("d"), C("a")})};
  Signature sig;
  sig.declare(Predicate("R"), 3);
  Instance r = reify_instance(base, ReifiedSignature(sig));
  Term h0 = N(hub_name(A("R", {C("a"), C("b"), C("c")}))), h1 = N(hub_name(A("R", {C("c"), C("d"), C("a")})));
  TreeDecomposition td = td_of({{C("a"), C("c")}, {h0, C("a"), C("c")}, {h1, C("a"), C("c")}, {h0, C("b")}, {h1, C("d")}},
                               {-1, 0, 0, 1, 2});
  REQUIRE(check_tree_decomposition(r, td).empty());
  CHECK(roundtrips(r, td));
}
