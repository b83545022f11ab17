#include <doctest.h>

#include "oracles.hpp"
#include "rulebench/chase.hpp"
#include "rulebench/datalog.hpp"

using namespace rulebench;
using namespace oracle;

namespace {

RuleSet tc_rules(Term src, Term dst) {
  return RuleSet{Rule{"base", {A("E", {X("x"), X("y")})}, {A("T", {X("x"), X("y")})}},
                 Rule{"step", {A("T", {X("x"), X("y")}), A("E", {X("y"), X("z")})}, {A("T", {X("x"), X("z")})}},
                 Rule{"goal", {A("T", {src, dst})}, {Atom(Predicate("Goal"), {})}}};
}

Instance path(std::vector<std::string> names) {
  Instance out;
  for (std::size_t i = 0; i + 1 < names.size(); ++i) out.insert(A("E", {C(names[i]), C(names[i + 1])}));
  return out;
}

}  // namespace

TEST_CASE("query construction") {
  DatalogQuery q = DatalogQuery::make(tc_rules(C("a"), C("d")));
  CHECK(q.edb == std::set<Predicate>{Predicate("E")});
  CHECK(q.idb == std::set<Predicate>{Predicate("T"), Predicate("Goal")});
  CHECK_THROWS_AS(DatalogQuery::make(RuleSet{Rule{"ex", {A("E", {X("x"), X("y")})}, {A("E", {X("y"), X("z")})}}}),
                  DatalogError);
  CHECK_THROWS_AS(DatalogQuery::make(RuleSet{Rule{"t", {A("E", {X("x"), X("y")})}, {top(X("x"))}}}), DatalogError);
  CHECK_THROWS_AS(DatalogQuery::make(RuleSet{Rule{"g", {A("E", {X("x"), X("y")})}, {A("Goal", {X("x")})}}}),
                  DatalogError);
}

TEST_CASE("transitive closure matches Floyd-Warshall") {
  Instance p = path({"a", "b", "c", "d"});
  DatalogQuery q = DatalogQuery::make(tc_rules(C("a"), C("d")));
  Instance idb = eval_datalog(p, q);
  std::set<std::pair<Term, Term>> got;
  for (const Atom& a : idb.atoms())
    if (a.predicate == Predicate("T")) got.insert({a.args[0], a.args[1]});
  CHECK(got == floyd_warshall(p, Predicate("E")));
  CHECK(got.size() == 6);
  CHECK(holds(p, q));
  CHECK_FALSE(holds(path({"d", "c", "b", "a"}), q));
}

TEST_CASE("top rule and empty program") {
  DatalogQuery q = DatalogQuery::make(RuleSet{Rule{"t", {top(X("x"))}, {Atom(Predicate("Goal"), {})}}});
  CHECK(eval_datalog(Instance{A("E", {C("a"), C("b")})}, q) == Instance{Atom(Predicate("Goal"), {})});
  DatalogQuery empty = DatalogQuery::make(RuleSet{});
  CHECK(eval_datalog(Instance{A("E", {C("a"), C("b")})}, empty).empty());
  CHECK_FALSE(holds(Instance{A("E", {C("a"), C("b")})}, empty));
}

TEST_CASE("goal-free derivations do not hold") {
  DatalogQuery q = DatalogQuery::make(RuleSet{Rule{"base", {A("E", {X("x"), X("y")})}, {A("T", {X("x"), X("y")})}}});
  CHECK_FALSE(holds(path({"a", "b"}), q));
}

TEST_CASE("IDB facts in the input are rejected") {
  DatalogQuery q = DatalogQuery::make(tc_rules(C("a"), C("d")));
  CHECK_THROWS_AS(eval_datalog(Instance{A("T", {C("a"), C("b")})}, q), DatalogError);
}

TEST_CASE("random transitive closure against Floyd-Warshall") {
  Rng rng(31);
  DatalogQuery q = DatalogQuery::make(tc_rules(C("g0"), C("g1")));
  for (int round = 0; round < 100; ++round) {
    Instance e = random_instance(rng, {{"E", 2}}, make_terms("g", 5, 0), 10);
    auto fw = floyd_warshall(e, Predicate("E"));
    Instance idb = eval_datalog(e, q);
    std::set<std::pair<Term, Term>> got;
    for (const Atom& a : idb.atoms())
      if (a.predicate == Predicate("T")) got.insert({a.args[0], a.args[1]});
    CHECK(got == fw);
    CHECK(holds(e, q) == fw.count({C("g0"), C("g1")}) > 0);
  }
}

TEST_CASE("datalog agrees with the chase fixpoint") {
  Rng rng(37);
  std::vector<PredSpec> edb{{"E", 2}, {"A", 1}};
  for (int round = 0; round < 60; ++round) {
    Instance i = random_instance(rng, edb, make_terms("dc", 3, 1), 5);
    RuleSet rs;
    std::vector<PredSpec> all{{"E", 2}, {"A", 1}, {"P", 2}, {"Q", 1}};
    for (std::size_t k = 0; rs.size() < 3 && k < 20; ++k) {
      Rule r = random_rule(rng, all, "d" + std::to_string(rs.size()));
      if (!r.existentials().empty()) continue;
      bool edb_head = false;
      for (const Atom& a : r.head) edb_head |= a.predicate == Predicate("E") || a.predicate == Predicate("A");
      if (edb_head) continue;
      rs.add(r);
    }
    if (rs.empty()) continue;
    DatalogQuery q = DatalogQuery::make(rs);
    Instance idb = eval_datalog(i, q);
    Instance fix = i;
    for (;;) {
      Instance next = naive_one_step(fix, rs);
      if (next == fix) break;
      fix = next;
    }
    Instance expect;
    for (const Atom& a : fix.atoms())
      if (q.idb.count(a.predicate)) expect.insert(a);
    CHECK(atom_set(idb) == atom_set(expect));
  }
}
