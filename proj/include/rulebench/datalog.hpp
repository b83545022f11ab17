#pragma once

// Datalog queries with a nullary Goal, evaluated semi-naively.

#include <set>

#include "rulebench/kernel.hpp"
#include "rulebench/rules.hpp"

namespace rulebench {

class DatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DatalogQuery {
  RuleSet rules;
  std::set<Predicate> edb;
  std::set<Predicate> idb;  // head predicates plus the goal
  Predicate goal;

  // Derives edb/idb from the rules.  Throws DatalogError on existential
  // rules, top in a head, or a goal of nonzero arity.
  static DatalogQuery make(RuleSet rules, Predicate goal = Predicate("Goal"));
};

// IDB facts of the least fixpoint.  Throws DatalogError if `inst` already
// holds IDB facts.
Instance eval_datalog(const Instance& inst, const DatalogQuery& q);

bool holds(const Instance& inst, const DatalogQuery& q);

}  // namespace rulebench
