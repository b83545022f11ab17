#pragma once

// First-order rewriting for the grid rule set via marked queries.
//
// A marked query (q, M) holds in an instance I when some homomorphism h maps
// q into I with t in M exactly when h(t) is a constant.

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "rulebench/kernel.hpp"

namespace rulebench {

struct MarkedQuery {
  std::vector<Atom> atoms;  // over H, V and top; kept sorted and duplicate-free
  std::set<Term> marked;

  MarkedQuery() = default;
  MarkedQuery(std::vector<Atom> a, std::set<Term> m);

  std::vector<Term> terms() const;
  bool is_dead() const;  // every term marked
  std::string to_string() const;

  friend bool operator==(const MarkedQuery&, const MarkedQuery&) = default;
};

bool eval_marked(const Instance& inst, const MarkedQuery& mq);

// Least superset of M closed under the five marking rules.
MarkedQuery proper_closure(const MarkedQuery& mq);
bool is_properly_marked(const MarkedQuery& mq);

// Drops top(t) when t occurs in another atom and drops connected components
// without a marked term (the loop null satisfies them).  Returns nullopt when
// a component holds a marked term and a directed cycle of unmarked terms: in
// the chase such a cycle can only sit on the loop null, whose component has
// no constants.
std::optional<MarkedQuery> normalize(const MarkedQuery& mq);

// Unmarked variables without outgoing H/V atoms, sorted.
std::vector<Term> maximal_variables(const MarkedQuery& mq);

struct MaximalCase {
  enum class Kind {
    OneAtom,     // R(t,x)
    TwoAtoms,    // H(t,x), V(t2,x)
    Converging,  // R(t,x), R(t2,x), t != t2
    Isolated,    // x occurs only in top atoms
  };
  Kind kind = Kind::OneAtom;
  Predicate predicate;  // OneAtom, Converging
  Term t;
  Term t2;
};

// Throws std::invalid_argument unless x is maximal.
MaximalCase classify_maximal(const MarkedQuery& mq, Term x);

// Each operation re-closes the marking of its results.
MarkedQuery cut(const MarkedQuery& mq, Term x);
std::vector<MarkedQuery> reduce(const MarkedQuery& mq, Term x);
// Replaces t by t2 (the variable by the constant when exactly one is a
// constant).  Throws std::invalid_argument for two distinct constants.
MarkedQuery merge(const MarkedQuery& mq, Term x, Term t, Term t2);

// Same query up to a renaming of variables.
bool equivalent_up_to_renaming(const MarkedQuery& a, const MarkedQuery& b);

struct RewriteOptions {
  std::size_t cap = 100000;  // distinct queries explored
  // Called once per operation with its input and normalized outputs.
  std::function<void(const MarkedQuery&, MaximalCase::Kind, const std::vector<MarkedQuery>&)>
      on_step;
};

// Dead queries rew(q, M), distinct up to renaming.  Throws ResourceError past
// the cap.
std::vector<MarkedQuery> rewrite(const MarkedQuery& mq, const RewriteOptions& options = {});

struct GridEntailment {
  bool entailed = false;
  std::optional<MarkedQuery> witness;  // dead query true in the database
};

// Throws std::invalid_argument for predicates other than H, V (binary) and top.
GridEntailment entails_grid(const Instance& db, const ConjunctiveQuery& q,
                            const RewriteOptions& options = {});

}  // namespace rulebench
