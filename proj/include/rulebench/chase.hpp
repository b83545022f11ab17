#pragma once

// Triggers, the Skolem chase and bounded BCQ entailment.

#include <functional>
#include <optional>
#include <vector>

#include "rulebench/kernel.hpp"
#include "rulebench/rules.hpp"

namespace rulebench {

struct Trigger {
  std::size_t rule = 0;  // index into the rule set
  Homomorphism hom;      // defined on the body variables
};

struct ChaseBudget {
  std::size_t depth = 0;
};

struct ChaseOptions {
  std::size_t atom_cap = default_atom_cap();
};

// All triggers, ordered by rule index and then by enumeration order.
std::vector<Trigger> triggers(const Instance& inst, const RuleSet& rules);

// Null standing for existential `var` of `rule` under `hom`.
Term skolem_null(const Rule& rule, Term var, const Homomorphism& hom);

// Adds the Skolemized head to `inst`.  Throws std::invalid_argument when the
// trigger's homomorphism does not map the body into `inst`.
Instance apply_trigger(const Instance& inst, const RuleSet& rules, const Trigger& t);

// Union of all trigger applications.  Throws ResourceError past the cap.
Instance one_step(const Instance& inst, const RuleSet& rules, const ChaseOptions& options = {});

Instance chase_k(const Instance& inst, const RuleSet& rules, ChaseBudget budget,
                 const ChaseOptions& options = {});

// Iterates Skolem chase steps, yielding each new stage to `visit` (stage 0 is
// the input).  Only triggers touching the previous stage's delta are
// re-enumerated.  `visit` returns false to stop.
void chase_stages(const Instance& inst, const RuleSet& rules, ChaseBudget budget,
                  const std::function<bool(std::size_t step, const Instance&)>& visit,
                  const ChaseOptions& options = {});

struct EntailmentResult {
  bool entailed = false;  // false means unknown at the budget, not refuted
  std::size_t step = 0;
  std::optional<Homomorphism> witness;
};

EntailmentResult entails_bcq(const Instance& db, const RuleSet& rules, const ConjunctiveQuery& q,
                             ChaseBudget budget, const ChaseOptions& options = {});

// (loop) -> exists x. H(x,x), V(x,x)
// (grow) top(x) -> exists y,y'. H(x,y), V(x,y')
// (grid) H(x,y), V(x,x') -> exists y'. H(x',y'), V(y,y')
RuleSet grid_rules();

}  // namespace rulebench
