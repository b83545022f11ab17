#pragma once

// Types of terms with respect to disconnected datalog rules, and the one-step
// saturation they induce.

#include <map>
#include <set>
#include <string>

#include "rulebench/kernel.hpp"
#include "rulebench/rules.hpp"

namespace rulebench {

struct DiscMarker {
  std::string rule;  // label
  int side = 1;      // 1 or 2

  friend auto operator<=>(const DiscMarker&, const DiscMarker&) = default;
};

using DiscType = std::set<DiscMarker>;

// (rho, i) is in the type of t iff the body part phi_i holds with x_i = t.
// Throws RuleError unless every rule is a disconnected datalog rule with a
// single binary head.
std::map<Term, DiscType> disc_types(const Instance& inst, const RuleSet& rules);

// inst plus R(t,t') whenever (rho,1) is in the type of t and (rho,2) in the
// type of t', computed by Add operations over the type coloring.
Instance saturate_disconnected(const Instance& inst, const RuleSet& rules);

}  // namespace rulebench
