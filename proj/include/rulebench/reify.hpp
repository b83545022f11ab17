#pragma once

// Reification of atoms of arity >= 3 into stars R_i(u, t_i) of binary atoms.

#include <map>
#include <optional>

#include "rulebench/datalog.hpp"
#include "rulebench/kernel.hpp"
#include "rulebench/rules.hpp"

namespace rulebench {

class ReifiedSignature {
 public:
  ReifiedSignature() = default;
  explicit ReifiedSignature(const Signature& base);

  // Recovers the base signature from R_1..R_n names with n >= 3.
  static ReifiedSignature infer(const Signature& reified);

  const Signature& base() const { return base_; }
  const Signature& reified() const { return reified_; }

  bool is_reified(Predicate p) const;  // arity >= 3 in the base
  // R_i for 1 <= i <= ar(R).
  Predicate component(Predicate p, std::size_t i) const;
  // The (R, i) a fresh predicate stands for.
  std::optional<std::pair<Predicate, std::size_t>> origin(Predicate p) const;

 private:
  Signature base_;
  Signature reified_;
  std::map<Predicate, std::vector<Predicate>> components_;
  std::map<Predicate, std::pair<Predicate, std::size_t>> origins_;
};

// u!<fnv1a hex> of the atom's serialization.
std::string hub_name(const Atom& a);

// Identity below arity 3, otherwise {R_i(hub, t_i)}.
std::vector<Atom> reify_atom(const Atom& a, Term hub, const ReifiedSignature& sig);

Instance reify_instance(const Instance& inst, const ReifiedSignature& sig);
Rule reify_rule(const Rule& rule, const ReifiedSignature& sig);
RuleSet reify_rules(const RuleSet& rules, const ReifiedSignature& sig);
ConjunctiveQuery reify_cq(const ConjunctiveQuery& q, const ReifiedSignature& sig);
// Only EDB atoms are reified.
DatalogQuery reify_datalog(const DatalogQuery& q, const ReifiedSignature& sig);

// Keeps the atoms outside the fresh predicates and adds R(t_1..t_n) whenever
// some t has R_i(t, t_i) for every i.
Instance dereify_instance(const Instance& inst, const ReifiedSignature& sig);

}  // namespace rulebench
