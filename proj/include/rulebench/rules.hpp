#pragma once

// Existential rules body -> exists z. head, and rule sets.

#include <string>
#include <vector>

#include "rulebench/kernel.hpp"

namespace rulebench {

class RuleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Rule {
  std::string label;
  std::vector<Atom> body;
  std::vector<Atom> head;

  // All three sorted by the global term order.
  std::vector<Term> frontier() const;
  std::vector<Term> existentials() const;
  std::vector<Term> body_variables() const;

  std::string to_string() const;
};

// Rules in order, plus the signature they use.  Unlabelled rules are named
// r<index> on insertion; labels must be distinct since they name Skolem nulls.
class RuleSet {
 public:
  RuleSet() = default;
  RuleSet(std::initializer_list<Rule> rules);
  explicit RuleSet(std::vector<Rule> rules);

  // Throws RuleError on nulls, duplicate labels or arity clashes.
  void add(Rule rule);

  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& operator[](std::size_t i) const { return rules_[i]; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const Signature& signature() const { return signature_; }

  std::string to_string() const;

 private:
  std::vector<Rule> rules_;
  Signature signature_;
};

enum class Connectivity { Connected, Disconnected, NotApplicable };

struct RuleClass {
  bool is_datalog = false;
  bool is_single_headed = false;
  std::size_t max_arity = 0;
  Connectivity connectivity = Connectivity::NotApplicable;
};

// Components are taken over body variables; constants do not link them.
RuleClass classify(const Rule& rule);

struct BodySplit {
  Term x1;
  Term x2;
  std::vector<Atom> phi1;  // component of x1
  std::vector<Atom> phi2;  // everything else
};

// Requires a disconnected datalog rule with the single head R(x1,x2).
BodySplit split_disconnected_body(const Rule& rule);

}  // namespace rulebench
