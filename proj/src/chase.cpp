#include "rulebench/chase.hpp"

#include <algorithm>
#include <unordered_set>

namespace rulebench {

namespace {

Homomorphism restrict_to_body(const Rule& rule, const Homomorphism& h) {
  Homomorphism out;
  for (Term v : rule.body_variables()) out.set(v, h.apply(v));
  return out;
}

bool body_embeds(const Rule& rule, const Homomorphism& h, const Instance& inst) {
  for (const Atom& a : rule.body) {
    Atom img = h.apply(a);
    if (!img.is_ground()) return false;
    if (img.predicate.is_top() && img.arity() == 1) {
      if (!inst.in_adom(img.args[0]) && !inst.contains(img)) return false;
    } else if (!inst.contains(img)) {
      return false;
    }
  }
  return true;
}

void emit_head(const Rule& rule, const Homomorphism& h, std::vector<Atom>& out) {
  Homomorphism ext = h;
  for (Term z : rule.existentials()) ext.set(z, skolem_null(rule, z, h));
  for (const Atom& a : rule.head) out.push_back(ext.apply(a));
}

void insert_all(Instance& inst, const std::vector<Atom>& atoms, const ChaseOptions& options) {
  for (const Atom& a : atoms) {
    inst.insert(a);
    if (inst.size() > options.atom_cap)
      throw ResourceError("chase exceeded the atom cap of " + std::to_string(options.atom_cap));
  }
}

// New atoms of one round, deduplicated as they arrive so the cap holds before insertion.
class Pending {
 public:
  Pending(const Instance& inst, const ChaseOptions& options) : inst_(inst), options_(options) {}

  void add(const std::vector<Atom>& atoms) {
    for (const Atom& a : atoms) {
      if (inst_.contains(a) || !seen_.insert(a).second) continue;
      order_.push_back(a);
      if (inst_.size() + order_.size() > options_.atom_cap)
        throw ResourceError("chase exceeded the atom cap of " + std::to_string(options_.atom_cap));
    }
  }

  const std::vector<Atom>& atoms() const { return order_; }

 private:
  const Instance& inst_;
  const ChaseOptions& options_;
  std::unordered_set<Atom> seen_;
  std::vector<Atom> order_;
};

// Binds the variables of `pattern` so that it equals `fact`, if possible.
bool unify_into(const Atom& pattern, const Atom& fact, Homomorphism& h) {
  if (pattern.predicate != fact.predicate || pattern.arity() != fact.arity()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    Term p = pattern.args[i], f = fact.args[i];
    if (!p.is_variable()) {
      if (p != f) return false;
    } else if (h.contains(p)) {
      if (h.apply(p) != f) return false;
    } else {
      h.set(p, f);
    }
  }
  return true;
}

}  // namespace

std::vector<Trigger> triggers(const Instance& inst, const RuleSet& rules) {
  std::vector<Trigger> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for_each_homomorphism(rules[i].body, inst, {}, [&](const Homomorphism& h) {
      out.push_back(Trigger{i, restrict_to_body(rules[i], h)});
      return true;
    });
  }
  return out;
}

Term skolem_null(const Rule& rule, Term var, const Homomorphism& hom) {
  std::vector<Term> image;
  for (Term v : rule.frontier()) image.push_back(hom.apply(v));
  return Term::skolem(rule.label, var.name(), image);
}

Instance apply_trigger(const Instance& inst, const RuleSet& rules, const Trigger& t) {
  if (t.rule >= rules.size()) throw std::invalid_argument("trigger refers to an unknown rule");
  const Rule& rule = rules[t.rule];
  if (!body_embeds(rule, t.hom, inst))
    throw std::invalid_argument("homomorphism does not map the body of " + rule.label +
                                " into the instance");
  std::vector<Atom> atoms;
  emit_head(rule, t.hom, atoms);
  Instance out = inst;
  for (const Atom& a : atoms) out.insert(a);
  return out;
}

Instance one_step(const Instance& inst, const RuleSet& rules, const ChaseOptions& options) {
  std::vector<Atom> atoms;
  for (const Trigger& t : triggers(inst, rules)) emit_head(rules[t.rule], t.hom, atoms);
  Instance out = inst;
  insert_all(out, atoms, options);
  return out;
}

void chase_stages(const Instance& inst, const RuleSet& rules, ChaseBudget budget,
                  const std::function<bool(std::size_t, const Instance&)>& visit,
                  const ChaseOptions& options) {
  Instance current = inst;
  if (!visit(0, current)) return;
  std::size_t delta_begin = 0;  // atoms at or past this index are new
  std::vector<Term> new_terms = current.adom();
  for (std::size_t step = 1; step <= budget.depth; ++step) {
    Pending produced(current, options);
    std::vector<Atom> head;
    if (step == 1) {
      for (const Trigger& t : triggers(current, rules)) {
        head.clear();
        emit_head(rules[t.rule], t.hom, head);
        produced.add(head);
      }
    } else {
      for (const Rule& rule : rules.rules()) {
        auto fire = [&](const Homomorphism& h) {
          head.clear();
          emit_head(rule, h, head);
          produced.add(head);
          return true;
        };
        for (const Atom& pattern : rule.body) {
          if (pattern.predicate.is_top() && pattern.arity() == 1) {
            Term x = pattern.args[0];
            for (Term t : new_terms) {
              Homomorphism fixed;
              if (x.is_variable()) fixed.set(x, t);
              else if (x != t) continue;
              for_each_homomorphism(rule.body, current, fixed, fire);
            }
            continue;
          }
          std::span<const std::uint32_t> cands = current.with_predicate(pattern.predicate);
          auto first = std::lower_bound(cands.begin(), cands.end(), delta_begin);
          for (auto it = first; it != cands.end(); ++it) {
            Homomorphism fixed;
            if (!unify_into(pattern, current.atom(*it), fixed)) continue;
            for_each_homomorphism(rule.body, current, fixed, fire);
          }
        }
      }
    }
    std::size_t old_size = current.size();
    std::size_t old_adom = current.adom_size();
    std::vector<Term> old_terms = current.adom();
    insert_all(current, produced.atoms(), options);
    delta_begin = old_size;
    new_terms.clear();
    if (current.adom_size() != old_adom) {
      std::vector<Term> all = current.adom();
      std::set_difference(all.begin(), all.end(), old_terms.begin(), old_terms.end(),
                          std::back_inserter(new_terms));
    }
    if (!visit(step, current)) return;
    if (current.size() == old_size) {
      // Fixpoint: every later stage is identical.
      for (std::size_t s = step + 1; s <= budget.depth; ++s)
        if (!visit(s, current)) return;
      return;
    }
  }
}

Instance chase_k(const Instance& inst, const RuleSet& rules, ChaseBudget budget,
                 const ChaseOptions& options) {
  Instance out;
  chase_stages(
      inst, rules, budget,
      [&](std::size_t step, const Instance& stage) {
        if (step == budget.depth) out = stage;
        return step < budget.depth;
      },
      options);
  return out;
}

EntailmentResult entails_bcq(const Instance& db, const RuleSet& rules, const ConjunctiveQuery& q,
                             ChaseBudget budget, const ChaseOptions& options) {
  EntailmentResult result;
  chase_stages(
      db, rules, budget,
      [&](std::size_t step, const Instance& stage) {
        if (auto h = find_homomorphism(q.atoms, stage)) {
          result.entailed = true;
          result.step = step;
          result.witness = std::move(h);
          return false;
        }
        return true;
      },
      options);
  if (!result.entailed) result.step = budget.depth;
  return result;
}

RuleSet grid_rules() {
  Term x = Term::variable("x"), y = Term::variable("y"), x2 = Term::variable("x2"),
       y2 = Term::variable("y2");
  Predicate h("H"), v("V");
  return RuleSet{
      Rule{"loop", {}, {Atom(h, {x, x}), Atom(v, {x, x})}},
      Rule{"grow", {Atom(Predicate::top(), {x})}, {Atom(h, {x, y}), Atom(v, {x, y2})}},
      Rule{"grid", {Atom(h, {x, y}), Atom(v, {x, x2})}, {Atom(h, {x2, y2}), Atom(v, {y, y2})}},
  };
}

}  // namespace rulebench
