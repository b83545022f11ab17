#pragma once

// Terms, atoms, instances and homomorphisms.
//
// Terms and predicates are interned: a Term is a 32-bit handle into a
// process-wide table, so copying and comparing for equality is cheap.  The
// table only grows; handles stay valid for the lifetime of the process and
// may be shared freely across threads.

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rulebench {

enum class TermKind : std::uint8_t { Constant = 0, Null = 1, Variable = 2 };

class Term {
 public:
  Term() = default;

  static Term constant(std::string_view name);
  static Term null(std::string_view name);
  static Term variable(std::string_view name);
  static Term make(TermKind kind, std::string_view name);

  // A null whose name has never been handed out in this process.
  static Term fresh_null(std::string_view hint = "n");
  // Canonical Skolem null z!<label>!<var>!<t1,...,tn>.  Equal inputs give
  // the same term.
  static Term skolem(std::string_view rule_label, std::string_view var,
                     std::span<const Term> frontier_image);

  TermKind kind() const;
  const std::string& name() const;
  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != 0; }

  bool is_constant() const { return kind() == TermKind::Constant; }
  bool is_null() const { return kind() == TermKind::Null; }
  bool is_variable() const { return kind() == TermKind::Variable; }

  // Serialized form: constants bare (quoted when not a plain identifier),
  // nulls as `_:name`, variables as `?name`.
  std::string to_string() const;

  friend bool operator==(Term a, Term b) { return a.id_ == b.id_; }
  // Global term order: kind first, then name.
  friend std::strong_ordering operator<=>(Term a, Term b);

 private:
  explicit Term(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

class Predicate {
 public:
  Predicate() = default;
  explicit Predicate(std::string_view name);

  // The universal unary predicate, spelled `top`.
  static Predicate top();

  const std::string& name() const;
  std::uint32_t id() const { return id_; }
  bool is_top() const { return *this == top(); }

  friend bool operator==(Predicate a, Predicate b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(Predicate a, Predicate b);

 private:
  std::uint32_t id_ = 0;
};

struct Atom {
  Predicate predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(Predicate p, std::vector<Term> a) : predicate(p), args(std::move(a)) {}
  Atom(std::string_view p, std::vector<Term> a)
      : predicate(Predicate(p)), args(std::move(a)) {}

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;  // no variables
  std::string to_string() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

}  // namespace rulebench

template <>
struct std::hash<rulebench::Term> {
  std::size_t operator()(rulebench::Term t) const noexcept { return t.id(); }
};
template <>
struct std::hash<rulebench::Predicate> {
  std::size_t operator()(rulebench::Predicate p) const noexcept { return p.id(); }
};
template <>
struct std::hash<rulebench::Atom> {
  std::size_t operator()(const rulebench::Atom& a) const noexcept;
};

namespace rulebench {

class SignatureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a computation outgrows its configured ceiling.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 10^6 unless RULEBENCH_ATOM_CAP holds a positive integer.
std::size_t default_atom_cap();

// Predicate arities.  Always contains `top` with arity 1.
class Signature {
 public:
  Signature();

  // Registers the predicate; throws SignatureError on an arity clash.
  void declare(Predicate p, std::size_t arity);
  void declare(const Atom& a) { declare(a.predicate, a.arity()); }
  std::optional<std::size_t> arity(Predicate p) const;
  bool contains(Predicate p) const { return arities_.count(p.name()) > 0; }
  void merge(const Signature& other);

  // Sorted by name.
  const std::map<std::string, std::size_t>& arities() const { return arities_; }
  std::vector<Predicate> predicates_of_arity(std::size_t n) const;

 private:
  std::map<std::string, std::size_t> arities_;
};

// A finite set of atoms with lookup indexes.  Atoms keep their insertion
// order, which makes every enumeration over an instance deterministic.
// Instances never contain variables; `top(t)` holds implicitly for every
// term of the active domain.
class Instance {
 public:
  Instance() = default;
  Instance(std::initializer_list<Atom> atoms);
  explicit Instance(std::span<const Atom> atoms);

  // Returns true if the atom was new.  Throws std::invalid_argument when the
  // atom contains a variable.
  bool insert(const Atom& atom);
  void merge(const Instance& other);

  bool contains(const Atom& atom) const { return index_.count(atom) > 0; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(std::uint32_t i) const { return atoms_[i]; }
  std::vector<Atom> sorted_atoms() const;

  // Active domain, sorted by the global term order.
  std::vector<Term> adom() const;
  std::size_t adom_size() const { return term_count_.size(); }
  bool in_adom(Term t) const { return term_count_.count(t) > 0; }
  bool is_database() const;  // only constants

  std::span<const std::uint32_t> with_predicate(Predicate p) const;
  std::span<const std::uint32_t> with_term_at(Predicate p, std::size_t pos, Term t) const;

  // Copy extended by top(t) for every t in the active domain.
  Instance with_top_facts() const;
  bool is_subset_of(const Instance& other) const;

  friend bool operator==(const Instance& a, const Instance& b);

  std::string to_string() const;  // one fact per line, sorted

 private:
  struct PosKey {
    std::uint32_t pred;
    std::uint32_t pos;
    std::uint32_t term;
    bool operator==(const PosKey&) const = default;
  };
  struct PosKeyHash {
    std::size_t operator()(const PosKey& k) const noexcept {
      return (std::size_t(k.pred) * 0x9E3779B97F4A7C15ULL) ^ (std::size_t(k.pos) << 48) ^
             (std::size_t(k.term) * 0xC2B2AE3D27D4EB4FULL);
    }
  };

  std::vector<Atom> atoms_;
  std::unordered_map<Atom, std::uint32_t> index_;
  std::unordered_map<Predicate, std::vector<std::uint32_t>> by_pred_;
  std::unordered_map<PosKey, std::vector<std::uint32_t>, PosKeyHash> by_pos_;
  std::unordered_map<Term, std::uint32_t> term_count_;
};

// A mapping of terms to terms.  Terms outside the domain map to themselves,
// which in particular keeps every constant fixed.
class Homomorphism {
 public:
  Homomorphism() = default;
  Homomorphism(std::initializer_list<std::pair<const Term, Term>> pairs) : map_(pairs) {}
  explicit Homomorphism(std::map<Term, Term> m) : map_(std::move(m)) {}

  Term apply(Term t) const;
  Atom apply(const Atom& a) const;
  std::vector<Atom> apply(std::span<const Atom> atoms) const;

  void set(Term from, Term to) { map_[from] = to; }
  bool contains(Term t) const { return map_.count(t) > 0; }
  std::size_t size() const { return map_.size(); }
  const std::map<Term, Term>& mapping() const { return map_; }

  // (g . h)(t) = g(h(t)) on the domain of h.
  static Homomorphism compose(const Homomorphism& g, const Homomorphism& h);

  std::string to_string() const;

  friend bool operator==(const Homomorphism&, const Homomorphism&) = default;

 private:
  std::map<Term, Term> map_;
};

struct HomSearchOptions {
  // Distinct source terms must map to distinct images.
  bool injective = false;
  // Extra per-term filter: may `source` be mapped to `image`?
  std::function<bool(Term source, Term image)> admissible;
};

// Enumerates every extension h of `fixed` with h(source) contained in
// `target`.  Variables and nulls of `source` are mappable, constants are
// fixed.  A source atom top(t) is satisfied by any t in adom(target).
// `visit` returns false to stop the enumeration.
void for_each_homomorphism(std::span<const Atom> source, const Instance& target,
                           const Homomorphism& fixed,
                           const std::function<bool(const Homomorphism&)>& visit,
                           const HomSearchOptions& options = {});

std::vector<Homomorphism> find_homomorphisms(std::span<const Atom> source,
                                             const Instance& target,
                                             const Homomorphism& fixed = {},
                                             std::size_t limit = SIZE_MAX,
                                             const HomSearchOptions& options = {});

std::optional<Homomorphism> find_homomorphism(std::span<const Atom> source,
                                              const Instance& target,
                                              const Homomorphism& fixed = {},
                                              const HomSearchOptions& options = {});

std::size_t count_homomorphisms(std::span<const Atom> source, const Instance& target);

bool hom_equivalent(const Instance& left, const Instance& right);

// A bijection between the active domains (constants fixed, nulls to nulls)
// mapping left exactly onto right, both taken with their implicit top facts.
std::optional<Homomorphism> find_isomorphism(const Instance& left, const Instance& right);
bool is_isomorphic(const Instance& left, const Instance& right);

// Atoms of `inst` whose arguments all lie in `keep`.
Instance induced_subinstance(const Instance& inst, const std::set<Term>& keep);

// A Boolean conjunctive query; every variable is existentially quantified.
struct ConjunctiveQuery {
  std::vector<Atom> atoms;

  std::vector<Term> terms() const;      // sorted, distinct
  std::vector<Term> variables() const;  // sorted, distinct
  bool has_constants() const;
  std::string to_string() const;
};

// Set of terms of a list of atoms, sorted.
std::vector<Term> terms_of(std::span<const Atom> atoms);

}  // namespace rulebench
