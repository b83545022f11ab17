#include "rulebench/kernel.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <sstream>

namespace rulebench {

namespace {

// Append-only table with lock-free reads.  Entries live in fixed-size chunks
// that are never moved, so a reference obtained from get() stays valid while
// other threads keep inserting.
template <typename Entry>
class ChunkedTable {
 public:
  static constexpr std::size_t kChunkBits = 12;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kMaxChunks = std::size_t{1} << 16;

  ChunkedTable() {
    for (auto& c : chunks_) c.store(nullptr, std::memory_order_relaxed);
  }
  ~ChunkedTable() {
    for (auto& c : chunks_) delete[] c.load(std::memory_order_relaxed);
  }

  // Caller holds the writer lock.
  std::uint32_t push(Entry e) {
    std::size_t id = size_;
    std::size_t chunk = id >> kChunkBits;
    if (chunk >= kMaxChunks) throw std::length_error("symbol table exhausted");
    Entry* block = chunks_[chunk].load(std::memory_order_relaxed);
    if (block == nullptr) {
      block = new Entry[kChunkSize];
      chunks_[chunk].store(block, std::memory_order_release);
    }
    block[id & (kChunkSize - 1)] = std::move(e);
    ++size_;
    return static_cast<std::uint32_t>(id);
  }

  const Entry& get(std::uint32_t id) const {
    return chunks_[id >> kChunkBits].load(std::memory_order_acquire)[id & (kChunkSize - 1)];
  }

 private:
  std::array<std::atomic<Entry*>, kMaxChunks> chunks_;
  std::size_t size_ = 0;
};

struct TermEntry {
  TermKind kind = TermKind::Constant;
  std::string name;
};

class TermTable {
 public:
  static TermTable& instance() {
    static TermTable table;
    return table;
  }

  std::uint32_t intern(TermKind kind, std::string_view name) {
    std::string key = key_of(kind, name);
    std::lock_guard lock(mutex_);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    std::uint32_t id = entries_.push(TermEntry{kind, std::string(name)});
    ids_.emplace(std::move(key), id);
    return id;
  }

  std::uint32_t intern_skolem(std::string_view label, std::string_view var,
                              std::span<const Term> frontier) {
    std::string key;
    key.reserve(label.size() + var.size() + 2 + 4 * frontier.size());
    key.append(label).push_back('\0');
    key.append(var).push_back('\0');
    for (Term t : frontier) {
      std::uint32_t id = t.id();
      key.append(reinterpret_cast<const char*>(&id), sizeof id);
    }
    {
      std::lock_guard lock(mutex_);
      auto it = skolem_ids_.find(key);
      if (it != skolem_ids_.end()) return it->second;
    }
    std::string name = "z!";
    name.append(label).append("!").append(var).append("!<");
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (i) name.push_back(',');
      name.append(frontier[i].to_string());
    }
    name.push_back('>');
    std::uint32_t id = intern(TermKind::Null, name);
    std::lock_guard lock(mutex_);
    skolem_ids_.emplace(std::move(key), id);
    return id;
  }

  std::uint32_t fresh(std::string_view hint) {
    for (;;) {
      std::uint64_t n = counter_.fetch_add(1) + 1;
      std::string name = std::string(hint) + std::to_string(n);
      std::string key = key_of(TermKind::Null, name);
      std::lock_guard lock(mutex_);
      if (ids_.count(key)) continue;
      std::uint32_t id = entries_.push(TermEntry{TermKind::Null, name});
      ids_.emplace(std::move(key), id);
      return id;
    }
  }

  const TermEntry& get(std::uint32_t id) const { return entries_.get(id); }

 private:
  TermTable() {
    // Id 0 is the invalid term.
    entries_.push(TermEntry{TermKind::Constant, ""});
  }

  static std::string key_of(TermKind kind, std::string_view name) {
    std::string key;
    key.reserve(name.size() + 1);
    key.push_back(static_cast<char>('0' + static_cast<int>(kind)));
    key.append(name);
    return key;
  }

  std::mutex mutex_;
  ChunkedTable<TermEntry> entries_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::unordered_map<std::string, std::uint32_t> skolem_ids_;
  std::atomic<std::uint64_t> counter_{0};
};

class PredicateTable {
 public:
  static PredicateTable& instance() {
    static PredicateTable table;
    return table;
  }

  std::uint32_t intern(std::string_view name) {
    std::lock_guard lock(mutex_);
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    std::uint32_t id = entries_.push(std::string(name));
    ids_.emplace(std::string(name), id);
    return id;
  }

  const std::string& get(std::uint32_t id) const { return entries_.get(id); }

 private:
  PredicateTable() { entries_.push(std::string()); }

  std::mutex mutex_;
  ChunkedTable<std::string> entries_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

bool is_plain_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Term

Term Term::make(TermKind kind, std::string_view name) {
  if (name.empty()) throw std::invalid_argument("term name must not be empty");
  return Term(TermTable::instance().intern(kind, name));
}
Term Term::constant(std::string_view name) { return make(TermKind::Constant, name); }
Term Term::null(std::string_view name) { return make(TermKind::Null, name); }
Term Term::variable(std::string_view name) { return make(TermKind::Variable, name); }

Term Term::fresh_null(std::string_view hint) { return Term(TermTable::instance().fresh(hint)); }

Term Term::skolem(std::string_view rule_label, std::string_view var,
                  std::span<const Term> frontier_image) {
  return Term(TermTable::instance().intern_skolem(rule_label, var, frontier_image));
}

TermKind Term::kind() const { return TermTable::instance().get(id_).kind; }
const std::string& Term::name() const { return TermTable::instance().get(id_).name; }

std::string Term::to_string() const {
  const TermEntry& e = TermTable::instance().get(id_);
  switch (e.kind) {
    case TermKind::Constant:
      return is_plain_identifier(e.name) ? e.name : quote(e.name);
    case TermKind::Null:
      return "_:" + e.name;
    case TermKind::Variable:
      return "?" + e.name;
  }
  return e.name;
}

std::strong_ordering operator<=>(Term a, Term b) {
  if (a.id_ == b.id_) return std::strong_ordering::equal;
  const TermEntry& ea = TermTable::instance().get(a.id_);
  const TermEntry& eb = TermTable::instance().get(b.id_);
  if (ea.kind != eb.kind) return ea.kind <=> eb.kind;
  int c = ea.name.compare(eb.name);
  return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

// ---------------------------------------------------------------------------
// Predicate and Atom

Predicate::Predicate(std::string_view name) {
  if (name.empty()) throw std::invalid_argument("predicate name must not be empty");
  id_ = PredicateTable::instance().intern(name);
}

Predicate Predicate::top() {
  static const Predicate p("top");
  return p;
}

const std::string& Predicate::name() const { return PredicateTable::instance().get(id_); }

std::strong_ordering operator<=>(Predicate a, Predicate b) {
  if (a.id_ == b.id_) return std::strong_ordering::equal;
  int c = a.name().compare(b.name());
  return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](Term t) { return t.is_variable(); });
}

std::string Atom::to_string() const {
  std::string out = predicate.name();
  out.push_back('(');
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out.push_back(',');
    out.append(args[i].to_string());
  }
  out.push_back(')');
  return out;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                b.args.end());
}

}  // namespace rulebench

std::size_t std::hash<rulebench::Atom>::operator()(const rulebench::Atom& a) const noexcept {
  std::size_t h = a.predicate.id() * 0x9E3779B97F4A7C15ULL;
  for (rulebench::Term t : a.args) h = (h ^ t.id()) * 0x100000001B3ULL + (h >> 29);
  return h;
}

namespace rulebench {

std::size_t default_atom_cap() {
  if (const char* env = std::getenv("RULEBENCH_ATOM_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature() { arities_.emplace("top", 1); }

void Signature::declare(Predicate p, std::size_t arity) {
  auto [it, inserted] = arities_.emplace(p.name(), arity);
  if (!inserted && it->second != arity) {
    throw SignatureError("predicate " + p.name() + " used with arity " + std::to_string(arity) +
                         " but declared with arity " + std::to_string(it->second));
  }
}

std::optional<std::size_t> Signature::arity(Predicate p) const {
  auto it = arities_.find(p.name());
  if (it == arities_.end()) return std::nullopt;
  return it->second;
}

void Signature::merge(const Signature& other) {
  for (const auto& [name, arity] : other.arities_) declare(Predicate(name), arity);
}

std::vector<Predicate> Signature::predicates_of_arity(std::size_t n) const {
  std::vector<Predicate> out;
  for (const auto& [name, arity] : arities_)
    if (arity == n) out.emplace_back(name);
  return out;
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(std::initializer_list<Atom> atoms) {
  for (const Atom& a : atoms) insert(a);
}

Instance::Instance(std::span<const Atom> atoms) {
  for (const Atom& a : atoms) insert(a);
}

bool Instance::insert(const Atom& atom) {
  if (!atom.is_ground())
    throw std::invalid_argument("instance atom contains a variable: " + atom.to_string());
  if (index_.count(atom)) return false;
  auto idx = static_cast<std::uint32_t>(atoms_.size());
  atoms_.push_back(atom);
  index_.emplace(atom, idx);
  by_pred_[atom.predicate].push_back(idx);
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    Term t = atom.args[i];
    by_pos_[PosKey{atom.predicate.id(), static_cast<std::uint32_t>(i), t.id()}].push_back(idx);
    ++term_count_[t];
  }
  return true;
}

void Instance::merge(const Instance& other) {
  for (const Atom& a : other.atoms_) insert(a);
}

std::vector<Atom> Instance::sorted_atoms() const {
  std::vector<Atom> out = atoms_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Term> Instance::adom() const {
  std::vector<Term> out;
  out.reserve(term_count_.size());
  for (const auto& [t, n] : term_count_) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

bool Instance::is_database() const {
  return std::all_of(term_count_.begin(), term_count_.end(),
                     [](const auto& kv) { return kv.first.is_constant(); });
}

std::span<const std::uint32_t> Instance::with_predicate(Predicate p) const {
  auto it = by_pred_.find(p);
  if (it == by_pred_.end()) return {};
  return it->second;
}

std::span<const std::uint32_t> Instance::with_term_at(Predicate p, std::size_t pos, Term t) const {
  auto it = by_pos_.find(PosKey{p.id(), static_cast<std::uint32_t>(pos), t.id()});
  if (it == by_pos_.end()) return {};
  return it->second;
}

Instance Instance::with_top_facts() const {
  Instance out = *this;
  for (Term t : adom()) out.insert(Atom(Predicate::top(), {t}));
  return out;
}

bool Instance::is_subset_of(const Instance& other) const {
  if (size() > other.size()) return false;
  return std::all_of(atoms_.begin(), atoms_.end(), [&](const Atom& a) { return other.contains(a); });
}

bool operator==(const Instance& a, const Instance& b) {
  return a.size() == b.size() && a.is_subset_of(b);
}

std::string Instance::to_string() const {
  std::string out;
  for (const Atom& a : sorted_atoms()) out.append(a.to_string()).append(".\n");
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphism

Term Homomorphism::apply(Term t) const {
  auto it = map_.find(t);
  return it == map_.end() ? t : it->second;
}

Atom Homomorphism::apply(const Atom& a) const {
  Atom out(a.predicate, {});
  out.args.reserve(a.args.size());
  for (Term t : a.args) out.args.push_back(apply(t));
  return out;
}

std::vector<Atom> Homomorphism::apply(std::span<const Atom> atoms) const {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const Atom& a : atoms) out.push_back(apply(a));
  return out;
}

Homomorphism Homomorphism::compose(const Homomorphism& g, const Homomorphism& h) {
  Homomorphism out;
  for (const auto& [from, to] : h.map_) out.map_[from] = g.apply(to);
  for (const auto& [from, to] : g.map_)
    if (!h.map_.count(from)) out.map_[from] = to;
  return out;
}

std::string Homomorphism::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [from, to] : map_) {
    if (!first) out.append(", ");
    first = false;
    out.append(from.to_string()).append(" -> ").append(to.to_string());
  }
  out.push_back('}');
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphism search

namespace {

class HomSearch {
 public:
  HomSearch(std::span<const Atom> source, const Instance& target, const Homomorphism& fixed,
            const std::function<bool(const Homomorphism&)>& visit, const HomSearchOptions& options)
      : target_(target), fixed_(fixed), visit_(visit), options_(options) {
    for (const Atom& a : source) {
      if (a.predicate.is_top() && a.args.size() == 1) {
        top_terms_.push_back(slot_of(a.args[0]));
      } else {
        Pattern p;
        p.predicate = a.predicate;
        for (Term t : a.args) p.slots.push_back(slot_of(t));
        patterns_.push_back(std::move(p));
      }
    }
    matched_.assign(patterns_.size(), false);
  }

  void run() {
    // Fixed images must respect injectivity before anything else happens.
    if (options_.injective) {
      for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (!bound_[i].valid()) continue;
        if (!used_.insert(bound_[i]).second) return;
      }
    }
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (bound_[i].valid() && !slots_[i].is_constant() && options_.admissible &&
          !options_.admissible(slots_[i], bound_[i]))
        return;
    }
    search(0);
  }

 private:
  struct Pattern {
    Predicate predicate;
    std::vector<std::size_t> slots;
  };

  std::size_t slot_of(Term t) {
    auto it = slot_index_.find(t);
    if (it != slot_index_.end()) return it->second;
    std::size_t s = slots_.size();
    slots_.push_back(t);
    Term image;
    if (t.is_constant()) {
      image = fixed_.contains(t) ? fixed_.apply(t) : t;
    } else if (fixed_.contains(t)) {
      image = fixed_.apply(t);
    }
    bound_.push_back(image);
    slot_index_.emplace(t, s);
    return s;
  }

  bool can_bind(std::size_t slot, Term image) const {
    if (options_.injective && used_.count(image)) return false;
    if (options_.admissible && !options_.admissible(slots_[slot], image)) return false;
    return true;
  }

  // Picks the unmatched pattern with the fewest candidate atoms.
  std::optional<std::pair<std::size_t, std::span<const std::uint32_t>>> pick() const {
    std::optional<std::pair<std::size_t, std::span<const std::uint32_t>>> best;
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      if (matched_[i]) continue;
      const Pattern& p = patterns_[i];
      std::span<const std::uint32_t> cands = target_.with_predicate(p.predicate);
      for (std::size_t pos = 0; pos < p.slots.size(); ++pos) {
        Term img = bound_[p.slots[pos]];
        if (!img.valid()) continue;
        auto c = target_.with_term_at(p.predicate, pos, img);
        if (c.size() < cands.size()) cands = c;
        if (cands.empty()) break;
      }
      if (!best || cands.size() < best->second.size()) best = std::make_pair(i, cands);
      if (best->second.empty()) break;
    }
    return best;
  }

  bool search(std::size_t depth) {
    if (depth == patterns_.size()) return search_top(0);
    auto choice = pick();
    if (!choice) return search_top(0);
    auto [pi, cands] = *choice;
    const Pattern& p = patterns_[pi];
    matched_[pi] = true;
    std::vector<std::size_t> newly;
    for (std::uint32_t idx : cands) {
      const Atom& fact = target_.atom(idx);
      if (fact.args.size() != p.slots.size()) continue;
      newly.clear();
      bool ok = true;
      for (std::size_t pos = 0; pos < p.slots.size() && ok; ++pos) {
        std::size_t s = p.slots[pos];
        Term img = fact.args[pos];
        if (bound_[s].valid()) {
          ok = bound_[s] == img;
        } else if (can_bind(s, img)) {
          bound_[s] = img;
          if (options_.injective) used_.insert(img);
          newly.push_back(s);
        } else {
          ok = false;
        }
      }
      bool keep_going = true;
      if (ok) keep_going = search(depth + 1);
      for (std::size_t s : newly) {
        if (options_.injective) used_.erase(bound_[s]);
        bound_[s] = Term();
      }
      if (!keep_going) {
        matched_[pi] = false;
        return false;
      }
    }
    matched_[pi] = false;
    return true;
  }

  bool search_top(std::size_t i) {
    if (i == top_terms_.size()) return emit();
    std::size_t s = top_terms_[i];
    if (bound_[s].valid()) {
      if (!target_.in_adom(bound_[s])) return true;
      return search_top(i + 1);
    }
    if (adom_cache_.empty()) adom_cache_ = target_.adom();
    for (Term img : adom_cache_) {
      if (!can_bind(s, img)) continue;
      bound_[s] = img;
      if (options_.injective) used_.insert(img);
      bool keep_going = search_top(i + 1);
      if (options_.injective) used_.erase(img);
      bound_[s] = Term();
      if (!keep_going) return false;
    }
    return true;
  }

  bool emit() {
    Homomorphism h;
    for (const auto& [from, to] : fixed_.mapping()) h.set(from, to);
    for (std::size_t i = 0; i < slots_.size(); ++i)
      if (!slots_[i].is_constant() || slots_[i] != bound_[i]) h.set(slots_[i], bound_[i]);
    return visit_(h);
  }

  const Instance& target_;
  const Homomorphism& fixed_;
  const std::function<bool(const Homomorphism&)>& visit_;
  const HomSearchOptions& options_;

  std::vector<Pattern> patterns_;
  std::vector<std::size_t> top_terms_;
  std::vector<Term> slots_;
  std::vector<Term> bound_;
  std::unordered_map<Term, std::size_t> slot_index_;
  std::vector<bool> matched_;
  std::set<Term> used_;
  std::vector<Term> adom_cache_;
};

}  // namespace

void for_each_homomorphism(std::span<const Atom> source, const Instance& target,
                           const Homomorphism& fixed,
                           const std::function<bool(const Homomorphism&)>& visit,
                           const HomSearchOptions& options) {
  HomSearch search(source, target, fixed, visit, options);
  search.run();
}

std::vector<Homomorphism> find_homomorphisms(std::span<const Atom> source, const Instance& target,
                                             const Homomorphism& fixed, std::size_t limit,
                                             const HomSearchOptions& options) {
  std::vector<Homomorphism> out;
  if (limit == 0) return out;
  for_each_homomorphism(
      source, target, fixed,
      [&](const Homomorphism& h) {
        out.push_back(h);
        return out.size() < limit;
      },
      options);
  return out;
}

std::optional<Homomorphism> find_homomorphism(std::span<const Atom> source, const Instance& target,
                                              const Homomorphism& fixed,
                                              const HomSearchOptions& options) {
  auto all = find_homomorphisms(source, target, fixed, 1, options);
  if (all.empty()) return std::nullopt;
  return std::move(all.front());
}

std::size_t count_homomorphisms(std::span<const Atom> source, const Instance& target) {
  std::size_t n = 0;
  for_each_homomorphism(source, target, {}, [&](const Homomorphism&) {
    ++n;
    return true;
  });
  return n;
}

bool hom_equivalent(const Instance& left, const Instance& right) {
  return find_homomorphism(left.atoms(), right).has_value() &&
         find_homomorphism(right.atoms(), left).has_value();
}

namespace {

// Occurrence profile of each term: a hash over (predicate, position) counts.
// Isomorphisms preserve it exactly.
std::unordered_map<Term, std::uint64_t> term_profiles(const Instance& inst) {
  std::unordered_map<Term, std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>> counts;
  for (const Atom& a : inst.atoms())
    for (std::size_t i = 0; i < a.args.size(); ++i)
      ++counts[a.args[i]][{a.predicate.id(), static_cast<std::uint32_t>(i)}];
  std::unordered_map<Term, std::uint64_t> out;
  for (const auto& [t, m] : counts) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& [key, n] : m) {
      for (std::uint64_t v : {std::uint64_t(key.first), std::uint64_t(key.second), std::uint64_t(n)}) {
        h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h *= 1099511628211ULL;
      }
    }
    out[t] = h;
  }
  return out;
}

}  // namespace

std::optional<Homomorphism> find_isomorphism(const Instance& left, const Instance& right) {
  Instance l = left.with_top_facts();
  Instance r = right.with_top_facts();
  if (l.size() != r.size() || l.adom_size() != r.adom_size()) return std::nullopt;
  auto lp = term_profiles(l);
  auto rp = term_profiles(r);
  {
    std::multiset<std::uint64_t> a, b;
    for (const auto& [t, h] : lp) a.insert(h);
    for (const auto& [t, h] : rp) b.insert(h);
    if (a != b) return std::nullopt;
  }
  for (Term t : l.adom())
    if (t.is_constant() && !r.in_adom(t)) return std::nullopt;
  HomSearchOptions opts;
  opts.injective = true;
  opts.admissible = [&](Term src, Term img) {
    if (src.is_constant()) return src == img;
    if (img.is_constant()) return false;
    return lp.at(src) == rp.at(img);
  };
  // Injective, atom-count preserving and atom-wise into r, so onto r.
  return find_homomorphism(l.atoms(), r, {}, opts);
}

bool is_isomorphic(const Instance& left, const Instance& right) {
  return find_isomorphism(left, right).has_value();
}

Instance induced_subinstance(const Instance& inst, const std::set<Term>& keep) {
  Instance out;
  for (const Atom& a : inst.atoms()) {
    if (std::all_of(a.args.begin(), a.args.end(), [&](Term t) { return keep.count(t) > 0; }))
      out.insert(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conjunctive queries

std::vector<Term> terms_of(std::span<const Atom> atoms) {
  std::set<Term> s;
  for (const Atom& a : atoms) s.insert(a.args.begin(), a.args.end());
  return {s.begin(), s.end()};
}

std::vector<Term> ConjunctiveQuery::terms() const { return terms_of(atoms); }

std::vector<Term> ConjunctiveQuery::variables() const {
  std::vector<Term> out;
  for (Term t : terms())
    if (t.is_variable()) out.push_back(t);
  return out;
}

bool ConjunctiveQuery::has_constants() const {
  for (const Atom& a : atoms)
    for (Term t : a.args)
      if (t.is_constant()) return true;
  return false;
}

std::string ConjunctiveQuery::to_string() const {
  std::ostringstream out;
  out << "?";
  auto vars = variables();
  if (!vars.empty()) {
    out << " exists ";
    for (std::size_t i = 0; i < vars.size(); ++i) out << (i ? "," : "") << vars[i].name();
    out << ".";
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    out << (i ? ", " : " ") << a.predicate.name() << "(";
    for (std::size_t j = 0; j < a.args.size(); ++j) {
      Term t = a.args[j];
      // Uppercase bare words read back as variables.
      bool upper = t.is_constant() && !t.name().empty() && t.name()[0] >= 'A' && t.name()[0] <= 'Z';
      out << (j ? "," : "") << (t.is_variable() ? t.name() : upper ? quote(t.name()) : t.to_string());
    }
    out << ")";
  }
  out << ".";
  return out.str();
}

}  // namespace rulebench
