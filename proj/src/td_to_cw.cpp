// Tree decomposition to cliquewidth expression.
//
// Every term gets a slot, distinct within each bag, and is introduced at its
// pivot (the bag closest to the root containing it) with color (slot, S).  S
// lists the links to terms introduced later, as names R(v), R(v,v), R(v,i)
// and R(i,v) with v standing for the term itself and i for a slot.  When a
// term with slot j arrives, every pending R(v,j) / R(j,v) is discharged by an
// Add followed by a Recolor that drops the request.
//
// A slot is reused across the tree, so older terms may carry the same color
// as the newcomer.  To keep the Adds from hitting them, the newcomer carries
// an extra own-slot link Rmin(v,j) (never a genuine request, since linked
// terms have distinct slots) until its requests are discharged.

#include <algorithm>
#include <deque>
#include <limits>

#include "rulebench/cliquewidth.hpp"

namespace rulebench {

std::size_t TreeDecomposition::width() const {
  std::size_t w = 0;
  for (const auto& b : bags) w = std::max(w, b.size());
  return w == 0 ? 0 : w - 1;
}

std::vector<std::vector<std::size_t>> TreeDecomposition::children() const {
  std::vector<std::vector<std::size_t>> out(bags.size());
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (parent[i] >= 0) out[static_cast<std::size_t>(parent[i])].push_back(i);
  return out;
}

std::size_t TreeDecomposition::root() const {
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (parent[i] < 0) return i;
  return 0;
}

std::string check_tree_decomposition(const Instance& inst, const TreeDecomposition& td) {
  std::size_t n = td.bags.size();
  if (td.parent.size() != n) return "parent list and bag list differ in length";
  if (n == 0) return inst.empty() ? "" : "no bags";
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int p = td.parent[i];
    if (p < 0) ++roots;
    else if (static_cast<std::size_t>(p) >= n) return "bag " + std::to_string(i) + " has an unknown parent";
  }
  if (roots != 1) return "expected exactly one root, found " + std::to_string(roots);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t steps = 0;
    for (int cur = static_cast<int>(i); cur >= 0; cur = td.parent[static_cast<std::size_t>(cur)])
      if (++steps > n) return "parent links contain a cycle";
  }
  for (Term t : inst.adom()) {
    std::size_t tops = 0, count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!td.bags[i].count(t)) continue;
      ++count;
      int p = td.parent[i];
      if (p < 0 || !td.bags[static_cast<std::size_t>(p)].count(t)) ++tops;
    }
    if (count == 0) return "term " + t.to_string() + " is in no bag";
    if (tops != 1) return "bags of term " + t.to_string() + " are not connected";
  }
  for (const Atom& a : inst.atoms()) {
    bool covered = std::any_of(td.bags.begin(), td.bags.end(), [&](const std::set<Term>& b) {
      return std::all_of(a.args.begin(), a.args.end(), [&](Term t) { return b.count(t) > 0; });
    });
    if (!covered) return "atom " + a.to_string() + " is in no bag";
  }
  return "";
}

std::size_t td_to_cw_color_bound(const Instance& inst, const TreeDecomposition& td) {
  std::set<Predicate> s1, s2;
  for (const Atom& a : inst.atoms()) {
    if (a.arity() == 1 && !a.predicate.is_top()) s1.insert(a.predicate);
    if (a.arity() == 2) s2.insert(a.predicate);
  }
  std::size_t k = td.width();
  long double exponent = static_cast<long double>(s1.size()) +
                         static_cast<long double>(2 * (k + 1) + 1) * s2.size();
  if (exponent >= 62) return std::numeric_limits<std::size_t>::max();
  std::size_t pow = std::size_t{1} << static_cast<unsigned>(exponent);
  if (pow > std::numeric_limits<std::size_t>::max() / (k + 1))
    return std::numeric_limits<std::size_t>::max();
  return (k + 1) * pow;
}

namespace {

using LinkSet = std::set<std::string>;

Color make_color(std::size_t slot, const LinkSet& links) {
  std::vector<Color> names;
  for (const std::string& l : links) names.push_back(Color::name(l));
  return Color::tuple({Color::integer(static_cast<std::int64_t>(slot)), Color::tuple(names)});
}

std::string link_unary(Predicate p) { return p.name() + "(v)"; }
std::string link_loop(Predicate p) { return p.name() + "(v,v)"; }
std::string link_out(Predicate p, std::size_t i) { return p.name() + "(v," + std::to_string(i) + ")"; }
std::string link_in(Predicate p, std::size_t i) { return p.name() + "(" + std::to_string(i) + ",v)"; }

struct Member {
  std::size_t slot;
  LinkSet links;
};

class Builder {
 public:
  Builder(const Instance& inst, const TreeDecomposition& td) : inst_(inst), td_(td) {
    children_ = td.children();
    assign_slots();
    for (const Atom& a : inst.atoms())
      if (a.arity() == 2 && (!min_binary_ || a.predicate < *min_binary_)) min_binary_ = a.predicate;
  }

  CwExpr build() {
    if (td_.bags.empty()) return nullary_atoms(cw::empty());
    std::size_t root = td_.root();
    // Post-order without recursion.
    std::vector<std::size_t> order;
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      std::size_t n = stack.back();
      stack.pop_back();
      order.push_back(n);
      for (std::size_t c : children_[n]) stack.push_back(c);
    }
    std::reverse(order.begin(), order.end());
    std::vector<CwExpr> exprs(td_.bags.size());
    std::vector<std::map<Term, Member>> members(td_.bags.size());
    for (std::size_t n : order) {
      CwExpr cur;
      std::map<Term, Member> here;
      for (std::size_t c : children_[n]) {
        cur = cur ? cw::unite(cur, exprs[c]) : exprs[c];
        here.merge(members[c]);
        exprs[c].reset();
      }
      process_node(n, cur, here);
      exprs[n] = cur ? cur : cw::empty();
      members[n] = std::move(here);
    }
    return nullary_atoms(exprs[root]);
  }

 private:
  void assign_slots() {
    std::size_t root = td_.root();
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      std::size_t n = queue.front();
      queue.pop_front();
      std::set<std::size_t> used;
      for (Term t : td_.bags[n])
        if (auto it = slot_.find(t); it != slot_.end()) used.insert(it->second);
      for (Term t : td_.bags[n]) {
        if (slot_.count(t)) continue;
        std::size_t s = 0;
        while (used.count(s)) ++s;
        used.insert(s);
        slot_[t] = s;
        pivot_[t] = n;
      }
      for (std::size_t c : children_[n]) queue.push_back(c);
    }
  }

  bool proper_ancestor(std::size_t a, std::size_t b) const {
    while (td_.parent[b] >= 0) {
      b = static_cast<std::size_t>(td_.parent[b]);
      if (b == a) return true;
    }
    return false;
  }

  // t2 is introduced after t.
  bool later(Term t2, Term t) const {
    std::size_t p2 = pivot_.at(t2), p = pivot_.at(t);
    if (p2 == p) return slot_.at(t2) > slot_.at(t);
    return proper_ancestor(p2, p);
  }

  LinkSet initial_links(Term t) const {
    LinkSet s;
    for (std::uint32_t idx : term_atoms(t)) {
      const Atom& a = inst_.atom(idx);
      if (a.arity() == 1) {
        if (!a.predicate.is_top()) s.insert(link_unary(a.predicate));
      } else if (a.arity() == 2) {
        Term u = a.args[0], w = a.args[1];
        if (u == t && w == t) s.insert(link_loop(a.predicate));
        else if (u == t && later(w, t)) s.insert(link_out(a.predicate, slot_.at(w)));
        else if (w == t && later(u, t)) s.insert(link_in(a.predicate, slot_.at(u)));
      }
    }
    return s;
  }

  std::vector<std::uint32_t> term_atoms(Term t) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < inst_.size(); ++i) {
      const Atom& a = inst_.atom(i);
      if (std::find(a.args.begin(), a.args.end(), t) != a.args.end()) out.push_back(i);
    }
    return out;
  }

  static void recolor_members(std::map<Term, Member>& here, const Color& from,
                              const LinkSet& to) {
    for (auto& [t, m] : here)
      if (make_color(m.slot, m.links) == from) m.links = to;
  }

  void process_node(std::size_t n, CwExpr& cur, std::map<Term, Member>& here) {
    std::vector<Term> pivotal;
    for (Term t : td_.bags[n])
      if (pivot_.at(t) == n && inst_.in_adom(t)) pivotal.push_back(t);
    std::sort(pivotal.begin(), pivotal.end(),
              [&](Term a, Term b) { return slot_.at(a) < slot_.at(b); });

    for (Term t : pivotal) {
      std::size_t j = slot_.at(t);
      LinkSet links = initial_links(t);
      std::string marker;
      if (min_binary_) {
        marker = link_out(*min_binary_, j);
        links.insert(marker);
      }
      Color ct = make_color(j, links);
      CwExpr leaf = t.is_constant() ? cw::const_leaf(t, ct) : cw::null_leaf(ct);
      cur = cur ? cw::unite(cur, leaf) : leaf;
      here[t] = Member{j, links};

      auto drop_own = [&](const std::string& link, std::vector<Color> ks, Predicate p) {
        Member& m = here[t];
        Color before = make_color(j, m.links);
        cur = cw::add(p, std::move(ks), cur);
        LinkSet after = m.links;
        after.erase(link);
        cur = cw::recolor(before, make_color(j, after), cur);
        recolor_members(here, before, after);
      };

      for (const Atom& a : inst_.atoms()) {
        if (a.arity() == 1 && a.args[0] == t && !a.predicate.is_top() &&
            here[t].links.count(link_unary(a.predicate))) {
          Color c = make_color(j, here[t].links);
          drop_own(link_unary(a.predicate), {c}, a.predicate);
        }
      }
      for (const Atom& a : inst_.atoms()) {
        if (a.arity() == 2 && a.args[0] == t && a.args[1] == t &&
            here[t].links.count(link_loop(a.predicate))) {
          Color c = make_color(j, here[t].links);
          drop_own(link_loop(a.predicate), {c, c}, a.predicate);
        }
      }

      // Pending requests of earlier terms aimed at slot j, least color first.
      while (true) {
        std::optional<std::pair<Color, std::string>> next;
        Predicate pred;
        bool outgoing = false;
        for (const auto& [u, m] : here) {
          if (u == t || m.slot == j) continue;
          Color cu = make_color(m.slot, m.links);
          for (const std::string& l : m.links) {
            auto open = l.find('(');
            std::string args = l.substr(open);
            bool out = args == "(v," + std::to_string(j) + ")";
            bool in = args == "(" + std::to_string(j) + ",v)";
            if (!out && !in) continue;
            if (!next || std::tie(cu, l) < std::tie(next->first, next->second)) {
              next = std::make_pair(cu, l);
              pred = Predicate(l.substr(0, open));
              outgoing = out;
            }
          }
        }
        if (!next) break;
        auto [cu, link] = *next;
        Color cnew = make_color(j, here[t].links);
        cur = outgoing ? cw::add(pred, {cu, cnew}, cur) : cw::add(pred, {cnew, cu}, cur);
        LinkSet after;
        for (const Color& c : cu.as_tuple()[1].as_tuple()) after.insert(c.as_name());
        after.erase(link);
        std::size_t slot = static_cast<std::size_t>(cu.as_tuple()[0].as_integer());
        cur = cw::recolor(cu, make_color(slot, after), cur);
        recolor_members(here, cu, after);
      }

      if (!marker.empty()) {
        Member& m = here[t];
        Color before = make_color(j, m.links);
        LinkSet after = m.links;
        after.erase(marker);
        cur = cw::recolor(before, make_color(j, after), cur);
        recolor_members(here, before, after);
      }
    }
  }

  CwExpr nullary_atoms(CwExpr cur) const {
    for (const Atom& a : inst_.atoms())
      if (a.arity() == 0) cur = cw::add(a.predicate, {}, cur);
    return cur;
  }

  const Instance& inst_;
  const TreeDecomposition& td_;
  std::vector<std::vector<std::size_t>> children_;
  std::map<Term, std::size_t> slot_;
  std::map<Term, std::size_t> pivot_;
  std::optional<Predicate> min_binary_;
};

}  // namespace

EquationSystem td_to_cw(const Instance& inst, const TreeDecomposition& td) {
  for (const Atom& a : inst.atoms())
    if (a.arity() > 2)
      throw std::invalid_argument("td_to_cw needs a binary signature; found " + a.to_string());
  if (std::string err = check_tree_decomposition(inst, td); !err.empty())
    throw std::invalid_argument("invalid tree decomposition: " + err);
  Builder b(inst, td);
  EquationSystem s;
  s.root = b.build();
  return s;
}

}  // namespace rulebench
