#include "rulebench/cliquewidth.hpp"

#include <algorithm>
#include <functional>

namespace rulebench {

namespace cw {

namespace {
std::shared_ptr<CwNode> node(CwNode::Kind k) {
  auto n = std::make_shared<CwNode>();
  n->kind = k;
  return n;
}
}  // namespace

CwExpr const_leaf(Term c, Color k) {
  if (!c.is_constant()) throw std::invalid_argument("constant leaf needs a constant");
  auto n = node(CwNode::Kind::ConstLeaf);
  n->constant = c;
  n->color = std::move(k);
  return n;
}

CwExpr null_leaf(Color k) {
  auto n = node(CwNode::Kind::NullLeaf);
  n->color = std::move(k);
  return n;
}

CwExpr add(Predicate p, std::vector<Color> ks, CwExpr child) {
  auto n = node(CwNode::Kind::Add);
  n->predicate = p;
  n->colors = std::move(ks);
  n->left = std::move(child);
  return n;
}

CwExpr recolor(Color from, Color to, CwExpr child) {
  auto n = node(CwNode::Kind::Recolor);
  n->from = std::move(from);
  n->to = std::move(to);
  n->left = std::move(child);
  return n;
}

CwExpr unite(CwExpr left, CwExpr right) {
  auto n = node(CwNode::Kind::Union);
  n->left = std::move(left);
  n->right = std::move(right);
  return n;
}

CwExpr ref(std::string name) {
  auto n = node(CwNode::Kind::Ref);
  n->ref = std::move(name);
  return n;
}

CwExpr empty() { return node(CwNode::Kind::Empty); }

}  // namespace cw

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_unary(const CwNode& n) {
  return n.kind == CwNode::Kind::Add || n.kind == CwNode::Kind::Recolor;
}

bool is_atomic(const CwNode& n) {
  return n.kind == CwNode::Kind::ConstLeaf || n.kind == CwNode::Kind::NullLeaf ||
         n.kind == CwNode::Kind::Ref || n.kind == CwNode::Kind::Empty;
}

void print(const CwExpr& e, std::string& out) {
  // Unary chains are printed iteratively; they can be long.
  const CwNode* n = e.get();
  int open = 0;
  while (is_unary(*n)) {
    if (n->kind == CwNode::Kind::Add) {
      out.append("add ").append(n->predicate.name()).append(" (");
      for (std::size_t i = 0; i < n->colors.size(); ++i) {
        if (i) out.push_back(',');
        out.append(n->colors[i].to_string());
      }
      out.append(") ");
    } else {
      out.append("recolor ").append(n->from.to_string()).append("->").append(n->to.to_string());
      out.push_back(' ');
    }
    n = n->left.get();
    if (!is_atomic(*n) && !is_unary(*n)) {
      out.push_back('(');
      ++open;
    }
  }
  switch (n->kind) {
    case CwNode::Kind::ConstLeaf:
      out.append("const ").append(n->constant.to_string()).append(" ").append(n->color.to_string());
      break;
    case CwNode::Kind::NullLeaf:
      out.append("null ").append(n->color.to_string());
      break;
    case CwNode::Kind::Ref:
      out.append("ref ").append(n->ref);
      break;
    case CwNode::Kind::Empty:
      out.append("void");
      break;
    case CwNode::Kind::Union: {
      print(n->left, out);
      out.append(" (+) ");
      bool paren = n->right->kind == CwNode::Kind::Union;
      if (paren) out.push_back('(');
      print(n->right, out);
      if (paren) out.push_back(')');
      break;
    }
    default:
      break;
  }
  out.append(std::string(open, ')'));
}

}  // namespace

std::string to_string(const CwExpr& e) {
  std::string out;
  if (e) print(e, out);
  return out;
}

std::string to_string(const EquationSystem& s) {
  std::string out;
  for (const auto& [name, e] : s.equations)
    out.append("let ").append(name).append(" = ").append(to_string(e)).append(";\n");
  out.append("root ").append(to_string(s.root)).append("\n");
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void walk(const CwExpr& e, const std::string& path,
          const std::function<void(const CwNode&, const std::string&)>& visit) {
  const CwNode* n = e.get();
  std::string p = path;
  while (n) {
    visit(*n, p);
    if (is_unary(*n)) {
      n = n->left.get();
      p.append("/0");
    } else if (n->kind == CwNode::Kind::Union) {
      walk(n->left, p + "/0", visit);
      walk(n->right, p + "/1", visit);
      return;
    } else {
      return;
    }
  }
}

}  // namespace

std::vector<CwIssue> validate(const EquationSystem& s, const Signature* sig) {
  std::vector<CwIssue> issues;
  if (!s.root) {
    issues.push_back({"root", "system has no root expression"});
    return issues;
  }
  std::vector<std::pair<std::string, CwExpr>> exprs;
  exprs.emplace_back("root", s.root);
  for (const auto& [name, e] : s.equations) {
    if (!e) {
      issues.push_back({name, "equation has no body"});
      continue;
    }
    exprs.emplace_back(name, e);
  }

  std::map<Predicate, std::pair<std::size_t, std::string>> arity_seen;
  std::map<std::string, std::set<std::string>> refs;  // expression -> refs
  std::map<std::string, std::vector<std::pair<Term, std::string>>> consts;
  for (const auto& [name, e] : exprs) {
    walk(e, name, [&, &name = name](const CwNode& n, const std::string& path) {
      switch (n.kind) {
        case CwNode::Kind::Ref:
          if (!s.equations.count(n.ref))
            issues.push_back({path, "unresolved reference " + n.ref});
          else
            refs[name].insert(n.ref);
          break;
        case CwNode::Kind::Add: {
          if (!n.left) issues.push_back({path, "add without operand"});
          std::size_t k = n.colors.size();
          if (sig) {
            auto ar = sig->arity(n.predicate);
            if (!ar)
              issues.push_back({path, "unknown predicate " + n.predicate.name()});
            else if (*ar != k)
              issues.push_back({path, "add " + n.predicate.name() + " has " + std::to_string(k) +
                                          " colors but arity " + std::to_string(*ar)});
          } else {
            auto [it, fresh] = arity_seen.emplace(n.predicate, std::make_pair(k, path));
            if (!fresh && it->second.first != k)
              issues.push_back({path, "add " + n.predicate.name() + " has " + std::to_string(k) +
                                          " colors but " + std::to_string(it->second.first) +
                                          " at " + it->second.second});
          }
          break;
        }
        case CwNode::Kind::Recolor:
          if (!n.left) issues.push_back({path, "recolor without operand"});
          break;
        case CwNode::Kind::Union:
          if (!n.left || !n.right) issues.push_back({path, "union without two operands"});
          break;
        case CwNode::Kind::ConstLeaf:
          consts[name].emplace_back(n.constant, path);
          break;
        default:
          break;
      }
    });
  }

  // Constant uniqueness over one unfolding of each expression.
  for (const auto& [name, e] : exprs) {
    std::map<Term, std::string> first;
    auto note = [&](const std::string& owner) {
      for (const auto& [c, path] : consts[owner]) {
        auto [it, fresh] = first.emplace(c, path);
        if (!fresh)
          issues.push_back({path, "constant " + c.to_string() + " also occurs at " + it->second});
      }
    };
    note(name);
    std::map<std::string, int> uses;
    walk(e, name, [&](const CwNode& n, const std::string&) {
      if (n.kind == CwNode::Kind::Ref && s.equations.count(n.ref)) ++uses[n.ref];
    });
    for (const auto& [r, count] : uses)
      for (int i = 0; i < count; ++i) note(r);
  }

  // Equations reachable from a reference cycle are unfolded without bound,
  // so a constant leaf there repeats.
  std::set<std::string> reachable;
  std::vector<std::string> stack{"root"};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    for (const std::string& r : refs[cur])
      if (reachable.insert(r).second) stack.push_back(r);
  }
  auto reaches = [&](const std::string& from, const std::string& to) {
    std::set<std::string> seen;
    std::vector<std::string> st{from};
    while (!st.empty()) {
      std::string cur = st.back();
      st.pop_back();
      for (const std::string& r : refs[cur]) {
        if (r == to) return true;
        if (seen.insert(r).second) st.push_back(r);
      }
    }
    return false;
  };
  for (const std::string& eq : reachable) {
    if (!reaches(eq, eq)) continue;
    std::set<std::string> below{eq};
    std::vector<std::string> st{eq};
    while (!st.empty()) {
      std::string cur = st.back();
      st.pop_back();
      for (const std::string& r : refs[cur])
        if (below.insert(r).second) st.push_back(r);
    }
    for (const std::string& b : below)
      for (const auto& [c, path] : consts[b])
        issues.push_back({path, "constant " + c.to_string() + " lies under the recursive equation " +
                                    eq + " and would repeat"});
  }
  // Deduplicate (a constant may be flagged from several cycles).
  std::sort(issues.begin(), issues.end(), [](const CwIssue& a, const CwIssue& b) {
    return std::tie(a.path, a.message) < std::tie(b.path, b.message);
  });
  issues.erase(std::unique(issues.begin(), issues.end(),
                           [](const CwIssue& a, const CwIssue& b) {
                             return a.path == b.path && a.message == b.message;
                           }),
               issues.end());
  return issues;
}

// ---------------------------------------------------------------------------
// Evaluation

void add_atoms_in_place(ColoredInstance& ci, Predicate p, const std::vector<Color>& ks) {
  if (ks.empty()) {
    ci.inst.insert(Atom(p, {}));
    return;
  }
  std::map<Color, std::vector<Term>> by_color;
  for (const auto& [t, c] : ci.coloring) by_color[c].push_back(t);
  std::vector<const std::vector<Term>*> lists;
  for (const Color& k : ks) {
    auto it = by_color.find(k);
    if (it == by_color.end()) return;
    lists.push_back(&it->second);
  }
  std::vector<std::size_t> idx(ks.size(), 0);
  while (true) {
    std::vector<Term> args;
    args.reserve(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) args.push_back((*lists[i])[idx[i]]);
    ci.inst.insert(Atom(p, std::move(args)));
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == lists[i]->size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
}

ColoredInstance add_atoms(const ColoredInstance& ci, Predicate p, const std::vector<Color>& ks) {
  ColoredInstance out = ci;
  add_atoms_in_place(out, p, ks);
  return out;
}

namespace {

class Evaluator {
 public:
  Evaluator(const EquationSystem& s, const EvalOptions& options) : s_(s), options_(options) {}

  ColoredInstance run(const CwExpr& e, std::size_t depth, std::string path) {
    // Walk down the unary chain, evaluate its base, then apply the chain.
    std::vector<const CwNode*> chain;
    const CwNode* n = e.get();
    while (true) {
      if (!n) throw std::invalid_argument("malformed expression at e" + path);
      if (is_unary(*n)) {
        chain.push_back(n);
        n = n->left.get();
        path.push_back('0');
        continue;
      }
      if (n->kind == CwNode::Kind::Ref) {
        if (depth == 0) {
          n = nullptr;
          break;
        }
        auto it = s_.equations.find(n->ref);
        if (it == s_.equations.end())
          throw std::invalid_argument("unresolved reference " + n->ref);
        --depth;
        n = it->second.get();
        continue;
      }
      break;
    }

    ColoredInstance ci;
    if (n) {
      switch (n->kind) {
        case CwNode::Kind::ConstLeaf:
          ci.inst.insert(Atom(Predicate::top(), {n->constant}));
          ci.coloring.emplace(n->constant, n->color);
          break;
        case CwNode::Kind::NullLeaf: {
          Term t = Term::null("e" + path);
          ci.inst.insert(Atom(Predicate::top(), {t}));
          ci.coloring.emplace(t, n->color);
          break;
        }
        case CwNode::Kind::Union: {
          ci = run(n->left, depth, path + "0");
          ColoredInstance right = run(n->right, depth, path + "1");
          for (const auto& [t, c] : right.coloring) {
            if (!ci.coloring.emplace(t, c).second)
              throw std::invalid_argument("constant " + t.to_string() + " occurs in two leaves");
          }
          ci.inst.merge(right.inst);
          break;
        }
        default:
          break;
      }
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const CwNode& op = **it;
      if (op.kind == CwNode::Kind::Add) {
        add_atoms_in_place(ci, op.predicate, op.colors);
      } else {
        for (auto& [t, c] : ci.coloring)
          if (c == op.from) c = op.to;
      }
      check_cap(ci);
    }
    check_cap(ci);
    return ci;
  }

 private:
  void check_cap(const ColoredInstance& ci) const {
    if (ci.inst.size() > options_.atom_cap)
      throw ResourceError("evaluation exceeded the atom cap of " +
                          std::to_string(options_.atom_cap));
  }

  const EquationSystem& s_;
  const EvalOptions& options_;
};

}  // namespace

ColoredInstance eval(const EquationSystem& s, std::size_t depth, const EvalOptions& options) {
  if (!s.root) throw std::invalid_argument("system has no root expression");
  Evaluator ev(s, options);
  return ev.run(s.root, depth, "");
}

CwExpr unfold(const EquationSystem& s, std::size_t depth) {
  std::map<std::pair<std::string, std::size_t>, CwExpr> memo;
  std::function<CwExpr(const CwExpr&, std::size_t)> go = [&](const CwExpr& e,
                                                              std::size_t d) -> CwExpr {
    switch (e->kind) {
      case CwNode::Kind::Ref: {
        if (d == 0) return cw::empty();
        auto key = std::make_pair(e->ref, d);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        auto it = s.equations.find(e->ref);
        if (it == s.equations.end()) throw std::invalid_argument("unresolved reference " + e->ref);
        CwExpr out = go(it->second, d - 1);
        memo.emplace(key, out);
        return out;
      }
      case CwNode::Kind::Add:
        return cw::add(e->predicate, e->colors, go(e->left, d));
      case CwNode::Kind::Recolor:
        return cw::recolor(e->from, e->to, go(e->left, d));
      case CwNode::Kind::Union:
        return cw::unite(go(e->left, d), go(e->right, d));
      default:
        return e;
    }
  };
  return go(s.root, depth);
}

std::set<Color> colors_of(const EquationSystem& s) {
  std::set<Color> out;
  auto collect = [&](const CwNode& n, const std::string&) {
    switch (n.kind) {
      case CwNode::Kind::ConstLeaf:
      case CwNode::Kind::NullLeaf:
        out.insert(n.color);
        break;
      case CwNode::Kind::Add:
        out.insert(n.colors.begin(), n.colors.end());
        break;
      case CwNode::Kind::Recolor:
        out.insert(n.from);
        out.insert(n.to);
        break;
      default:
        break;
    }
  };
  if (s.root) walk(s.root, "root", collect);
  for (const auto& [name, e] : s.equations)
    if (e) walk(e, name, collect);
  return out;
}

std::size_t count_colors(const EquationSystem& s) { return colors_of(s).size(); }

bool is_colored_isomorphic(const ColoredInstance& a, const ColoredInstance& b) {
  auto encode = [](const ColoredInstance& ci) {
    Instance out = ci.inst;
    for (const auto& [t, c] : ci.coloring) out.insert(Atom("color!" + c.to_string(), {t}));
    return out;
  };
  return is_isomorphic(encode(a), encode(b));
}

// ---------------------------------------------------------------------------
// Recoloring

EquationSystem recolor_witness(const EquationSystem& s, const std::map<Term, Color>& target,
                               std::size_t depth) {
  ColoredInstance original = eval(s, depth);
  for (const auto& [t, c] : original.coloring)
    if (!target.count(t))
      throw std::invalid_argument("target coloring misses " + t.to_string());

  std::set<Color> palette = colors_of(s);
  std::set<Color> targets;
  for (const auto& [t, c] : original.coloring) targets.insert(target.at(t));
  auto pair = [](const Color& k, const Color& l) { return Color::tuple({k, l}); };
  for (const Color& k : palette)
    for (const Color& l : targets)
      if (targets.count(pair(k, l)))
        throw std::invalid_argument("target color " + pair(k, l).to_string() +
                                    " clashes with a paired color");
  std::vector<Color> lp(targets.begin(), targets.end());

  // Mirrors Evaluator::run so leaf paths match the original null names.
  std::function<CwExpr(const CwExpr&, std::string)> go = [&](const CwExpr& e,
                                                             std::string path) -> CwExpr {
    std::vector<const CwNode*> chain;
    const CwNode* n = e.get();
    while (is_unary(*n)) {
      chain.push_back(n);
      n = n->left.get();
      path.push_back('0');
    }
    CwExpr out;
    switch (n->kind) {
      case CwNode::Kind::ConstLeaf:
        out = cw::const_leaf(n->constant, pair(n->color, target.at(n->constant)));
        break;
      case CwNode::Kind::NullLeaf:
        out = cw::null_leaf(pair(n->color, target.at(Term::null("e" + path))));
        break;
      case CwNode::Kind::Union:
        out = cw::unite(go(n->left, path + "0"), go(n->right, path + "1"));
        break;
      default:
        out = cw::empty();
        break;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const CwNode& op = **it;
      if (op.kind == CwNode::Kind::Add) {
        // One Add per combination of target colors.
        std::size_t ar = op.colors.size();
        if (ar == 0) {
          out = cw::add(op.predicate, {}, out);
          continue;
        }
        if (lp.empty()) continue;
        std::vector<std::size_t> idx(ar, 0);
        while (true) {
          std::vector<Color> ks;
          for (std::size_t i = 0; i < ar; ++i) ks.push_back(pair(op.colors[i], lp[idx[i]]));
          out = cw::add(op.predicate, std::move(ks), out);
          std::size_t i = ar;
          while (i > 0 && ++idx[i - 1] == lp.size()) idx[--i] = 0;
          if (i == 0) break;
        }
      } else {
        for (const Color& l : lp) out = cw::recolor(pair(op.from, l), pair(op.to, l), out);
      }
    }
    return out;
  };

  EquationSystem result;
  CwExpr root = go(unfold(s, depth), "");
  for (const Color& k : palette)
    for (const Color& l : lp) root = cw::recolor(pair(k, l), l, root);
  result.root = root;
  return result;
}

}  // namespace rulebench
