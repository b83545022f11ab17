#pragma once

// Cliquewidth expressions: leaves, Add, Recolor, disjoint union and named
// recursion, evaluated by bounded unfolding.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rulebench/color.hpp"
#include "rulebench/kernel.hpp"

namespace rulebench {

struct CwNode;
using CwExpr = std::shared_ptr<const CwNode>;

struct CwNode {
  enum class Kind { ConstLeaf, NullLeaf, Add, Recolor, Union, Ref, Empty };

  Kind kind = Kind::Empty;
  Term constant;                // ConstLeaf
  Color color;                  // leaves
  Predicate predicate;          // Add
  std::vector<Color> colors;    // Add
  Color from, to;               // Recolor
  CwExpr left, right;           // child of unary nodes is `left`
  std::string ref;              // Ref
};

namespace cw {
CwExpr const_leaf(Term c, Color k);
CwExpr null_leaf(Color k);
CwExpr add(Predicate p, std::vector<Color> ks, CwExpr child);
CwExpr recolor(Color from, Color to, CwExpr child);
CwExpr unite(CwExpr left, CwExpr right);
CwExpr ref(std::string name);
CwExpr empty();
}  // namespace cw

struct EquationSystem {
  std::map<std::string, CwExpr> equations;
  CwExpr root;
};

std::string to_string(const CwExpr& e);
// `let N = ...;` lines followed by `root ...`.
std::string to_string(const EquationSystem& s);

struct CwIssue {
  std::string path;
  std::string message;
};

// Ref resolution, Add arity agreement (against `sig` when given, else
// consistency across the system) and constant uniqueness.  Never throws.
std::vector<CwIssue> validate(const EquationSystem& s, const Signature* sig = nullptr);

struct ColoredInstance {
  Instance inst;
  std::map<Term, Color> coloring;
};

// Adds R(e) for every tuple e of entities whose colors equal `ks`.
void add_atoms_in_place(ColoredInstance& ci, Predicate p, const std::vector<Color>& ks);
ColoredInstance add_atoms(const ColoredInstance& ci, Predicate p, const std::vector<Color>& ks);

struct EvalOptions {
  std::size_t atom_cap = default_atom_cap();
};

// Unfolds every Ref `depth` times; a Ref reached with depth 0 evaluates to
// the empty instance.  The null introduced by a leaf is named e<path>, where
// the path lists 0 for the child of a unary node or a left operand and 1 for
// a right operand; Refs add nothing to the path.  Throws std::invalid_argument
// on unresolved refs or a repeated constant, ResourceError past the cap.
ColoredInstance eval(const EquationSystem& s, std::size_t depth, const EvalOptions& options = {});

// Ref-free expression with the same evaluation (including null names).
CwExpr unfold(const EquationSystem& s, std::size_t depth);

std::set<Color> colors_of(const EquationSystem& s);
std::size_t count_colors(const EquationSystem& s);

// Same instance up to null renaming, with colors carried along.
bool is_colored_isomorphic(const ColoredInstance& a, const ColoredInstance& b);

// Ref-free system over (k,l) pairs and the colors l of `target`, whose
// evaluation is the evaluation of `s` at `depth` recolored by `target`.
// Throws std::invalid_argument if `target` misses an entity.
EquationSystem recolor_witness(const EquationSystem& s, const std::map<Term, Color>& target,
                               std::size_t depth);

struct TreeDecomposition {
  std::vector<std::set<Term>> bags;
  std::vector<int> parent;  // -1 for the root

  std::size_t width() const;
  std::vector<std::vector<std::size_t>> children() const;
  std::size_t root() const;
};

// Empty string when `td` is a tree decomposition of `inst`.
std::string check_tree_decomposition(const Instance& inst, const TreeDecomposition& td);

// Ref-free system evaluating to an instance isomorphic to `inst` (binary
// signature).  Throws std::invalid_argument on a bad decomposition or an atom
// of arity above 2.
EquationSystem td_to_cw(const Instance& inst, const TreeDecomposition& td);

// (k+1) * 2^(|S1| + (2(k+1)+1)|S2|), k the width; S1 excludes top.  Saturates
// at SIZE_MAX.
std::size_t td_to_cw_color_bound(const Instance& inst, const TreeDecomposition& td);

}  // namespace rulebench
