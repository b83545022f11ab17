#pragma once

// Text formats.
//
//   facts      H(a,b). top(a). R("-1",_:n1,c).      bare words are constants
//   rules      [grid] H(x,y), V(x,x2) -> exists y2. H(x2,y2), V(y,y2).
//              bare words are variables, constants are quoted
//   query      ? exists x,y. H(a,x), V(x,y).        declared, ?-prefixed or
//              uppercase words are variables, other bare words constants
//   datalog    rules plus an optional `@goal Goal.`
//   cw         let E = add R (1,2) (null 1 (+) recolor 1->2 (ref E)); root E
//              (a bare equation name is a reference)
//   td         bag 0: a, b.  bag 1: b, c.  edge 0 1.  root 0.
//   coloring   _:e0 : 1.  a : (0,red).
//
// `%` starts a comment running to the end of the line.

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rulebench/cliquewidth.hpp"
#include "rulebench/datalog.hpp"
#include "rulebench/kernel.hpp"
#include "rulebench/rules.hpp"

namespace rulebench {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  ParseError(std::string file, std::size_t line, std::size_t column, const std::string& message);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

// Each parser declares what it reads into `sig` when given and reports arity
// clashes against it as ParseError.
Instance parse_facts(std::string_view text, Signature* sig = nullptr);
RuleSet parse_rules(std::string_view text, Signature* sig = nullptr);
ConjunctiveQuery parse_query(std::string_view text, Signature* sig = nullptr);
DatalogQuery parse_datalog(std::string_view text, Signature* sig = nullptr);
EquationSystem parse_cwexpr(std::string_view text);
TreeDecomposition parse_td(std::string_view text);
std::map<Term, Color> parse_coloring(std::string_view text);
Color parse_color(std::string_view text);

// Objects read from files, keyed by path, checked against one signature.
// Throws ParseError (with the file set) and std::ios_base::failure.
class Workspace {
 public:
  const Signature& signature() const { return signature_; }

  const Instance& facts(const std::string& path);
  const RuleSet& rules(const std::string& path);
  const ConjunctiveQuery& query(const std::string& path);
  const DatalogQuery& datalog(const std::string& path);
  const EquationSystem& cwexpr(const std::string& path);
  const TreeDecomposition& td(const std::string& path);
  const std::map<Term, Color>& coloring(const std::string& path);

 private:
  Signature signature_;
  std::map<std::string, Instance> facts_;
  std::map<std::string, RuleSet> rules_;
  std::map<std::string, ConjunctiveQuery> queries_;
  std::map<std::string, DatalogQuery> datalog_;
  std::map<std::string, EquationSystem> cwexprs_;
  std::map<std::string, TreeDecomposition> tds_;
  std::map<std::string, std::map<Term, Color>> colorings_;
};

std::string read_file(const std::string& path);

std::string print_facts(const Instance& inst);
std::string print_rules(const RuleSet& rules);
std::string print_query(const ConjunctiveQuery& q);
std::string print_datalog(const DatalogQuery& q);
std::string print_td(const TreeDecomposition& td);
std::string print_coloring(const std::map<Term, Color>& coloring);

}  // namespace rulebench
