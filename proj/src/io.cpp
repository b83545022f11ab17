#include "rulebench/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <queue>
#include <sstream>

namespace rulebench {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

ParseError::ParseError(std::string file, std::size_t line, std::size_t column,
                       const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                         message),
      file_(std::move(file)),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

enum class Tok {
  Word,    // [A-Za-z0-9_'!] run, or '-' followed by digits
  String,  // "..."
  Null,    // _:name
  Var,     // ?name
  Punct,   // ( ) , . ; : [ ] = @ * and the multi-char -> (+)
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

// '!' appears in generated names such as reified hub variables.
bool word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '\'' || c == '!';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { tokens_ = run(); }

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(std::string_view punct) const { return peek().kind == Tok::Punct && peek().text == punct; }
  bool is_word(std::string_view w) const { return peek().kind == Tok::Word && peek().text == w; }
  bool accept(std::string_view punct) {
    if (!is(punct)) return false;
    next();
    return true;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail(peek(), "expected '" + std::string(punct) + "'");
  }
  [[noreturn]] static void fail(const Token& t, const std::string& message) {
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, message + ", found " + found);
  }

 private:
  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (i_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char c = text_[i_];
      if (c == '"') {
        t.kind = Tok::String;
        t.text = read_string();
      } else if (c == '_' && i_ + 1 < text_.size() && text_[i_ + 1] == ':') {
        advance(2);
        t.kind = Tok::Null;
        t.text = read_null_name(t);
      } else if (c == '?' && i_ + 1 < text_.size() && word_char(text_[i_ + 1])) {
        advance(1);
        t.kind = Tok::Var;
        t.text = read_word();
      } else if (word_char(c) || (c == '-' && i_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_ + 1])))) {
        t.kind = Tok::Word;
        if (c == '-') {
          advance(1);
          t.text = "-";
        }
        t.text += read_word();
      } else if (text_.substr(i_, 2) == "->") {
        t.kind = Tok::Punct;
        t.text = "->";
        advance(2);
      } else if (text_.substr(i_, 3) == "(+)") {
        t.kind = Tok::Punct;
        t.text = "(+)";
        advance(3);
      } else if (std::string_view("(),.;:[]=@*?").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
        advance(1);
      } else {
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < text_.size(); ++k, ++i_) {
      if (text_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == '%') {
        while (i_ < text_.size() && text_[i_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string read_word() {
    std::string out;
    while (i_ < text_.size() && word_char(text_[i_])) {
      out.push_back(text_[i_]);
      advance(1);
    }
    return out;
  }

  std::string read_string() {
    std::size_t line = line_, col = col_;
    advance(1);
    std::string out;
    while (i_ < text_.size() && text_[i_] != '"') {
      if (text_[i_] == '\\' && i_ + 1 < text_.size()) advance(1);
      out.push_back(text_[i_]);
      advance(1);
    }
    if (i_ >= text_.size()) throw ParseError(line, col, "unterminated string");
    advance(1);
    return out;
  }

  // Null names run to a delimiter outside <...>, skipping quoted strings.
  std::string read_null_name(const Token& start) {
    std::string out;
    int depth = 0;
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == '"') {
        std::size_t from = i_;
        read_string();
        out.append(text_.substr(from, i_ - from));
        continue;
      }
      if (depth == 0 && (std::isspace(static_cast<unsigned char>(c)) ||
                         std::string_view(",().;:[]=%").find(c) != std::string_view::npos))
        break;
      if (c == '<') ++depth;
      if (c == '>') {
        if (depth == 0) break;
        --depth;
      }
      out.push_back(c);
      advance(1);
    }
    if (depth != 0) throw ParseError(start.line, start.column, "unbalanced '<' in null name");
    if (out.empty()) throw ParseError(start.line, start.column, "empty null name");
    return out;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// How bare words read as terms.
enum class BareWords { Constants, Variables, QueryStyle };

struct TermContext {
  BareWords bare = BareWords::Constants;
  bool allow_nulls = true;
  bool allow_variables = false;
  const std::set<std::string>* declared = nullptr;
};

Term read_term(Lexer& lx, const TermContext& ctx) {
  Token t = lx.next();
  switch (t.kind) {
    case Tok::String:
      return Term::constant(t.text);
    case Tok::Null:
      if (!ctx.allow_nulls) Lexer::fail(t, "nulls are not allowed here");
      return Term::null(t.text);
    case Tok::Var:
      if (!ctx.allow_variables) Lexer::fail(t, "variables are not allowed here");
      return Term::variable(t.text);
    case Tok::Word:
      switch (ctx.bare) {
        case BareWords::Constants:
          return Term::constant(t.text);
        case BareWords::Variables:
          return Term::variable(t.text);
        case BareWords::QueryStyle:
          if ((ctx.declared && ctx.declared->count(t.text)) || (t.text[0] >= 'A' && t.text[0] <= 'Z'))
            return Term::variable(t.text);
          return Term::constant(t.text);
      }
      break;
    default:
      break;
  }
  Lexer::fail(t, "expected a term");
}

Atom read_atom(Lexer& lx, const TermContext& ctx, Signature* sig) {
  Token name = lx.next();
  if (name.kind != Tok::Word) Lexer::fail(name, "expected a predicate name");
  std::vector<Term> args;
  if (lx.accept("(")) {
    if (!lx.accept(")")) {
      do {
        args.push_back(read_term(lx, ctx));
      } while (lx.accept(","));
      lx.expect(")");
    }
  }
  Atom a(Predicate(name.text), std::move(args));
  if (a.predicate.is_top() && a.args.size() != 1)
    throw ParseError(name.line, name.column, "top is unary");
  if (sig) {
    try {
      sig->declare(a);
    } catch (const SignatureError& e) {
      throw ParseError(name.line, name.column, e.what());
    }
  }
  return a;
}

std::vector<Atom> read_atoms(Lexer& lx, const TermContext& ctx, Signature* sig) {
  std::vector<Atom> out;
  do {
    out.push_back(read_atom(lx, ctx, sig));
  } while (lx.accept(","));
  return out;
}

std::vector<std::string> read_names(Lexer& lx) {
  std::vector<std::string> out;
  do {
    Token t = lx.next();
    if (t.kind != Tok::Word && t.kind != Tok::Var) Lexer::fail(t, "expected a variable name");
    out.push_back(t.text);
  } while (lx.accept(","));
  return out;
}

// [label] body -> exists ys. head.
Rule read_rule(Lexer& lx, Signature* sig) {
  Token start = lx.peek();
  Rule r;
  if (lx.accept("[")) {
    Token label = lx.next();
    if (label.kind != Tok::Word && label.kind != Tok::String) Lexer::fail(label, "expected a rule label");
    r.label = label.text;
    lx.expect("]");
  }
  TermContext ctx{BareWords::Variables, false, true, nullptr};
  if (!lx.is("->")) r.body = read_atoms(lx, ctx, sig);
  lx.expect("->");
  std::set<std::string> declared;
  if (lx.is_word("exists")) {
    lx.next();
    for (auto& n : read_names(lx)) declared.insert(n);
    lx.expect(".");
  }
  r.head = read_atoms(lx, ctx, sig);
  lx.expect(".");
  std::set<std::string> body_vars;
  for (const Atom& a : r.body)
    for (Term t : a.args)
      if (t.is_variable()) body_vars.insert(t.name());
  for (const std::string& d : declared)
    if (body_vars.count(d))
      throw ParseError(start.line, start.column, "existential " + d + " also occurs in the body");
  for (const Atom& a : r.head)
    for (Term t : a.args)
      if (t.is_variable() && !body_vars.count(t.name()) && !declared.count(t.name()))
        throw ParseError(start.line, start.column,
                         "head variable " + t.name() + " is neither in the body nor declared");
  return r;
}

RuleSet read_rules_until(Lexer& lx, Signature* sig, std::optional<Predicate>* goal) {
  RuleSet rules;
  while (!lx.at_end()) {
    if (goal && lx.is("@")) {
      Token at = lx.next();
      if (!lx.is_word("goal")) Lexer::fail(lx.peek(), "expected 'goal'");
      lx.next();
      Token g = lx.next();
      if (g.kind != Tok::Word) Lexer::fail(g, "expected a predicate name");
      if (lx.accept("(")) lx.expect(")");
      lx.expect(".");
      if (goal->has_value()) throw ParseError(at.line, at.column, "goal declared twice");
      *goal = Predicate(g.text);
      continue;
    }
    Token start = lx.peek();
    Rule r = read_rule(lx, sig);
    try {
      rules.add(std::move(r));
    } catch (const RuleError& e) {
      throw ParseError(start.line, start.column, e.what());
    }
  }
  return rules;
}

Color read_color(Lexer& lx) {
  Token t = lx.next();
  if (t.kind == Tok::Word) {
    bool numeric = !t.text.empty() && std::all_of(t.text.begin() + (t.text[0] == '-'), t.text.end(),
                                                   [](char c) { return c >= '0' && c <= '9'; });
    if (numeric && t.text != "-") {
      try {
        return Color(static_cast<std::int64_t>(std::stoll(t.text)));
      } catch (const std::out_of_range&) {
        Lexer::fail(t, "integer color out of range");
      }
    }
    return Color::name(t.text);
  }
  if (t.kind == Tok::String) return Color::name(t.text);
  if (t.kind == Tok::Punct && t.text == "(") {
    std::vector<Color> parts;
    if (!lx.accept(")")) {
      parts.push_back(read_color(lx));
      while (lx.accept(",")) {
        if (lx.is(")")) break;  // (x,)
        parts.push_back(read_color(lx));
      }
      lx.expect(")");
    }
    return Color::tuple(std::move(parts));
  }
  Lexer::fail(t, "expected a color");
}

bool reserved(const std::string& w) {
  for (const char* k : {"let", "root", "add", "recolor", "null", "const", "ref", "void"})
    if (w == k) return true;
  return false;
}

CwExpr read_cw(Lexer& lx);

CwExpr read_cw_unary(Lexer& lx) {
  Token t = lx.peek();
  if (t.kind == Tok::Word) {
    if (t.text == "add") {
      lx.next();
      Token p = lx.next();
      if (p.kind != Tok::Word) Lexer::fail(p, "expected a predicate name");
      lx.expect("(");
      std::vector<Color> ks;
      if (!lx.accept(")")) {
        do {
          ks.push_back(read_color(lx));
        } while (lx.accept(","));
        lx.expect(")");
      }
      if (p.text == "top") Lexer::fail(p, "cannot add top atoms");
      return cw::add(Predicate(p.text), std::move(ks), read_cw_unary(lx));
    }
    if (t.text == "recolor") {
      lx.next();
      Color from = read_color(lx);
      lx.expect("->");
      Color to = read_color(lx);
      return cw::recolor(std::move(from), std::move(to), read_cw_unary(lx));
    }
    if (t.text == "null") {
      lx.next();
      return cw::null_leaf(read_color(lx));
    }
    if (t.text == "const") {
      lx.next();
      Token c = lx.next();
      if (c.kind != Tok::Word && c.kind != Tok::String) Lexer::fail(c, "expected a constant");
      return cw::const_leaf(Term::constant(c.text), read_color(lx));
    }
    if (t.text == "ref") {
      lx.next();
      Token n = lx.next();
      if (n.kind != Tok::Word || reserved(n.text)) Lexer::fail(n, "expected an equation name");
      return cw::ref(n.text);
    }
    if (t.text == "void") {
      lx.next();
      return cw::empty();
    }
    if (!reserved(t.text)) {
      lx.next();
      return cw::ref(t.text);  // bare equation name
    }
  }
  if (lx.accept("(")) {
    CwExpr e = read_cw(lx);
    lx.expect(")");
    return e;
  }
  Lexer::fail(t, "expected a cliquewidth expression");
}

CwExpr read_cw(Lexer& lx) {
  CwExpr e = read_cw_unary(lx);
  while (lx.accept("(+)")) e = cw::unite(e, read_cw_unary(lx));
  return e;
}

}  // namespace

Instance parse_facts(std::string_view text, Signature* sig) {
  Signature local;
  if (!sig) sig = &local;
  Lexer lx(text);
  Instance out;
  TermContext ctx{BareWords::Constants, true, false, nullptr};
  while (!lx.at_end()) {
    out.insert(read_atom(lx, ctx, sig));
    lx.expect(".");
  }
  return out;
}

RuleSet parse_rules(std::string_view text, Signature* sig) {
  Signature local;
  if (!sig) sig = &local;
  Lexer lx(text);
  return read_rules_until(lx, sig, nullptr);
}

ConjunctiveQuery parse_query(std::string_view text, Signature* sig) {
  Signature local;
  if (!sig) sig = &local;
  Lexer lx(text);
  lx.accept("?");
  std::set<std::string> declared;
  if (lx.is_word("exists")) {
    lx.next();
    for (auto& n : read_names(lx)) declared.insert(n);
    lx.expect(".");
  }
  TermContext ctx{BareWords::QueryStyle, false, true, &declared};
  ConjunctiveQuery q;
  if (!lx.at_end()) {
    q.atoms = read_atoms(lx, ctx, sig);
    lx.expect(".");
  }
  if (!lx.at_end()) Lexer::fail(lx.peek(), "expected end of query");
  return q;
}

DatalogQuery parse_datalog(std::string_view text, Signature* sig) {
  Signature local;
  if (!sig) sig = &local;
  Lexer lx(text);
  std::optional<Predicate> goal;
  RuleSet rules = read_rules_until(lx, sig, &goal);
  try {
    return DatalogQuery::make(std::move(rules), goal.value_or(Predicate("Goal")));
  } catch (const DatalogError& e) {
    throw ParseError(1, 1, e.what());
  }
}

EquationSystem parse_cwexpr(std::string_view text) {
  Lexer lx(text);
  EquationSystem s;
  while (!lx.at_end()) {
    if (lx.accept(";")) continue;
    Token t = lx.next();
    if (t.kind == Tok::Word && t.text == "let") {
      Token n = lx.next();
      if (n.kind != Tok::Word || reserved(n.text)) Lexer::fail(n, "expected an equation name");
      lx.expect("=");
      if (s.equations.count(n.text)) throw ParseError(n.line, n.column, "equation " + n.text + " defined twice");
      s.equations[n.text] = read_cw(lx);
    } else if (t.kind == Tok::Word && t.text == "root") {
      if (s.root) throw ParseError(t.line, t.column, "root given twice");
      s.root = read_cw(lx);
    } else {
      Lexer::fail(t, "expected 'let' or 'root'");
    }
  }
  if (!s.root) throw ParseError(1, 1, "missing root");
  return s;
}

TreeDecomposition parse_td(std::string_view text) {
  Lexer lx(text);
  std::map<std::string, std::size_t> index;
  std::vector<std::set<Term>> bags;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::optional<std::string> root_name;
  Token root_token;
  TermContext ctx{BareWords::Constants, true, false, nullptr};
  auto node_name = [&](const char* what) {
    Token t = lx.next();
    if (t.kind != Tok::Word) Lexer::fail(t, std::string("expected ") + what);
    return t;
  };
  std::vector<std::pair<Token, Token>> pending_edges;
  while (!lx.at_end()) {
    Token kw = lx.next();
    if (kw.kind == Tok::Word && kw.text == "bag") {
      Token id = node_name("a bag id");
      if (index.count(id.text)) throw ParseError(id.line, id.column, "bag " + id.text + " defined twice");
      index[id.text] = bags.size();
      bags.emplace_back();
      lx.expect(":");
      while (!lx.is(".")) {
        bags.back().insert(read_term(lx, ctx));
        lx.accept(",");
      }
      lx.expect(".");
    } else if (kw.kind == Tok::Word && kw.text == "edge") {
      Token a = node_name("a bag id");
      Token b = node_name("a bag id");
      lx.expect(".");
      pending_edges.emplace_back(a, b);
    } else if (kw.kind == Tok::Word && kw.text == "root") {
      if (root_name) throw ParseError(kw.line, kw.column, "root given twice");
      root_token = node_name("a bag id");
      root_name = root_token.text;
      lx.expect(".");
    } else {
      Lexer::fail(kw, "expected 'bag', 'edge' or 'root'");
    }
  }
  if (bags.empty()) throw ParseError(1, 1, "no bags");
  std::vector<std::vector<std::size_t>> adj(bags.size());
  for (auto& [a, b] : pending_edges) {
    for (const Token* t : {&a, &b})
      if (!index.count(t->text)) throw ParseError(t->line, t->column, "unknown bag " + t->text);
    std::size_t u = index[a.text], v = index[b.text];
    if (u == v) throw ParseError(a.line, a.column, "self-loop edge");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  if (pending_edges.size() + 1 != bags.size())
    throw ParseError(1, 1, "a tree on " + std::to_string(bags.size()) + " bags needs " +
                               std::to_string(bags.size() - 1) + " edges");
  std::size_t root = 0;
  if (root_name) {
    if (!index.count(*root_name))
      throw ParseError(root_token.line, root_token.column, "unknown bag " + *root_name);
    root = index[*root_name];
  }
  // Orient away from the root; bags keep their declaration order.
  TreeDecomposition td;
  td.bags = bags;
  td.parent.assign(bags.size(), -2);
  std::queue<std::size_t> todo;
  todo.push(root);
  td.parent[root] = -1;
  std::size_t seen = 0;
  while (!todo.empty()) {
    std::size_t u = todo.front();
    todo.pop();
    ++seen;
    for (std::size_t v : adj[u]) {
      if (td.parent[v] != -2) continue;
      td.parent[v] = static_cast<int>(u);
      todo.push(v);
    }
  }
  if (seen != bags.size()) throw ParseError(1, 1, "bags are not connected");
  return td;
}

std::map<Term, Color> parse_coloring(std::string_view text) {
  Lexer lx(text);
  std::map<Term, Color> out;
  TermContext ctx{BareWords::Constants, true, false, nullptr};
  while (!lx.at_end()) {
    Token start = lx.peek();
    Term t = read_term(lx, ctx);
    lx.expect(":");
    Color c = read_color(lx);
    lx.expect(".");
    if (!out.emplace(t, c).second)
      throw ParseError(start.line, start.column, "term " + t.to_string() + " colored twice");
  }
  return out;
}

Color parse_color(std::string_view text) {
  Lexer lx(text);
  Color c = read_color(lx);
  if (!lx.at_end()) Lexer::fail(lx.peek(), "expected end of color");
  return c;
}

std::string print_facts(const Instance& inst) {
  std::string out;
  for (const Atom& a : inst.sorted_atoms()) out.append(a.to_string()).append(".\n");
  return out;
}

std::string print_rules(const RuleSet& rules) { return rules.to_string(); }

std::string print_query(const ConjunctiveQuery& q) { return q.to_string() + "\n"; }

std::string print_datalog(const DatalogQuery& q) {
  std::string out = q.rules.to_string();
  if (!out.empty() && out.back() != '\n') out.push_back('\n');
  out.append("@goal ").append(q.goal.name()).append(".\n");
  return out;
}

std::string print_td(const TreeDecomposition& td) {
  std::ostringstream out;
  for (std::size_t i = 0; i < td.bags.size(); ++i) {
    out << "bag " << i << ":";
    bool first = true;
    for (Term t : td.bags[i]) {
      out << (first ? " " : ", ") << t.to_string();
      first = false;
    }
    out << ".\n";
  }
  for (std::size_t i = 0; i < td.parent.size(); ++i)
    if (td.parent[i] >= 0) out << "edge " << td.parent[i] << " " << i << ".\n";
  if (!td.bags.empty()) out << "root " << td.root() << ".\n";
  return out.str();
}

std::string print_coloring(const std::map<Term, Color>& coloring) {
  std::string out;
  for (const auto& [t, c] : coloring) out.append(t.to_string()).append(" : ").append(c.to_string()).append(".\n");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

namespace {

template <class T, class Parse>
const T& load(std::map<std::string, T>& cache, const std::string& path, Parse parse) {
  if (auto it = cache.find(path); it != cache.end()) return it->second;
  std::string text = read_file(path);
  try {
    return cache.emplace(path, parse(text)).first->second;
  } catch (const ParseError& e) {
    throw ParseError(path, e.line(), e.column(), e.message());
  }
}

}  // namespace

const Instance& Workspace::facts(const std::string& path) {
  return load(facts_, path, [&](const std::string& t) { return parse_facts(t, &signature_); });
}

const RuleSet& Workspace::rules(const std::string& path) {
  return load(rules_, path, [&](const std::string& t) { return parse_rules(t, &signature_); });
}

const ConjunctiveQuery& Workspace::query(const std::string& path) {
  return load(queries_, path, [&](const std::string& t) { return parse_query(t, &signature_); });
}

const DatalogQuery& Workspace::datalog(const std::string& path) {
  return load(datalog_, path, [&](const std::string& t) { return parse_datalog(t, &signature_); });
}

const EquationSystem& Workspace::cwexpr(const std::string& path) {
  return load(cwexprs_, path, [](const std::string& t) { return parse_cwexpr(t); });
}

const TreeDecomposition& Workspace::td(const std::string& path) {
  return load(tds_, path, [](const std::string& t) { return parse_td(t); });
}

const std::map<Term, Color>& Workspace::coloring(const std::string& path) {
  return load(colorings_, path, [](const std::string& t) { return parse_coloring(t); });
}

}  // namespace rulebench
