#include "finvar/term_io.hpp"

#include <cctype>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace finvar {

namespace {

constexpr const char* kSortLetters = "xyzuvw";

struct ProtoTerm {
  std::string var;               // nonempty for variables
  int symbol = -1;
  std::vector<ProtoTerm> children;
  std::size_t pos = 0;
};

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c))
      throw SyntaxError(std::string("expected '") + c + "'", pos);
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= text.size() || !std::isalpha(static_cast<unsigned char>(text[pos])))
      throw SyntaxError("expected identifier", pos);
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }
};

struct Parser {
  Lexer lex;
  const Signature& sig;
  int dot_symbol = -1;     // symbol named "."
  int bracket_symbol = -1; // symbol used to expand [w]y

  Parser(const std::string& text, const Signature& s) : lex{text}, sig(s) {
    for (std::size_t i = 0; i < sig.symbols.size(); ++i)
      if (sig.symbols[i].name == ".") dot_symbol = static_cast<int>(i);
    bracket_symbol = dot_symbol;
    if (bracket_symbol < 0)
      for (std::size_t i = 0; i < sig.symbols.size(); ++i) {
        const OpSym& op = sig.symbols[i];
        if (op.arity() == 2 && op.out_sort == op.arg_sorts[1]) {
          bracket_symbol = static_cast<int>(i);
          break;
        }
      }
  }

  ProtoTerm parse() {
    ProtoTerm t = parse_dot();
    if (!lex.at_end()) throw SyntaxError("trailing input", lex.pos);
    return t;
  }

  ProtoTerm parse_dot() {
    ProtoTerm left = parse_primary();
    if (lex.peek() == '.') {
      lex.accept('.');
      if (dot_symbol < 0)
        throw SyntaxError("signature has no '.' operation", lex.pos);
      ProtoTerm right = parse_dot();  // right associative
      ProtoTerm app;
      app.symbol = dot_symbol;
      app.pos = left.pos;
      app.children.push_back(std::move(left));
      app.children.push_back(std::move(right));
      return app;
    }
    return left;
  }

  ProtoTerm parse_primary() {
    lex.skip_ws();
    std::size_t start = lex.pos;
    if (lex.accept('(')) {
      ProtoTerm t = parse_dot();
      lex.expect(')');
      return t;
    }
    if (lex.accept('[')) {
      if (bracket_symbol < 0)
        throw SyntaxError("signature has no action operation for [..]", start);
      std::vector<std::string> letters;
      while (lex.peek() != ']') letters.push_back(lex.ident());
      lex.expect(']');
      std::string y = lex.ident();
      if (letters.empty()) {
        ProtoTerm v;
        v.var = y;
        v.pos = start;
        return v;
      }
      ProtoTerm acc;
      acc.var = y;
      acc.pos = start;
      for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
        ProtoTerm app;
        app.symbol = bracket_symbol;
        app.pos = start;
        ProtoTerm l;
        l.var = *it;
        l.pos = start;
        app.children.push_back(std::move(l));
        app.children.push_back(std::move(acc));
        acc = std::move(app);
      }
      return acc;
    }
    std::string name = lex.ident();
    // symbol application?
    int sym = -1;
    for (std::size_t i = 0; i < sig.symbols.size(); ++i)
      if (sig.symbols[i].name == name) sym = static_cast<int>(i);
    if (sym >= 0 && lex.peek() == '(') {
      lex.accept('(');
      ProtoTerm app;
      app.symbol = sym;
      app.pos = start;
      if (lex.peek() != ')') {
        app.children.push_back(parse_dot());
        while (lex.accept(',')) app.children.push_back(parse_dot());
      }
      lex.expect(')');
      if (static_cast<int>(app.children.size()) != sig.symbols[sym].arity())
        throw SyntaxError("'" + name + "' expects " +
                              std::to_string(sig.symbols[sym].arity()) + " arguments",
                          start);
      return app;
    }
    if (sym >= 0 && sig.symbols[sym].arity() == 0) {
      ProtoTerm app;
      app.symbol = sym;
      app.pos = start;
      return app;
    }
    ProtoTerm v;
    v.var = name;
    v.pos = start;
    return v;
  }
};

struct Resolver {
  const Signature& sig;
  // variable name -> (sort, explicit index or -1)
  std::map<std::string, std::pair<int, int>> vars;
  std::vector<std::vector<std::string>> deferred;  // per sort, occurrence order
  std::vector<int> max_explicit;

  explicit Resolver(const Signature& s) : sig(s) {
    deferred.resize(sig.sort_count);
    max_explicit.assign(sig.sort_count, -1);
  }

  // canonical-letter names carry their index; others are deferred
  void note_var(const std::string& name, int sort, std::size_t pos) {
    if (sort < 0)
      throw SyntaxError("cannot infer sort of variable '" + name + "'", pos);
    auto it = vars.find(name);
    if (it != vars.end()) {
      if (it->second.first != sort)
        throw SortMismatch("variable '" + name + "' used at two sorts");
      return;
    }
    int index = -1;
    if (sort < 6 && name[0] == kSortLetters[sort]) {
      bool digits = name.size() > 1;
      for (std::size_t i = 1; i < name.size() && digits; ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      if (name.size() == 1)
        index = 0;
      else if (digits)
        index = std::stoi(name.substr(1));
    }
    vars.emplace(name, std::make_pair(sort, index));
    if (index >= 0)
      max_explicit[sort] = std::max(max_explicit[sort], index);
    else
      deferred[sort].push_back(name);
  }

  void scan(const ProtoTerm& t, int expected_sort) {
    if (!t.var.empty()) {
      int sort = expected_sort;
      if (sort < 0) {
        // top-level bare variable: infer from the canonical letter
        for (int s = 0; s < std::min(sig.sort_count, 6); ++s)
          if (t.var[0] == kSortLetters[s]) sort = s;
      }
      note_var(t.var, sort, t.pos);
      return;
    }
    const OpSym& op = sig.symbols[t.symbol];
    if (expected_sort >= 0 && op.out_sort != expected_sort)
      throw SortMismatch("'" + op.name + "' produces the wrong sort");
    for (int i = 0; i < op.arity(); ++i) scan(t.children[i], op.arg_sorts[i]);
  }

  void finalize() {
    for (int s = 0; s < sig.sort_count; ++s) {
      int next = max_explicit[s] + 1;
      for (const std::string& name : deferred[s]) vars[name].second = next++;
    }
  }

  Term build(const ProtoTerm& t, int expected_sort) const {
    if (!t.var.empty()) {
      auto [sort, index] = vars.at(t.var);
      return Term::var(sort, index);
    }
    const OpSym& op = sig.symbols[t.symbol];
    std::vector<Term> children;
    for (int i = 0; i < op.arity(); ++i)
      children.push_back(build(t.children[i], op.arg_sorts[i]));
    (void)expected_sort;
    return Term::app(sig, t.symbol, std::move(children));
  }
};

}  // namespace

Term parse_term(const std::string& text, const Signature& sig) {
  if (sig.sort_count > 6) throw Error("term syntax supports at most 6 sorts");
  Parser p(text, sig);
  ProtoTerm proto = p.parse();
  Resolver r(sig);
  r.scan(proto, -1);
  r.finalize();
  return r.build(proto, -1);
}

namespace {

void format_rec(const Term& t, const Signature& sig, bool parenthesize,
                std::string& out) {
  if (t.is_var()) {
    out += kSortLetters[t.sort];
    out += std::to_string(t.var_index);
    return;
  }
  const OpSym& op = sig.symbols[t.symbol];
  if (op.name == "." && op.arity() == 2) {
    if (parenthesize) out += '(';
    format_rec(t.children[0], sig, true, out);
    out += " . ";
    format_rec(t.children[1], sig, true, out);
    if (parenthesize) out += ')';
    return;
  }
  out += op.name;
  if (op.arity() > 0) {
    out += '(';
    for (int i = 0; i < op.arity(); ++i) {
      if (i) out += ',';
      format_rec(t.children[i], sig, false, out);
    }
    out += ')';
  } else {
    out += "()";
  }
}

}  // namespace

std::string format_term(const Term& t, const Signature& sig) {
  if (sig.sort_count > 6) throw Error("term syntax supports at most 6 sorts");
  std::string out;
  format_rec(t, sig, false, out);
  return out;
}

Identity parse_identity(const std::string& line, const Signature& sig) {
  if (sig.sort_count > 6) throw Error("term syntax supports at most 6 sorts");
  std::size_t pos = line.find("=~");
  if (pos == std::string::npos) throw SyntaxError("identity needs '=~'", 0);
  // variables are shared between the two sides, so resolve them jointly
  Parser pl(line.substr(0, pos), sig);
  Parser pr(line.substr(pos + 2), sig);
  ProtoTerm lproto = pl.parse();
  ProtoTerm rproto = pr.parse();
  Resolver r(sig);
  r.scan(lproto, -1);
  r.scan(rproto, -1);
  r.finalize();
  return Identity::make(r.build(lproto, -1), r.build(rproto, -1));
}

std::string format_identity(const Identity& id, const Signature& sig) {
  return format_term(id.lhs, sig) + " =~ " + format_term(id.rhs, sig);
}

std::vector<Identity> read_identities(std::istream& in, const Signature& sig) {
  std::vector<Identity> out;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    out.push_back(parse_identity(line, sig));
  }
  return out;
}

void write_identities(std::ostream& out, const std::vector<Identity>& ids,
                      const Signature& sig) {
  for (const Identity& id : ids) out << format_identity(id, sig) << "\n";
}

}  // namespace finvar
