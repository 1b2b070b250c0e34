#include "gtfl/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gtfl {

TermPtr mk_term(Term t) { return std::make_shared<Term>(std::move(t)); }

// --------------------------------- lexer ------------------------------------

namespace {

enum class Tok {
  Ident, Int, True, False, If, Then, Else, Let, In, Def,
  Lambda, Dot, Comma, Colon, DblColon, Assign, EqEq, Plus,
  LParen, RParen, LBrace, RBrace, Arrow, Question, Eof,
};

struct Token {
  Tok k;
  std::string text;
  long ival = 0;
  int line = 1, col = 1;
};

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(std::move(msg)), line(line), col(col) {}
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t j = 0; j < n; ++j) {
      if (src[i + j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace((unsigned char)c)) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isdigit((unsigned char)c) ||
        (c == '-' && i + 1 < src.size() &&
         std::isdigit((unsigned char)src[i + 1]))) {
      size_t j = i + (c == '-' ? 1 : 0);
      while (j < src.size() && std::isdigit((unsigned char)src[j])) ++j;
      t.k = Tok::Int;
      t.text = src.substr(i, j - i);
      t.ival = std::stol(t.text);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum((unsigned char)src[j]) || src[j] == '_'))
        ++j;
      t.text = src.substr(i, j - i);
      if (t.text == "true") t.k = Tok::True;
      else if (t.text == "false") t.k = Tok::False;
      else if (t.text == "if") t.k = Tok::If;
      else if (t.text == "then") t.k = Tok::Then;
      else if (t.text == "else") t.k = Tok::Else;
      else if (t.text == "let") t.k = Tok::Let;
      else if (t.text == "in") t.k = Tok::In;
      else if (t.text == "def") t.k = Tok::Def;
      else t.k = Tok::Ident;
      advance(j - i);
      out.push_back(t);
      continue;
    }
    auto two = i + 1 < src.size() ? src.substr(i, 2) : std::string();
    if (two == "::") { t.k = Tok::DblColon; advance(2); }
    else if (two == "==") { t.k = Tok::EqEq; advance(2); }
    else if (two == "->") { t.k = Tok::Arrow; advance(2); }
    else switch (c) {
      case '\\': t.k = Tok::Lambda; advance(1); break;
      case '.': t.k = Tok::Dot; advance(1); break;
      case ',': t.k = Tok::Comma; advance(1); break;
      case ':': t.k = Tok::Colon; advance(1); break;
      case '=': t.k = Tok::Assign; advance(1); break;
      case '+': t.k = Tok::Plus; advance(1); break;
      case '(': t.k = Tok::LParen; advance(1); break;
      case ')': t.k = Tok::RParen; advance(1); break;
      case '{': t.k = Tok::LBrace; advance(1); break;
      case '}': t.k = Tok::RBrace; advance(1); break;
      case '?': t.k = Tok::Question; advance(1); break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         line, col);
    }
    out.push_back(t);
  }
  Token eof;
  eof.k = Tok::Eof;
  eof.line = line;
  eof.col = col;
  out.push_back(eof);
  return out;
}

// --------------------------------- parser -----------------------------------

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;

  const Token& peek(size_t n = 0) const {
    return toks[std::min(pos + n, toks.size() - 1)];
  }
  const Token& next() { return toks[std::min(pos++, toks.size() - 1)]; }
  bool at(Tok k) const { return peek().k == k; }
  Token expect(Tok k, const std::string& what) {
    if (!at(k))
      throw ParseError("expected " + what + " but found '" + describe(peek()) +
                           "'",
                       peek().line, peek().col);
    return next();
  }
  static std::string describe(const Token& t) {
    if (t.k == Tok::Eof) return "end of input";
    if (!t.text.empty()) return t.text;
    switch (t.k) {
      case Tok::Lambda: return "\\";
      case Tok::Dot: return ".";
      case Tok::Comma: return ",";
      case Tok::Colon: return ":";
      case Tok::DblColon: return "::";
      case Tok::Assign: return "=";
      case Tok::EqEq: return "==";
      case Tok::Plus: return "+";
      case Tok::LParen: return "(";
      case Tok::RParen: return ")";
      case Tok::LBrace: return "{";
      case Tok::RBrace: return "}";
      case Tok::Arrow: return "->";
      case Tok::Question: return "?";
      default: return "?";
    }
  }

  Term base(Term::K k) const {
    Term t;
    t.k = k;
    t.line = peek().line;
    t.col = peek().col;
    return t;
  }

  // ------------------------------- types ------------------------------------

  GT parse_type() {
    GT left = parse_type_atom();
    if (at(Tok::Arrow)) {
      next();
      return gt_arrow(left, parse_type());  // right-assoc
    }
    return left;
  }

  GT parse_type_atom() {
    const Token& t = peek();
    if (t.k == Tok::Question) {
      next();
      return gt_unknown();
    }
    if (t.k == Tok::Ident && t.text == "Int") {
      next();
      return gt_int();
    }
    if (t.k == Tok::Ident && t.text == "Bool") {
      next();
      return gt_bool();
    }
    if (t.k == Tok::LParen) {
      next();
      GT inner = parse_type();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.k == Tok::LBrace) {
      next();
      std::map<Label, GT> fields;
      bool row = false;
      bool first = true;
      while (!at(Tok::RBrace)) {
        if (!first) expect(Tok::Comma, "','");
        first = false;
        if (at(Tok::Question)) {
          next();
          row = true;
          break;
        }
        Token l = expect(Tok::Ident, "field label");
        if (fields.count(l.text))
          throw ParseError("duplicate label '" + l.text + "'", l.line, l.col);
        expect(Tok::Colon, "':'");
        fields.emplace(l.text, parse_type());
      }
      expect(Tok::RBrace, "'}'");
      return gt_rec(std::move(fields), row);
    }
    throw ParseError("expected a type but found '" + describe(t) + "'", t.line,
                     t.col);
  }

  // ------------------------------- terms ------------------------------------

  TermPtr parse_term() {
    if (at(Tok::If)) {
      Term t = base(Term::K::If);
      next();
      t.a = parse_term();
      expect(Tok::Then, "'then'");
      t.b = parse_term();
      expect(Tok::Else, "'else'");
      t.c = parse_term();
      return mk_term(std::move(t));
    }
    if (at(Tok::Let)) {
      Term t = base(Term::K::Let);
      next();
      t.name = expect(Tok::Ident, "binder name").text;
      if (at(Tok::Colon)) {
        next();
        t.ann = parse_type();
      }
      expect(Tok::Assign, "'='");
      t.a = parse_term();
      expect(Tok::In, "'in'");
      t.b = parse_term();
      return mk_term(std::move(t));
    }
    if (at(Tok::Lambda)) {
      Token lam = next();
      std::vector<std::pair<std::string, GT>> params;
      while (!at(Tok::Dot)) {
        if (at(Tok::LParen)) {
          next();
          std::string x = expect(Tok::Ident, "parameter name").text;
          expect(Tok::Colon, "':'");
          GT ann = parse_type();
          expect(Tok::RParen, "')'");
          params.emplace_back(x, ann);
        } else {
          params.emplace_back(expect(Tok::Ident, "parameter name").text,
                              gt_unknown());
        }
      }
      expect(Tok::Dot, "'.'");
      TermPtr body = parse_term();
      if (params.empty())
        throw ParseError("lambda needs at least one parameter", lam.line,
                         lam.col);
      for (auto it = params.rbegin(); it != params.rend(); ++it) {
        Term t;
        t.k = Term::K::Lam;
        t.line = lam.line;
        t.col = lam.col;
        t.name = it->first;
        t.ann = it->second;
        t.a = body;
        body = mk_term(std::move(t));
      }
      return body;
    }
    return parse_asc();
  }

  TermPtr parse_asc() {
    TermPtr t = parse_eq();
    while (at(Tok::DblColon)) {
      Term a;
      a.k = Term::K::Asc;
      a.line = peek().line;
      a.col = peek().col;
      next();
      a.ann = parse_type();
      a.a = t;
      t = mk_term(std::move(a));
    }
    return t;
  }

  TermPtr parse_eq() {
    TermPtr l = parse_add();
    if (!at(Tok::EqEq)) return l;
    Term t;
    t.k = Term::K::Eq;
    t.line = peek().line;
    t.col = peek().col;
    next();
    t.a = l;
    t.b = parse_add();
    return mk_term(std::move(t));
  }

  TermPtr parse_add() {
    TermPtr l = parse_app();
    while (at(Tok::Plus)) {
      Term t;
      t.k = Term::K::Add;
      t.line = peek().line;
      t.col = peek().col;
      next();
      t.a = l;
      t.b = parse_app();
      l = mk_term(std::move(t));
    }
    return l;
  }

  bool starts_atom() const {
    switch (peek().k) {
      case Tok::Int:
      case Tok::True:
      case Tok::False:
      case Tok::Ident:
      case Tok::LParen:
      case Tok::LBrace:
        return true;
      default:
        return false;
    }
  }

  TermPtr parse_app() {
    TermPtr f = parse_postfix();
    while (starts_atom()) {
      Term t;
      t.k = Term::K::App;
      t.line = peek().line;
      t.col = peek().col;
      t.a = f;
      t.b = parse_postfix();
      f = mk_term(std::move(t));
    }
    return f;
  }

  TermPtr parse_postfix() {
    TermPtr t = parse_atom();
    while (at(Tok::Dot)) {
      Term p;
      p.k = Term::K::Proj;
      p.line = peek().line;
      p.col = peek().col;
      next();
      p.name = expect(Tok::Ident, "field label").text;
      p.a = t;
      t = mk_term(std::move(p));
    }
    return t;
  }

  TermPtr parse_atom() {
    const Token& t = peek();
    switch (t.k) {
      case Tok::Int: {
        Term n = base(Term::K::IntLit);
        n.ival = next().ival;
        return mk_term(std::move(n));
      }
      case Tok::True:
      case Tok::False: {
        Term b = base(Term::K::BoolLit);
        b.bval = next().k == Tok::True;
        return mk_term(std::move(b));
      }
      case Tok::Ident: {
        Term v = base(Term::K::Var);
        v.name = next().text;
        return mk_term(std::move(v));
      }
      case Tok::LParen: {
        next();
        TermPtr inner = parse_term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::LBrace: {
        Term r = base(Term::K::Rec);
        next();
        std::set<std::string> seen;
        bool first = true;
        while (!at(Tok::RBrace)) {
          if (!first) expect(Tok::Comma, "','");
          first = false;
          Token l = expect(Tok::Ident, "field label");
          if (!seen.insert(l.text).second)
            throw ParseError("duplicate label '" + l.text + "'", l.line,
                             l.col);
          expect(Tok::Assign, "'='");
          r.fields.emplace_back(l.text, parse_term());
        }
        expect(Tok::RBrace, "'}'");
        return mk_term(std::move(r));
      }
      default:
        throw ParseError("expected a term but found '" + describe(t) + "'",
                         t.line, t.col);
    }
  }

  // --------------------------- top-level definitions -------------------------

  // def f (x: T1) ... : R = body in rest
  // desugars to a call-by-value fixpoint:
  //   let f : T1 -> ... -> R =
  //     (\(z: ?). F (\(v: T1). ((z z) v) :: Rrest)) (\(z: ?). ...)
  //   in <remainder>
  // where F = \(f: Tf). \(x: T1). ... body and Rrest is Tf minus its first
  // parameter. The inner ascription keeps recursive calls well-typed.
  TermPtr parse_def_chain() {
    if (!at(Tok::Def)) return parse_term();
    Token d = next();
    std::string fname = expect(Tok::Ident, "function name").text;
    std::vector<std::pair<std::string, GT>> params;
    while (at(Tok::LParen)) {
      next();
      std::string x = expect(Tok::Ident, "parameter name").text;
      expect(Tok::Colon, "':'");
      GT ann = parse_type();
      expect(Tok::RParen, "')'");
      params.emplace_back(x, ann);
    }
    if (params.empty())
      throw ParseError("def needs at least one parameter", d.line, d.col);
    expect(Tok::Colon, "':'");
    GT ret = parse_type();
    expect(Tok::Assign, "'='");
    TermPtr body = parse_term();
    expect(Tok::In, "'in'");
    TermPtr rest = parse_def_chain();

    auto lam = [&](std::string x, GT ann, TermPtr b) {
      Term t;
      t.k = Term::K::Lam;
      t.line = d.line;
      t.col = d.col;
      t.name = std::move(x);
      t.ann = std::move(ann);
      t.a = std::move(b);
      return mk_term(std::move(t));
    };
    auto app = [&](TermPtr f, TermPtr x) {
      Term t;
      t.k = Term::K::App;
      t.line = d.line;
      t.col = d.col;
      t.a = std::move(f);
      t.b = std::move(x);
      return mk_term(std::move(t));
    };
    auto var = [&](std::string x) {
      Term t;
      t.k = Term::K::Var;
      t.line = d.line;
      t.col = d.col;
      t.name = std::move(x);
      return mk_term(std::move(t));
    };
    auto asc = [&](TermPtr sub, GT ty) {
      Term t;
      t.k = Term::K::Asc;
      t.line = d.line;
      t.col = d.col;
      t.a = std::move(sub);
      t.ann = std::move(ty);
      return mk_term(std::move(t));
    };

    GT tf = ret;
    for (auto it = params.rbegin(); it != params.rend(); ++it)
      tf = gt_arrow(it->second, tf);
    GT trest = tf->cod;

    TermPtr inner = body;
    for (auto it = params.rbegin(); it != params.rend(); ++it)
      inner = lam(it->first, it->second, inner);
    TermPtr bigF = lam(fname, tf, inner);

    // \(z: ?). F (\(v: T1). ((z z) v) :: Trest)
    TermPtr half =
        lam("_z", gt_unknown(),
            app(bigF, lam("_v", params.front().second,
                          asc(app(app(var("_z"), var("_z")), var("_v")),
                              trest))));
    TermPtr fixed = app(half, half);

    Term let;
    let.k = Term::K::Let;
    let.line = d.line;
    let.col = d.col;
    let.name = fname;
    let.ann = tf;
    let.a = fixed;
    let.b = rest;
    return mk_term(std::move(let));
  }
};

}  // namespace

ParseResult parse_program(const std::string& src) {
  try {
    Parser p{lex(src)};
    TermPtr t = p.parse_def_chain();
    if (!p.at(Tok::Eof)) {
      const Token& tok = p.peek();
      return {nullptr,
              "unexpected trailing input '" + Parser::describe(tok) + "'",
              tok.line, tok.col};
    }
    return {t, "", 0, 0};
  } catch (const ParseError& e) {
    return {nullptr, e.what(), e.line, e.col};
  }
}

std::optional<GT> parse_type_string(const std::string& src) {
  try {
    Parser p{lex(src)};
    GT t = p.parse_type();
    if (!p.at(Tok::Eof)) return std::nullopt;
    return t;
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

// ----------------------------- pretty printing ------------------------------

namespace {

// precedence levels: 0 if/let/lam, 1 asc, 2 eq, 3 add, 4 app, 5 postfix/atom
void pp(std::ostringstream& out, const TermPtr& tp, int min_level) {
  const Term& t = *tp;
  auto paren = [&](int level, auto&& body) {
    bool need = level < min_level;
    if (need) out << "(";
    body();
    if (need) out << ")";
  };
  switch (t.k) {
    case Term::K::Var:
      out << t.name;
      break;
    case Term::K::IntLit:
      out << t.ival;
      break;
    case Term::K::BoolLit:
      out << (t.bval ? "true" : "false");
      break;
    case Term::K::Lam:
      paren(0, [&] {
        out << "\\(" << t.name << ": " << show(t.ann) << "). ";
        pp(out, t.a, 0);
      });
      break;
    case Term::K::App:
      paren(4, [&] {
        pp(out, t.a, 4);
        out << " ";
        pp(out, t.b, 5);
      });
      break;
    case Term::K::Add:
      paren(3, [&] {
        pp(out, t.a, 3);
        out << " + ";
        pp(out, t.b, 4);
      });
      break;
    case Term::K::Eq:
      paren(2, [&] {
        pp(out, t.a, 3);
        out << " == ";
        pp(out, t.b, 3);
      });
      break;
    case Term::K::If:
      paren(0, [&] {
        out << "if ";
        pp(out, t.a, 0);
        out << " then ";
        pp(out, t.b, 0);
        out << " else ";
        pp(out, t.c, 0);
      });
      break;
    case Term::K::Rec: {
      out << "{";
      bool first = true;
      for (auto& [l, sub] : t.fields) {
        if (!first) out << ", ";
        first = false;
        out << l << " = ";
        pp(out, sub, 0);
      }
      out << "}";
      break;
    }
    case Term::K::Proj:
      paren(5, [&] {
        pp(out, t.a, 5);
        out << "." << t.name;
      });
      break;
    case Term::K::Asc:
      paren(1, [&] {
        pp(out, t.a, 1);
        out << " :: " << show(t.ann);
      });
      break;
    case Term::K::Let:
      paren(0, [&] {
        out << "let " << t.name;
        if (t.ann) out << " : " << show(t.ann);
        out << " = ";
        pp(out, t.a, 0);
        out << " in ";
        pp(out, t.b, 0);
      });
      break;
  }
}

}  // namespace

std::string pretty(const TermPtr& t) {
  std::ostringstream out;
  pp(out, t, 0);
  return out.str();
}

}  // namespace gtfl
