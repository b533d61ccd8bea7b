#include "sigdiag/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace sigdiag {

namespace {

enum class Tok {
  ident,
  number,
  keyword,
  lt,
  gt,
  eq,
  neq,
  le,
  ge,
  plus,
  minus,
  star,
  slash,
  lparen,
  rparen,
  end,
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double number = 0;
  int line = 1;
  int column = 1;
};

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {
      "or",      "and",        "not",        "globally",    "before",
      "after",   "at",         "between",    "if",          "then",
      "within",  "exactly",    "most",       "least",       "assert",
      "becomes", "exists",     "exist",      "spike",       "oscillation",
      "in",      "with",       "width",      "amplitude",   "p2pAmp",
      "period",  "rises",      "falls",      "monotonically", "reaching",
      "overshoots", "undershoots", "by",
  };
  return kw;
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(&text) { next(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    next();
    return t;
  }

 private:
  void next() {
    skip_space();
    tok_.line = line_;
    tok_.column = column_;
    if (pos_ >= text_->size()) {
      tok_.kind = Tok::end;
      tok_.text = "<end of input>";
      return;
    }
    char c = (*text_)[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
        static_cast<unsigned char>(c) >= 0x80) {
      size_t start = pos_;
      while (pos_ < text_->size()) {
        char d = (*text_)[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' ||
            static_cast<unsigned char>(d) >= 0x80) {
          advance();
        } else {
          break;
        }
      }
      tok_.text = text_->substr(start, pos_ - start);
      tok_.kind = keywords().count(tok_.text) ? Tok::keyword : Tok::ident;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_->size() &&
         std::isdigit(static_cast<unsigned char>((*text_)[pos_ + 1])))) {
      lex_number();
      return;
    }
    switch (c) {
      case '<':
        advance();
        if (pos_ < text_->size() && (*text_)[pos_] == '=') {
          advance();
          tok_.kind = Tok::le;
          tok_.text = "<=";
        } else if (pos_ < text_->size() && (*text_)[pos_] == '>') {
          advance();
          tok_.kind = Tok::neq;
          tok_.text = "<>";
        } else {
          tok_.kind = Tok::lt;
          tok_.text = "<";
        }
        return;
      case '>':
        advance();
        if (pos_ < text_->size() && (*text_)[pos_] == '=') {
          advance();
          tok_.kind = Tok::ge;
          tok_.text = ">=";
        } else {
          tok_.kind = Tok::gt;
          tok_.text = ">";
        }
        return;
      case '=': advance(); tok_.kind = Tok::eq; tok_.text = "="; return;
      case '+': advance(); tok_.kind = Tok::plus; tok_.text = "+"; return;
      case '-': advance(); tok_.kind = Tok::minus; tok_.text = "-"; return;
      case '*': advance(); tok_.kind = Tok::star; tok_.text = "*"; return;
      case '/': advance(); tok_.kind = Tok::slash; tok_.text = "/"; return;
      case '(': advance(); tok_.kind = Tok::lparen; tok_.text = "("; return;
      case ')': advance(); tok_.kind = Tok::rparen; tok_.text = ")"; return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_,
                         column_);
    }
  }

  void lex_number() {
    size_t start = pos_;
    while (pos_ < text_->size() &&
           (std::isdigit(static_cast<unsigned char>((*text_)[pos_])) ||
            (*text_)[pos_] == '.'))
      advance();
    if (pos_ < text_->size() && ((*text_)[pos_] == 'e' || (*text_)[pos_] == 'E')) {
      size_t save = pos_;
      advance();
      if (pos_ < text_->size() && ((*text_)[pos_] == '+' || (*text_)[pos_] == '-'))
        advance();
      if (pos_ < text_->size() && std::isdigit(static_cast<unsigned char>((*text_)[pos_]))) {
        while (pos_ < text_->size() &&
               std::isdigit(static_cast<unsigned char>((*text_)[pos_])))
          advance();
      } else {
        pos_ = save;  // bare 'e' belongs to the next token
      }
    }
    std::string lit = text_->substr(start, pos_ - start);
    double out = 0;
    auto res = std::from_chars(lit.data(), lit.data() + lit.size(), out);
    if (res.ec != std::errc() || res.ptr != lit.data() + lit.size())
      throw ParseError("malformed number '" + lit + "'", tok_.line, tok_.column);
    tok_.kind = Tok::number;
    tok_.text = lit;
    tok_.number = out;
  }

  void skip_space() {
    while (pos_ < text_->size()) {
      char c = (*text_)[pos_];
      if (c == '#') {
        while (pos_ < text_->size() && (*text_)[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if ((*text_)[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string* text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  Property parse() {
    Property prop;
    prop.clauses.push_back(parse_clause());
    while (is_kw("or")) {
      lex_.take();
      prop.clauses.push_back(parse_clause());
    }
    expect_end();
    return prop;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = lex_.peek();
    throw ParseError(msg + ", found '" + t.text + "'", t.line, t.column);
  }

  bool is_kw(const char* kw) const {
    return lex_.peek().kind == Tok::keyword && lex_.peek().text == kw;
  }

  void expect_kw(const char* kw) {
    if (!is_kw(kw)) fail(std::string("expected '") + kw + "'");
    lex_.take();
  }

  void expect_end() {
    if (lex_.peek().kind != Tok::end) fail("expected end of property");
  }

  Clause parse_clause() {
    Clause clause;
    clause.atoms.push_back(parse_atom());
    while (is_kw("and")) {
      lex_.take();
      clause.atoms.push_back(parse_atom());
    }
    return clause;
  }

  Atom parse_atom() {
    Atom atom;
    if (is_kw("not")) {
      lex_.take();
      atom.negated = true;
      if (!scope_ahead()) fail("'not' must be followed by a scope construct");
    }
    atom.scope = parse_scope();
    return atom;
  }

  bool scope_ahead() const {
    return is_kw("globally") || is_kw("before") || is_kw("after") ||
           is_kw("at") || is_kw("between");
  }

  Scope parse_scope() {
    Scope sc;
    if (is_kw("globally")) {
      lex_.take();
      sc.kind = Scope::Kind::globally;
      sc.body = std::make_shared<Pattern>(parse_pattern());
      return sc;
    }
    if (is_kw("before") || is_kw("after")) {
      bool before = is_kw("before");
      lex_.take();
      if (number_ahead()) {
        sc.kind = before ? Scope::Kind::before_t : Scope::Kind::after_t;
        sc.t1 = parse_signed_number();
      } else {
        sc.kind = before ? Scope::Kind::before_p : Scope::Kind::after_p;
        sc.opener = std::make_shared<Pattern>(parse_pattern());
      }
      sc.body = std::make_shared<Pattern>(parse_pattern());
      return sc;
    }
    if (is_kw("at")) {
      lex_.take();
      sc.kind = Scope::Kind::at_t;
      sc.t1 = parse_signed_number();
      sc.body = std::make_shared<Pattern>(parse_pattern());
      return sc;
    }
    if (is_kw("between")) {
      lex_.take();
      if (number_ahead()) {
        sc.kind = Scope::Kind::between_t;
        sc.t1 = parse_signed_number();
        expect_kw("and");
        sc.t2 = parse_signed_number();
      } else {
        sc.kind = Scope::Kind::between_p;
        sc.opener = std::make_shared<Pattern>(parse_pattern());
        expect_kw("and");
        sc.closer = std::make_shared<Pattern>(parse_pattern());
      }
      sc.body = std::make_shared<Pattern>(parse_pattern());
      return sc;
    }
    fail("expected a scope construct (globally/before/after/at/between)");
  }

  bool number_ahead() const {
    if (lex_.peek().kind == Tok::number) return true;
    return lex_.peek().kind == Tok::minus;  // negative boundary
  }

  double parse_signed_number() {
    bool neg = false;
    if (lex_.peek().kind == Tok::minus) {
      lex_.take();
      neg = true;
    }
    if (lex_.peek().kind != Tok::number) fail("expected a number");
    double v = lex_.take().number;
    return neg ? -v : v;
  }

  Pattern parse_pattern() {
    if (is_kw("assert")) {
      lex_.take();
      Pattern p;
      p.kind = Pattern::Kind::assertion;
      p.condition = std::make_shared<Condition>(parse_condition());
      return p;
    }
    if (is_kw("if")) return parse_if_then();
    if (is_kw("exists") || is_kw("exist")) return parse_shape_pattern();
    // Remaining patterns start with a signal expression.
    SignalExprPtr sig = parse_expr();
    if (is_kw("becomes")) {
      lex_.take();
      Pattern p;
      p.kind = Pattern::Kind::becomes;
      p.signal = sig;
      p.op = parse_cmp_op();
      p.value = parse_signed_number();
      return p;
    }
    if (is_kw("rises") || is_kw("falls")) {
      bool rises = is_kw("rises");
      lex_.take();
      Pattern p;
      p.kind = rises ? Pattern::Kind::rises : Pattern::Kind::falls;
      p.signal = sig;
      if (is_kw("monotonically")) {
        lex_.take();
        p.monotonic = true;
      }
      expect_kw("reaching");
      p.value = parse_signed_number();
      return p;
    }
    if (is_kw("overshoots") || is_kw("undershoots")) {
      bool over = is_kw("overshoots");
      lex_.take();
      Pattern p;
      p.kind = over ? Pattern::Kind::overshoots : Pattern::Kind::undershoots;
      p.signal = sig;
      if (is_kw("monotonically")) {
        lex_.take();
        p.monotonic = true;
      }
      p.target = parse_signed_number();
      expect_kw("by");
      p.margin = parse_signed_number();
      return p;
    }
    fail("expected becomes/rises/falls/overshoots/undershoots after signal");
  }

  Pattern parse_if_then() {
    expect_kw("if");
    Pattern p;
    p.kind = Pattern::Kind::if_then;
    p.trigger = std::make_shared<Pattern>(parse_pattern());
    expect_kw("then");
    if (is_kw("within")) {
      lex_.take();
      if (is_kw("exactly")) {
        lex_.take();
        p.within = WithinBound::exactly;
      } else if (is_kw("at")) {
        lex_.take();
        if (is_kw("most")) {
          lex_.take();
          p.within = WithinBound::at_most;
        } else if (is_kw("least")) {
          lex_.take();
          p.within = WithinBound::at_least;
        } else {
          fail("expected 'most' or 'least' after 'at'");
        }
      } else {
        fail("expected exactly/at most/at least after 'within'");
      }
      p.within_bound = parse_signed_number();
    }
    p.response = std::make_shared<Pattern>(parse_pattern());
    return p;
  }

  // exists spike in s [with [width ~ v] [amplitude ~ v]]
  // exist oscillation in s [with [p2pAmp ~ v] [period ~ v]]
  // 'exists'/'exist' are interchangeable; the optional constraints may appear
  // in either order, each optionally re-introduced by 'with'.
  Pattern parse_shape_pattern() {
    lex_.take();  // exists | exist
    Pattern p;
    bool spike = is_kw("spike");
    if (!spike && !is_kw("oscillation")) fail("expected 'spike' or 'oscillation'");
    lex_.take();
    p.kind = spike ? Pattern::Kind::spike : Pattern::Kind::oscillation;
    expect_kw("in");
    p.signal = parse_expr();
    if (!is_kw("with")) return p;
    lex_.take();
    bool any = false;
    while (true) {
      if (is_kw("with")) lex_.take();
      if (spike && is_kw("width")) {
        lex_.take();
        if (p.width) fail("duplicate width constraint");
        p.width = parse_constraint();
      } else if (spike && is_kw("amplitude")) {
        lex_.take();
        if (p.amplitude) fail("duplicate amplitude constraint");
        p.amplitude = parse_constraint();
      } else if (!spike && is_kw("p2pAmp")) {
        lex_.take();
        if (p.p2p_amp) fail("duplicate p2pAmp constraint");
        p.p2p_amp = parse_constraint();
      } else if (!spike && is_kw("period")) {
        lex_.take();
        if (p.period) fail("duplicate period constraint");
        p.period = parse_constraint();
      } else {
        break;
      }
      any = true;
    }
    if (!any) fail("expected a constraint after 'with'");
    return p;
  }

  ValueConstraint parse_constraint() {
    ValueConstraint c;
    c.op = parse_cmp_op();
    c.value = parse_signed_number();
    return c;
  }

  CmpOp parse_cmp_op() {
    switch (lex_.peek().kind) {
      case Tok::lt: lex_.take(); return CmpOp::lt;
      case Tok::gt: lex_.take(); return CmpOp::gt;
      case Tok::eq: lex_.take(); return CmpOp::eq;
      case Tok::neq: lex_.take(); return CmpOp::neq;
      case Tok::le: lex_.take(); return CmpOp::le;
      case Tok::ge: lex_.take(); return CmpOp::ge;
      default: fail("expected comparison operator");
    }
  }

  // Conditions chain greedily with and/or. When the text after the operator
  // does not parse as a comparison (it starts the next atom, or a pattern of
  // an event scope), the chain ends and the operator keeps its structural
  // meaning. Disambiguation is by trial parse with backtracking: no pattern
  // starts with "expr cmp-op number", so a successful trial is never stolen.
  Condition parse_condition() {
    Condition left = parse_condition_cmp();
    while (is_kw("and") || is_kw("or")) {
      bool conj = is_kw("and");
      Lexer snapshot = lex_;
      lex_.take();
      Condition right;
      try {
        right = parse_condition_cmp();
      } catch (const ParseError&) {
        lex_ = snapshot;
        break;
      }
      auto l = std::make_shared<Condition>(std::move(left));
      auto r = std::make_shared<Condition>(std::move(right));
      left = conj ? *Condition::conj(l, r) : *Condition::disj(l, r);
    }
    return left;
  }

  Condition parse_condition_cmp() {
    SignalExprPtr s = parse_expr();
    CmpOp op = parse_cmp_op();
    double v = parse_signed_number();
    return *Condition::cmp(s, op, v);
  }

  SignalExprPtr parse_expr() { return parse_additive(); }

  SignalExprPtr parse_additive() {
    SignalExprPtr left = parse_multiplicative();
    while (lex_.peek().kind == Tok::plus || lex_.peek().kind == Tok::minus) {
      char op = lex_.take().kind == Tok::plus ? '+' : '-';
      left = SignalExpr::binary(op, left, parse_multiplicative());
    }
    return left;
  }

  SignalExprPtr parse_multiplicative() {
    SignalExprPtr left = parse_primary();
    while (lex_.peek().kind == Tok::star || lex_.peek().kind == Tok::slash) {
      char op = lex_.take().kind == Tok::star ? '*' : '/';
      SignalExprPtr right = parse_primary();
      if (op == '/' && right->kind == SignalExpr::Kind::constant &&
          right->value == 0)
        fail("division by literal zero");
      left = SignalExpr::binary(op, left, right);
    }
    return left;
  }

  SignalExprPtr parse_primary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::ident: return SignalExpr::variable(lex_.take().text);
      case Tok::number: return SignalExpr::constant(lex_.take().number);
      case Tok::minus: {
        lex_.take();
        SignalExprPtr inner = parse_primary();
        if (inner->kind == SignalExpr::Kind::constant)
          return SignalExpr::constant(-inner->value);
        return SignalExpr::binary('-', SignalExpr::constant(0), inner);
      }
      case Tok::lparen: {
        lex_.take();
        SignalExprPtr e = parse_expr();
        if (lex_.peek().kind != Tok::rparen) fail("expected ')'");
        lex_.take();
        return e;
      }
      case Tok::keyword:
        fail("unexpected keyword '" + t.text + "' in signal expression");
      default:
        fail("expected a signal expression");
    }
  }

  Lexer lex_;
};

}  // namespace

Property parse_property(const std::string& text) {
  Parser parser(text);
  return parser.parse();
}

Property load_property_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open property file '" + path + "'", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_property(buf.str());
}

}  // namespace sigdiag
