// Copyright 2026 The ldm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldm/syntax.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <unordered_set>

namespace ldm {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { End, Ident, Number, Ket, Sym };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

const std::unordered_set<std::string> kKeywords = {"letcase", "letcase*", "in",  "sum",   "pair",
                                                   "meas",    "U",        "rho", "bell00"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.span.line = line_;
      t.span.col = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        close(t);
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (ident_start(c)) {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() && ident_char(src_[pos_])) t.text += advance();
        if (t.text == "letcase" && peek() == '*') t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Number;
        lex_number(t.text);
      } else if (c == '|') {
        t.kind = Tok::Ket;
        advance();
        while (pos_ < src_.size() && src_[pos_] != '>' && src_[pos_] != '\n') t.text += advance();
        if (peek() != '>') fail(t.span, "unterminated ket");
        advance();
        if (t.text.empty()) fail(t.span, "empty ket");
        if (t.text != "+" && t.text != "-" && t.text.find_first_not_of("01") != std::string::npos)
          fail(t.span, "ket label must be bits, + or -: |" + t.text + ">");
      } else if (c == '>' && peek(1) == '<') {
        t.kind = Tok::Sym;
        t.text = "><";
        advance();
        advance();
      } else if (std::string_view("\\.()[]{};,:=*/+-").find(c) != std::string_view::npos) {
        t.kind = Tok::Sym;
        t.text = std::string(1, advance());
      } else {
        fail(t.span, std::string("unexpected character '") + c + "'");
      }
      close(t);
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] static void fail(SourceSpan s, const std::string& msg) { throw ParseError(s, msg); }

  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void close(Token& t) const {
    t.span.end_line = line_;
    t.span.end_col = col_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_[pos_] == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_number(std::string& out) {
    auto digits = [&] {
      while (std::isdigit(static_cast<unsigned char>(peek()))) out += advance();
    };
    digits();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      out += advance();
      digits();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '-' || peek(1) == '+') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      out += advance();
      if (peek() == '-' || peek() == '+') out += advance();
      digits();
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

SourceSpan join(SourceSpan a, SourceSpan b) {
  a.end_line = b.end_line;
  a.end_col = b.end_col;
  return a;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Calculus c) : toks_(std::move(toks)), calc_(c) {}

  TermPtr program() {
    TermPtr t = expr();
    if (cur().kind != Tok::End) fail("unexpected '" + cur().text + "' after term");
    return t;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& next() const { return toks_[std::min(pos_ + 1, toks_.size() - 1)]; }

  bool is_sym(std::string_view s) const { return cur().kind == Tok::Sym && cur().text == s; }
  bool is_word(std::string_view s) const { return cur().kind == Tok::Ident && cur().text == s; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(cur().span, msg); }
  [[noreturn]] static void fail_at(SourceSpan s, const std::string& msg, bool wrong = false) {
    throw ParseError(s, msg, wrong);
  }

  Token take() { return toks_[pos_++]; }

  Token expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "'" + found());
    return take();
  }

  std::string found() const {
    if (cur().kind == Tok::End) return " but reached end of input";
    return " but found '" + (cur().kind == Tok::Ket ? "|" + cur().text + ">" : cur().text) + "'";
  }

  std::string ident() {
    if (cur().kind != Tok::Ident || kKeywords.count(cur().text)) fail("expected a variable name" + found());
    return take().text;
  }

  unsigned natural() {
    if (cur().kind != Tok::Number || cur().text.find_first_not_of("0123456789") != std::string::npos)
      fail("expected a natural number" + found());
    const Token t = take();
    unsigned long v = std::strtoul(t.text.c_str(), nullptr, 10);
    if (v > 64) fail_at(t.span, "number " + t.text + " too large here");
    return static_cast<unsigned>(v);
  }

  // expr := '\' x '.' expr | tensor
  TermPtr expr() {
    if (is_sym("\\")) return lambda();
    TermPtr t = application();
    while (is_sym("><")) {
      take();
      TermPtr r = application();
      t = tensor(t, r, join(t->span, r->span));
    }
    return t;
  }

  TermPtr lambda() {
    const SourceSpan start = expect_sym("\\").span;
    std::string x = ident();
    expect_sym(".");
    TermPtr body = expr();
    return lam(std::move(x), body, join(start, body->span));
  }

  bool starts_unary() const {
    switch (cur().kind) {
      case Tok::Ket: return true;
      case Tok::Ident: return cur().text != "in";
      case Tok::Sym: return cur().text == "(";
      default: return false;
    }
  }

  // app := unary { unary } [ lambda ]
  TermPtr application() {
    TermPtr t = unary();
    for (;;) {
      if (is_sym("\\")) {
        TermPtr a = lambda();
        return app(t, a, join(t->span, a->span));
      }
      if (!starts_unary()) return t;
      TermPtr a = unary();
      t = app(t, a, join(t->span, a->span));
    }
  }

  TermPtr unary() {
    if (is_word("U") && next().kind == Tok::Sym && next().text == "[") {
      const SourceSpan start = take().span;
      take();
      GatePtr g = gate_expr();
      expect_sym("]");
      TermPtr a = unary();
      return unitary(g, a, join(start, a->span));
    }
    if (is_word("meas")) {
      const SourceSpan start = take().span;
      expect_sym("[");
      unsigned m = natural();
      expect_sym("]");
      TermPtr a = unary();
      return meas(m, a, join(start, a->span));
    }
    return atom();
  }

  TermPtr atom() {
    const Token& t = cur();
    if (t.kind == Tok::Sym && t.text == "(") {
      const SourceSpan start = take().span;
      TermPtr inner = expr();
      const SourceSpan end = expect_sym(")").span;
      auto copy = std::make_shared<Term>(*inner);
      copy->span = join(start, end);
      return copy;
    }
    if (t.kind == Tok::Sym && t.text == "\\") return lambda();
    if (t.kind == Tok::Ket || is_word("bell00") || is_word("rho")) {
      const SourceSpan start = cur().span;
      DensityMatrix d = density();
      return rho(std::move(d), join(start, toks_[pos_ - 1].span));
    }
    if (is_word("pair")) return pair_literal();
    if (is_word("letcase") || is_word("letcase*")) return letcase_expr();
    if (is_word("sum")) return sum_expr();
    if (t.kind == Tok::Ident) {
      if (kKeywords.count(t.text)) fail("unexpected keyword '" + t.text + "'");
      Token v = take();
      return var(v.text, v.span);
    }
    fail("expected a term" + found());
  }

  DensityMatrix density() {
    if (cur().kind == Tok::Ket) {
      const std::string label = take().text;
      if (label == "+") return DensityMatrix::plus();
      if (label == "-") return DensityMatrix::minus();
      return DensityMatrix::basis(label);
    }
    if (is_word("bell00")) {
      take();
      return DensityMatrix::bell00();
    }
    if (!is_word("rho")) fail("expected a density (ket, bell00 or rho literal)" + found());
    const SourceSpan start = take().span;
    expect_sym("[");
    const unsigned n = natural();
    if (n > 10) fail_at(start, "density literal with more than 10 qubits");
    expect_sym("]");
    const std::size_t dim = std::size_t{1} << n;
    ComplexMatrix m = matrix_rows(dim);
    try {
      return validate_density(m);
    } catch (const DensityError& e) {
      fail_at(join(start, toks_[pos_ - 1].span), e.what());
    }
  }

  // '{' row { ';' row } '}' with exactly dim rows of dim entries.
  ComplexMatrix matrix_rows(std::size_t dim) {
    const SourceSpan start = expect_sym("{").span;
    std::vector<Complex> entries;
    std::size_t rows = 0;
    for (;;) {
      std::size_t cols = 0;
      for (;;) {
        entries.push_back(complex_number());
        ++cols;
        if (!is_sym(",")) break;
        take();
      }
      if (cols != dim) fail_at(start, "row " + std::to_string(rows + 1) + " has " + std::to_string(cols) +
                                          " entries, expected " + std::to_string(dim));
      ++rows;
      if (!is_sym(";")) break;
      take();
    }
    expect_sym("}");
    if (rows != dim) fail_at(start, "matrix has " + std::to_string(rows) + " rows, expected " + std::to_string(dim));
    return ComplexMatrix(dim, dim, std::move(entries));
  }

  // complex := part { ('+'|'-') part }, part := real ['i']
  Complex complex_number() {
    Complex z = complex_part(false);
    while (is_sym("+") || is_sym("-")) {
      const bool neg = take().text == "-";
      z += complex_part(neg);
    }
    return z;
  }

  Complex complex_part(bool negate) {
    double r = real_expr();
    if (negate) r = -r;
    if (is_word("i")) {
      take();
      return {0.0, r};
    }
    return {r, 0.0};
  }

  // real := ['-'] factor { ('*'|'/') factor }
  double real_expr() {
    bool neg = false;
    if (is_sym("-")) {
      take();
      neg = true;
    }
    double v = real_factor();
    while (is_sym("*") || is_sym("/")) {
      const bool div = take().text == "/";
      const SourceSpan at = cur().span;
      const double f = real_factor();
      if (div && f == 0.0) fail_at(at, "division by zero");
      v = div ? v / f : v * f;
    }
    return neg ? -v : v;
  }

  double real_factor() {
    if (cur().kind == Tok::Number) return std::strtod(take().text.c_str(), nullptr);
    if (is_word("sqrt")) {
      take();
      expect_sym("(");
      const SourceSpan at = cur().span;
      const double v = real_expr();
      expect_sym(")");
      if (v < 0) fail_at(at, "sqrt of a negative number");
      return std::sqrt(v);
    }
    if (is_sym("(")) {
      take();
      const double v = real_expr();
      expect_sym(")");
      return v;
    }
    fail("expected a number" + found());
  }

  // gexpr := gterm { '*' gterm }
  GatePtr gate_expr() {
    GatePtr g = gate_term();
    while (is_sym("*")) {
      take();
      g = GateExpr::tensor(g, gate_term());
    }
    return g;
  }

  GatePtr gate_term() {
    if (is_sym("(")) {
      take();
      GatePtr g = gate_expr();
      expect_sym(")");
      return g;
    }
    if (cur().kind != Tok::Ident) fail("expected a gate" + found());
    const Token t = take();
    if (t.text == "I") {
      if (!is_sym("(")) return GateExpr::identity(1);
      take();
      const unsigned n = natural();
      expect_sym(")");
      if (n > 10) fail_at(t.span, "identity gate wider than 10 qubits");
      return GateExpr::identity(n);
    }
    if (t.text == "gate") {
      expect_sym("[");
      const unsigned m = natural();
      if (m > 10) fail_at(t.span, "gate literal wider than 10 qubits");
      expect_sym("]");
      ComplexMatrix mat = matrix_rows(std::size_t{1} << m);
      try {
        return GateExpr::literal(mat);
      } catch (const DensityError& e) {
        fail_at(join(t.span, toks_[pos_ - 1].span), e.what());
      }
    }
    static const std::array<const char*, 5> names = {"X", "Y", "Z", "H", "CNOT"};
    for (const char* n : names)
      if (t.text == n) return GateExpr::named(n);
    fail_at(t.span, "unknown gate '" + t.text + "'");
  }

  TermPtr pair_literal() {
    const SourceSpan start = take().span;
    if (calc_ == Calculus::Mixed) fail_at(start, "pair literals belong to the prob calculus", true);
    expect_sym("(");
    const unsigned b = natural();
    expect_sym(",");
    const unsigned m = natural();
    expect_sym(",");
    DensityMatrix d = density();
    const SourceSpan end = expect_sym(")").span;
    try {
      return pair(b, m, std::move(d), join(start, end));
    } catch (const Error& e) {
      fail_at(join(start, end), e.what());
    }
  }

  TermPtr letcase_expr() {
    const Token kw = take();
    const bool star = kw.text == "letcase*";
    if (star && calc_ == Calculus::Prob) fail_at(kw.span, "letcase* belongs to the mixed calculus", true);
    if (!star && calc_ == Calculus::Mixed) fail_at(kw.span, "letcase belongs to the prob calculus; use letcase*", true);
    std::string x = ident();
    expect_sym("=");
    TermPtr scrut = expr();
    if (!is_word("in")) fail("expected 'in'" + found());
    take();
    expect_sym("{");
    std::vector<TermPtr> branches;
    for (;;) {
      branches.push_back(expr());
      if (!is_sym(";")) break;
      take();
    }
    const SourceSpan end = expect_sym("}").span;
    try {
      return letcase(std::move(x), scrut, std::move(branches), star, join(kw.span, end));
    } catch (const Error& e) {
      fail_at(join(kw.span, end), e.what());
    }
  }

  TermPtr sum_expr() {
    const SourceSpan start = take().span;
    if (calc_ == Calculus::Prob) fail_at(start, "sums belong to the mixed calculus", true);
    expect_sym("{");
    std::vector<double> weights;
    std::vector<TermPtr> addends;
    for (;;) {
      weights.push_back(real_expr());
      expect_sym(":");
      addends.push_back(expr());
      if (!is_sym(";")) break;
      take();
    }
    const SourceSpan end = expect_sym("}").span;
    try {
      return sum(std::move(weights), std::move(addends), join(start, end));
    } catch (const Error& e) {
      fail_at(join(start, end), e.what());
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Calculus calc_;
};

// ---------------------------------------------------------------------------
// Printer

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool is_perfect_square(int k) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(k))));
  return r * r == k;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); }

bool matches(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).max_abs() <= 1e-13;
}

std::string print_matrix_rows(const ComplexMatrix& m) {
  std::string out = "{ ";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) out += " ; ";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += print_complex(m(r, c));
    }
  }
  return out + " }";
}

void print_rec(const Term& t, int level, std::string& out) {
  auto open = [&](int needed) {
    if (level > needed) out += "(";
  };
  auto close = [&](int needed) {
    if (level > needed) out += ")";
  };
  switch (t.kind) {
    case TermKind::Var:
      out += t.name;
      return;
    case TermKind::Lam:
      open(0);
      out += "\\" + t.name + ". ";
      print_rec(*t.body(), 0, out);
      close(0);
      return;
    case TermKind::App:
      open(2);
      print_rec(*t.fun(), 2, out);
      out += " ";
      print_rec(*t.arg(), 3, out);
      close(2);
      return;
    case TermKind::Tensor:
      open(1);
      print_rec(*t.left(), 1, out);
      out += " >< ";
      print_rec(*t.right(), 2, out);
      close(1);
      return;
    case TermKind::Unitary:
      open(3);
      out += "U[" + print_gate(t.gate) + "] ";
      print_rec(*t.arg(), 3, out);
      close(3);
      return;
    case TermKind::Meas:
      open(3);
      out += "meas[" + std::to_string(t.m) + "] ";
      print_rec(*t.arg(), 3, out);
      close(3);
      return;
    case TermKind::Rho:
      out += print_density(*t.rho);
      return;
    case TermKind::Pair:
      out += "pair(" + std::to_string(t.b) + ", " + std::to_string(t.m) + ", " + print_density(*t.rho) + ")";
      return;
    case TermKind::LetCase:
      out += t.star ? "letcase* " : "letcase ";
      out += t.name + " = ";
      print_rec(*t.scrutinee(), 0, out);
      out += " in { ";
      for (std::size_t i = 0; i < t.branch_count(); ++i) {
        if (i) out += " ; ";
        print_rec(*t.branch(i), 0, out);
      }
      out += " }";
      return;
    case TermKind::Sum:
      out += "sum { ";
      for (std::size_t i = 0; i < t.kids.size(); ++i) {
        if (i) out += " ; ";
        out += print_real(t.weights[i]) + ": ";
        print_rec(*t.kids[i], 0, out);
      }
      out += " }";
      return;
  }
}

}  // namespace

TermPtr parse(std::string_view source, Calculus calculus) {
  Parser p(Lexer(source).run(), calculus);
  return p.program();
}

std::optional<Calculus> detect_calculus(std::string_view source) {
  std::size_t pos = 0;
  while (pos < source.size()) {
    std::size_t end = source.find('\n', pos);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(pos, end - pos);
    const std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line.substr(first).rfind("#calculus:", 0) == 0) {
      std::string_view v = line.substr(first + 10);
      const std::size_t a = v.find_first_not_of(" \t\r");
      const std::size_t b = v.find_last_not_of(" \t\r");
      if (a != std::string_view::npos) v = v.substr(a, b - a + 1);
      if (v == "prob") return Calculus::Prob;
      if (v == "mixed") return Calculus::Mixed;
    }
    pos = end + 1;
  }
  return std::nullopt;
}

std::string print(const TermPtr& t) {
  std::string out;
  print_rec(*t, 0, out);
  return out;
}

std::string print_gate(const GatePtr& g) {
  switch (g->kind) {
    case GateExpr::Kind::Named: return g->name;
    case GateExpr::Kind::Identity: return "I(" + std::to_string(g->width) + ")";
    case GateExpr::Kind::Literal:
      return "gate[" + std::to_string(g->arity()) + "]" + print_matrix_rows(g->op.matrix());
    case GateExpr::Kind::Tensor: {
      std::string r = print_gate(g->right);
      if (g->right->kind == GateExpr::Kind::Tensor) r = "(" + r + ")";
      return print_gate(g->left) + "*" + r;
    }
  }
  return "?";
}

std::string print_density(const DensityMatrix& d) {
  const ComplexMatrix& m = d.matrix();
  const unsigned n = d.qubits();
  if (n >= 1) {
    for (std::size_t i = 0; i < d.dim(); ++i) {
      if (std::abs(m(i, i) - 1.0) > 1e-13) continue;
      std::string bits;
      for (unsigned q = 0; q < n; ++q) bits += ((i >> (n - 1 - q)) & 1U) ? '1' : '0';
      if (matches(m, DensityMatrix::basis(bits).matrix())) return "|" + bits + ">";
      break;
    }
  }
  if (n == 1 && matches(m, DensityMatrix::plus().matrix())) return "|+>";
  if (n == 1 && matches(m, DensityMatrix::minus().matrix())) return "|->";
  if (n == 2 && matches(m, DensityMatrix::bell00().matrix())) return "bell00";
  return "rho[" + std::to_string(n) + "]" + print_matrix_rows(m);
}

std::string print_real(double x) {
  if (x == 0.0) return "0";
  if (!std::isfinite(x)) return shortest(x);
  const std::string sign = x < 0 ? "-" : "";
  const double a = std::abs(x);
  for (int q = 1; q <= 64; ++q) {
    const double p = std::round(a * q);
    if (p > 0 && p < 1e6 && near(a, p / q)) {
      const std::string num = shortest(p);
      return sign + (q == 1 ? num : num + "/" + std::to_string(q));
    }
  }
  for (int q = 1; q <= 64; ++q) {
    const double k = std::round(a * a * q * q);
    if (k < 2 || k > 1000 || is_perfect_square(static_cast<int>(k))) continue;
    if (near(a, std::sqrt(k) / q)) {
      const std::string root = "sqrt(" + std::to_string(static_cast<int>(k)) + ")";
      return sign + (q == 1 ? root : root + "/" + std::to_string(q));
    }
  }
  return shortest(x);
}

std::string print_complex(Complex z) {
  if (z.imag() == 0.0) return print_real(z.real());
  const std::string im = print_real(std::abs(z.imag())) + "i";
  if (z.real() == 0.0) return (z.imag() < 0 ? "-" : "") + im;
  return print_real(z.real()) + (z.imag() < 0 ? "-" : "+") + im;
}

}  // namespace ldm
