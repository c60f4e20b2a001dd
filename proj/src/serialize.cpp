#include "merodiff/serialize.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace merodiff {

namespace {

void append_real(std::string& out, const BigReal& x) {
  std::string s = x.to_string();
  out += s;
}

}  // namespace

std::string complex_to_text(const BigComplex& z) {
  std::string out;
  bool re_zero = z.re == BigReal(0.0);
  bool im_zero = z.im == BigReal(0.0);
  if (im_zero) {
    append_real(out, z.re);
    return out;
  }
  if (re_zero) {
    append_real(out, z.im);
    out += 'i';
    return out;
  }
  append_real(out, z.re);
  std::string im = z.im.to_string();
  if (!im.empty() && im[0] == '-') {
    out += im;
  } else {
    out += '+';
    out += im;
  }
  out += 'i';
  return out;
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& str) : s(str) {}

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::ConfigError,
         "expression parse error at offset " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) error(std::string("expected '") + c + "'");
  }

  std::string token() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' &&
           s[pos] != ')')
      ++pos;
    if (pos == start) error("expected token");
    return s.substr(start, pos - start);
  }

  ExprPtr expr();
};

// Scan one decimal float starting at `i` in `t`; returns one-past-the-end.
size_t scan_float(const std::string& t, size_t i) {
  size_t start = i;
  if (i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
  size_t digits = 0;
  while (i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) || t[i] == '.')) {
    if (t[i] != '.') ++digits;
    ++i;
  }
  if (digits == 0) return start;
  if (i < t.size() && (t[i] == 'e' || t[i] == 'E')) {
    size_t j = i + 1;
    if (j < t.size() && (t[j] == '+' || t[j] == '-')) ++j;
    size_t ed = j;
    while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
    if (j > ed) i = j;
  }
  return i;
}

BigReal parse_real_token(const std::string& t) {
  // Parse at a precision covering the printed digits so round trips are
  // lossless at the stored precision.
  size_t digits = 0;
  for (char c : t)
    if (std::isdigit(static_cast<unsigned char>(c))) ++digits;
  mpfr_prec_t bits = static_cast<mpfr_prec_t>(std::ceil(3.3219280948873626 * static_cast<double>(digits))) + 8;
  if (bits < 64) bits = 64;
  PrecisionGuard guard(std::max(bits, working_precision()));
  return BigReal::from_string(t);
}

}  // namespace

BigComplex complex_from_text(const std::string& text) {
  size_t end1 = scan_float(text, 0);
  if (end1 == 0) fail(ErrorCode::ConfigError, "bad complex literal: " + text);
  std::string first = text.substr(0, end1);
  if (end1 == text.size()) {
    return {parse_real_token(first), BigReal(0.0)};
  }
  if (text[end1] == 'i' && end1 + 1 == text.size()) {
    return {BigReal(0.0), parse_real_token(first)};
  }
  size_t end2 = scan_float(text, end1);
  if (end2 == end1 || end2 + 1 != text.size() || text[end2] != 'i')
    fail(ErrorCode::ConfigError, "bad complex literal: " + text);
  return {parse_real_token(first), parse_real_token(text.substr(end1, end2 - end1))};
}

namespace {

ExprPtr Parser::expr() {
  expect('(');
  std::string tag = token();
  if (tag == "const") {
    BigComplex c = complex_from_text(token());
    expect(')');
    return make_const(c);
  }
  if (tag == "var") {
    expect(')');
    return make_var();
  }
  if (tag == "mono") {
    long k = std::stol(token());
    expect(')');
    return make_monomial(k);
  }
  if (tag == "sum" || tag == "prod") {
    std::vector<ExprPtr> kids;
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == ')') break;
      kids.push_back(expr());
    }
    expect(')');
    return tag == "sum" ? make_sum(std::move(kids)) : make_product(std::move(kids));
  }
  if (tag == "quot") {
    ExprPtr n = expr();
    ExprPtr d = expr();
    expect(')');
    return make_quotient(std::move(n), std::move(d));
  }
  if (tag == "shift") {
    ExprPtr child = expr();
    BigComplex c = complex_from_text(token());
    expect(')');
    return make_shift(std::move(child), c);
  }
  if (tag == "facprod") {
    std::vector<BigComplex> as;
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == ')') break;
      as.push_back(complex_from_text(token()));
    }
    expect(')');
    return make_factor_product(std::move(as));
  }
  if (tag == "pfrac") {
    std::vector<std::pair<BigComplex, BigComplex>> terms;
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == ')') break;
      expect('(');
      BigComplex c = complex_from_text(token());
      BigComplex p = complex_from_text(token());
      expect(')');
      terms.emplace_back(std::move(c), std::move(p));
    }
    expect(')');
    return make_partial_fractions(std::move(terms));
  }
  error("unknown node tag '" + tag + "'");
}

void print_expr(std::string& out, const Expr& e) {
  switch (e.kind) {
    case NodeKind::Const:
      out += "(const ";
      out += complex_to_text(e.cval);
      out += ')';
      return;
    case NodeKind::Var:
      out += "(var)";
      return;
    case NodeKind::Monomial:
      out += "(mono " + std::to_string(e.power) + ")";
      return;
    case NodeKind::Sum:
    case NodeKind::Product:
      out += e.kind == NodeKind::Sum ? "(sum" : "(prod";
      for (const auto& k : e.kids) {
        out += ' ';
        print_expr(out, *k);
      }
      out += ')';
      return;
    case NodeKind::Quotient:
      out += "(quot ";
      print_expr(out, *e.kids[0]);
      out += ' ';
      print_expr(out, *e.kids[1]);
      out += ')';
      return;
    case NodeKind::Shift:
      out += "(shift ";
      print_expr(out, *e.kids[0]);
      out += ' ';
      out += complex_to_text(e.cval);
      out += ')';
      return;
    case NodeKind::FactorProduct:
      out += "(facprod";
      for (const auto& a : e.factors) {
        out += ' ';
        out += complex_to_text(a);
      }
      out += ')';
      return;
    case NodeKind::PartialFractions:
      out += "(pfrac";
      for (const auto& t : e.pf) {
        out += " (";
        out += complex_to_text(t.coeff);
        out += ' ';
        out += complex_to_text(t.pole);
        out += ')';
      }
      out += ')';
      return;
  }
}

}  // namespace

std::string expr_to_text(const ExprPtr& e) {
  std::string out;
  print_expr(out, *e);
  return out;
}

ExprPtr expr_from_text(const std::string& text) {
  Parser p(text);
  ExprPtr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.error("trailing characters");
  return e;
}

}  // namespace merodiff
