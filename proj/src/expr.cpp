#include "weil/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

namespace weil {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Expr::Node n) {
  return std::make_shared<const Expr::Node>(std::move(n));
}

}  // namespace

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::Sin: return "sin";
    case FuncKind::Cos: return "cos";
    case FuncKind::Tan: return "tan";
    case FuncKind::Exp: return "exp";
    case FuncKind::Log: return "log";
    case FuncKind::Sqrt: return "sqrt";
  }
  return "?";
}

Expr::Expr() : node_(make_node({ExprKind::Const, Rational(0)})) {}

Expr Expr::constant(Rational v) {
  return Expr(make_node({ExprKind::Const, std::move(v)}));
}

Expr Expr::integer(long v) { return constant(Rational(v)); }

Expr Expr::var(std::string name) {
  Node n{ExprKind::Var};
  n.name = std::move(name);
  return Expr(make_node(std::move(n)));
}

Expr Expr::apply(FuncKind f, Expr arg) {
  Node n{ExprKind::Func};
  n.func = f;
  n.a = arg.node_;
  return Expr(make_node(std::move(n)));
}

Expr Expr::operator-() const {
  Node n{ExprKind::Neg};
  n.a = node_;
  return Expr(make_node(std::move(n)));
}

Expr Expr::pow(int exponent) const {
  if (exponent > 64 || exponent < -64)
    throw InputError("integer exponent out of range (|e| <= 64)");
  Node n{ExprKind::IntPow};
  n.exponent = exponent;
  n.a = node_;
  return Expr(make_node(std::move(n)));
}

Expr operator+(const Expr& a, const Expr& b) {
  Expr::Node n{ExprKind::Add};
  n.a = std::make_shared<const Expr::Node>(*a.raw());
  n.b = std::make_shared<const Expr::Node>(*b.raw());
  return Expr(make_node(std::move(n)));
}

Expr operator-(const Expr& a, const Expr& b) {
  Expr::Node n{ExprKind::Sub};
  n.a = std::make_shared<const Expr::Node>(*a.raw());
  n.b = std::make_shared<const Expr::Node>(*b.raw());
  return Expr(make_node(std::move(n)));
}

Expr operator*(const Expr& a, const Expr& b) {
  Expr::Node n{ExprKind::Mul};
  n.a = std::make_shared<const Expr::Node>(*a.raw());
  n.b = std::make_shared<const Expr::Node>(*b.raw());
  return Expr(make_node(std::move(n)));
}

Expr operator/(const Expr& a, const Expr& b) {
  Expr::Node n{ExprKind::Div};
  n.a = std::make_shared<const Expr::Node>(*a.raw());
  n.b = std::make_shared<const Expr::Node>(*b.raw());
  return Expr(make_node(std::move(n)));
}

bool Expr::same(const Expr& other) const {
  const Node* x = node_.get();
  const Node* y = other.node_.get();
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case ExprKind::Const: return x->value == y->value;
    case ExprKind::Var: return x->name == y->name;
    case ExprKind::Neg:
    case ExprKind::Func:
      if (x->kind == ExprKind::Func && x->func != y->func) return false;
      return Expr(x->a).same(Expr(y->a));
    case ExprKind::IntPow:
      return x->exponent == y->exponent && Expr(x->a).same(Expr(y->a));
    default:
      return Expr(x->a).same(Expr(y->a)) && Expr(x->b).same(Expr(y->b));
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Precedence: Add/Sub 1, Mul/Div 2, unary minus 3, IntPow 4, atoms 5.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::IntPow: return 4;
    case ExprKind::Const:
      return e.const_value() < 0 || denominator(e.const_value()) != 1 ? 2 : 5;
    default: return 5;
  }
}

void print(const Expr& e, std::string& out, int min_prec) {
  bool parens = precedence(e) < min_prec;
  if (parens) out += '(';
  switch (e.kind()) {
    case ExprKind::Const: out += to_string(e.const_value()); break;
    case ExprKind::Var: out += e.var_name(); break;
    case ExprKind::Neg:
      out += '-';
      print(e.left(), out, 3);
      break;
    case ExprKind::Add:
      print(e.left(), out, 1);
      out += " + ";
      print(e.right(), out, 2);
      break;
    case ExprKind::Sub:
      print(e.left(), out, 1);
      out += " - ";
      print(e.right(), out, 2);
      break;
    case ExprKind::Mul:
      print(e.left(), out, 2);
      out += '*';
      print(e.right(), out, 3);
      break;
    case ExprKind::Div:
      print(e.left(), out, 2);
      out += '/';
      print(e.right(), out, 3);
      break;
    case ExprKind::IntPow:
      print(e.left(), out, 5);
      out += '^';
      if (e.exponent() < 0) {
        out += "(";
        out += std::to_string(e.exponent());
        out += ")";
      } else {
        out += std::to_string(e.exponent());
      }
      break;
    case ExprKind::Func:
      out += func_name(e.func());
      out += '(';
      print(e.left(), out, 0);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string Expr::str() const {
  std::string out;
  print(*this, out, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw SyntaxError(pos, std::string("'") + c + "'");
  }

  Expr parse_expression() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+')) {
        e = e + parse_term();
      } else if (accept('-')) {
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (accept('*')) {
        e = e * parse_factor();
      } else if (accept('/')) {
        Expr rhs = parse_factor();
        // Rational literals arise by folding constant division.
        if (e.is_const() && rhs.is_const() && rhs.const_value() != 0) {
          e = Expr::constant(e.const_value() / rhs.const_value());
        } else {
          e = e / rhs;
        }
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    if (accept('-')) {
      Expr inner = parse_factor();
      if (inner.is_const()) return Expr::constant(-inner.const_value());
      return -inner;
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (!peek('^')) return base;
    // Chained exponents fold from the right: x^2^3 = x^(2^3).
    std::vector<long> exps;
    while (accept('^')) exps.push_back(parse_exponent());
    long e = exps.back();
    for (int i = static_cast<int>(exps.size()) - 2; i >= 0; --i) {
      long b = exps[i];
      if (e < 0 || e > 6) throw SyntaxError(pos, "smaller chained exponent");
      long r = 1;
      for (long j = 0; j < e; ++j) {
        r *= b;
        if (r > 64 || r < -64) throw SyntaxError(pos, "exponent in [-64, 64]");
      }
      e = r;
    }
    if (e > 64 || e < -64) throw SyntaxError(pos, "exponent in [-64, 64]");
    return base.pow(static_cast<int>(e));
  }

  long parse_exponent() {
    skip_ws();
    if (accept('(')) {
      long v = parse_exponent();
      expect(')');
      return v;
    }
    bool neg = accept('-');
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw SyntaxError(start, "integer exponent");
    long v = 0;
    for (std::size_t i = start; i < pos; ++i) {
      v = v * 10 + (text[i] - '0');
      if (v > 1000) throw SyntaxError(start, "exponent in [-64, 64]");
    }
    return neg ? -v : v;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos >= text.size()) throw SyntaxError(pos, "expression");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      Expr e = parse_expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw SyntaxError(pos, "number, identifier or '('");
  }

  Expr parse_number() {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    Integer ipart(text.substr(start, pos - start));
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      std::size_t fstart = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == fstart) throw SyntaxError(pos, "digits after decimal point");
      Integer num(text.substr(fstart, pos - fstart));
      Integer den = 1;
      for (std::size_t i = fstart; i < pos; ++i) den *= 10;
      return Expr::constant(Rational(ipart) + Rational(num, den));
    }
    return Expr::constant(Rational(ipart));
  }

  Expr parse_ident() {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string name = text.substr(start, pos - start);
    if (peek('(')) {
      static const std::pair<const char*, FuncKind> table[] = {
          {"sin", FuncKind::Sin}, {"cos", FuncKind::Cos},
          {"tan", FuncKind::Tan}, {"exp", FuncKind::Exp},
          {"log", FuncKind::Log}, {"sqrt", FuncKind::Sqrt}};
      for (const auto& [fname, fk] : table) {
        if (name == fname) {
          expect('(');
          Expr arg = parse_expression();
          expect(')');
          return Expr::apply(fk, arg);
        }
      }
      throw SyntaxError(start, "known function name (sin cos tan exp log sqrt)");
    }
    return Expr::var(name);
  }
};

}  // namespace

Expr parse_expr(const std::string& text) {
  Parser p(text);
  Expr e = p.parse_expression();
  p.skip_ws();
  if (p.pos != text.size()) throw SyntaxError(p.pos, "end of input");
  return e;
}

Rational parse_rational(const std::string& text) {
  Parser p(text);
  Expr e = simplify(p.parse_expression());
  p.skip_ws();
  if (p.pos != text.size() || !e.is_const())
    throw InputError("not a rational literal: " + text);
  return e.const_value();
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, const std::string& var) {
  switch (e.kind()) {
    case ExprKind::Const: return Expr();
    case ExprKind::Var:
      return e.var_name() == var ? Expr::integer(1) : Expr();
    case ExprKind::Neg: return -differentiate(e.left(), var);
    case ExprKind::Add:
      return differentiate(e.left(), var) + differentiate(e.right(), var);
    case ExprKind::Sub:
      return differentiate(e.left(), var) - differentiate(e.right(), var);
    case ExprKind::Mul:
      return differentiate(e.left(), var) * e.right() +
             e.left() * differentiate(e.right(), var);
    case ExprKind::Div:
      return (differentiate(e.left(), var) * e.right() -
              e.left() * differentiate(e.right(), var)) /
             e.right().pow(2);
    case ExprKind::IntPow: {
      int n = e.exponent();
      if (n == 0) return Expr();
      return Expr::integer(n) * e.left().pow(n - 1) *
             differentiate(e.left(), var);
    }
    case ExprKind::Func: {
      Expr a = e.left();
      Expr da = differentiate(a, var);
      switch (e.func()) {
        case FuncKind::Sin: return cos(a) * da;
        case FuncKind::Cos: return -(sin(a) * da);
        case FuncKind::Tan:
          return (Expr::integer(1) + tan(a).pow(2)) * da;
        case FuncKind::Exp: return exp(a) * da;
        case FuncKind::Log: return da / a;
        case FuncKind::Sqrt:
          return da / (Expr::integer(2) * sqrt(a));
      }
    }
  }
  return Expr();
}

// ---------------------------------------------------------------------------
// Simplification: constant folding plus commutative flattening with a
// deterministic operand order. No distribution of products over sums.

namespace {

struct Term {
  Rational coeff;
  Expr expr;  // never Const; key caches expr.str()
  std::string key;
};

Expr rebuild_product(Rational coeff, std::vector<std::pair<Expr, int>>& factors);

void flatten_product(const Expr& e, Rational& coeff,
                     std::vector<std::pair<Expr, int>>& factors, int exp);

// Splits a simplified expression into (coefficient, pure term). The
// coefficient of a product chain sits at the leftmost factor.
std::pair<Rational, Expr> split_coeff(const Expr& e) {
  if (e.is_const()) return {e.const_value(), Expr::integer(1)};
  if (e.kind() == ExprKind::Mul) {
    Expr leftmost = e;
    while (leftmost.kind() == ExprKind::Mul) leftmost = leftmost.left();
    if (leftmost.is_const()) {
      Rational c(1);
      std::vector<std::pair<Expr, int>> factors;
      flatten_product(e, c, factors, 1);
      return {c, rebuild_product(Rational(1), factors)};
    }
  }
  return {Rational(1), e};
}

Expr rebuild_sum(std::vector<Term>& terms, const Rational& constant) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.key < b.key; });
  Expr sum;
  bool first = true;
  for (auto& t : terms) {
    if (t.coeff == 0) continue;
    Expr piece = t.expr;
    if (t.coeff != 1) {
      Rational c = t.coeff;
      std::vector<std::pair<Expr, int>> factors;
      flatten_product(t.expr, c, factors, 1);
      piece = rebuild_product(std::move(c), factors);
    }
    sum = first ? piece : sum + piece;
    first = false;
  }
  if (constant != 0) {
    Expr c = Expr::constant(constant);
    sum = first ? c : sum + c;
    first = false;
  }
  return first ? Expr() : sum;
}

void flatten_sum(const Expr& e, const Rational& scale, std::vector<Term>& terms,
                 Rational& constant) {
  switch (e.kind()) {
    case ExprKind::Add:
      flatten_sum(e.left(), scale, terms, constant);
      flatten_sum(e.right(), scale, terms, constant);
      return;
    case ExprKind::Sub:
      flatten_sum(e.left(), scale, terms, constant);
      flatten_sum(e.right(), -scale, terms, constant);
      return;
    case ExprKind::Neg:
      flatten_sum(e.left(), -scale, terms, constant);
      return;
    case ExprKind::Const:
      constant += scale * e.const_value();
      return;
    default: {
      auto [c, t] = split_coeff(e);
      Term term{scale * c, t, t.str()};
      for (auto& existing : terms) {
        if (existing.key == term.key) {
          existing.coeff += term.coeff;
          return;
        }
      }
      terms.push_back(std::move(term));
      return;
    }
  }
}

void flatten_product(const Expr& e, Rational& coeff,
                     std::vector<std::pair<Expr, int>>& factors, int exp) {
  switch (e.kind()) {
    case ExprKind::Mul:
      flatten_product(e.left(), coeff, factors, exp);
      flatten_product(e.right(), coeff, factors, exp);
      return;
    case ExprKind::Neg:
      if (exp % 2 != 0) coeff = -coeff;
      flatten_product(e.left(), coeff, factors, exp);
      return;
    case ExprKind::Const: {
      Rational v = e.const_value();
      if (exp >= 0) {
        for (int i = 0; i < exp; ++i) coeff *= v;
      } else {
        for (int i = 0; i < -exp; ++i) coeff /= v;
      }
      return;
    }
    case ExprKind::IntPow: {
      long combined = static_cast<long>(e.exponent()) * exp;
      if (combined >= -64 && combined <= 64) {
        flatten_product(e.left(), coeff, factors, static_cast<int>(combined));
        return;
      }
      factors.emplace_back(e, exp);
      return;
    }
    default:
      factors.emplace_back(e, exp);
      return;
  }
}

Expr rebuild_product(Rational coeff, std::vector<std::pair<Expr, int>>& factors) {
  if (coeff == 0) return Expr();
  // Combine equal bases, then order deterministically.
  std::vector<std::pair<Expr, int>> combined;
  std::vector<std::string> keys;
  for (auto& [base, exp] : factors) {
    if (exp == 0) continue;
    std::string key = base.str();
    bool merged = false;
    for (std::size_t i = 0; i < combined.size(); ++i) {
      if (keys[i] == key) {
        combined[i].second += exp;
        merged = true;
        break;
      }
    }
    if (!merged) {
      combined.emplace_back(base, exp);
      keys.push_back(std::move(key));
    }
  }
  std::vector<std::size_t> order(combined.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  // Left-associated with the coefficient first, so chains print flat.
  Expr prod;
  bool first = true;
  if (coeff != 1) {
    prod = Expr::constant(coeff);
    first = false;
  }
  for (std::size_t i : order) {
    auto& [base, exp] = combined[i];
    if (exp == 0) continue;
    Expr piece = exp == 1 ? base : base.pow(exp);
    prod = first ? piece : prod * piece;
    first = false;
  }
  return first ? Expr::integer(1) : prod;
}

}  // namespace

Expr simplify(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Const:
    case ExprKind::Var:
      return e;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Neg: {
      Expr l = simplify(e.left());
      std::vector<Term> terms;
      Rational constant(0);
      if (e.kind() == ExprKind::Neg) {
        flatten_sum(l, Rational(-1), terms, constant);
      } else {
        Expr r = simplify(e.right());
        flatten_sum(l, Rational(1), terms, constant);
        flatten_sum(r, e.kind() == ExprKind::Sub ? Rational(-1) : Rational(1),
                    terms, constant);
      }
      return rebuild_sum(terms, constant);
    }
    case ExprKind::Mul: {
      Expr l = simplify(e.left());
      Expr r = simplify(e.right());
      if (l.is_zero() || r.is_zero()) return Expr();
      Rational coeff(1);
      std::vector<std::pair<Expr, int>> factors;
      flatten_product(l, coeff, factors, 1);
      flatten_product(r, coeff, factors, 1);
      return rebuild_product(std::move(coeff), factors);
    }
    case ExprKind::Div: {
      Expr l = simplify(e.left());
      Expr r = simplify(e.right());
      if (r.is_const()) {
        if (r.const_value() == 0) return l / r;  // left for eval to reject
        Rational coeff = Rational(1) / r.const_value();
        std::vector<std::pair<Expr, int>> factors;
        flatten_product(l, coeff, factors, 1);
        return rebuild_product(std::move(coeff), factors);
      }
      if (l.is_zero()) return Expr();
      if (l.same(r)) return Expr::integer(1);
      return l / r;
    }
    case ExprKind::IntPow: {
      Expr l = simplify(e.left());
      int n = e.exponent();
      if (n == 0) return Expr::integer(1);
      if (n == 1) return l;
      if (l.is_const() && !(l.const_value() == 0 && n < 0)) {
        Rational v(1);
        const Rational& b = l.const_value();
        for (int i = 0; i < std::abs(n); ++i) v *= b;
        return Expr::constant(n > 0 ? v : Rational(1) / v);
      }
      Rational coeff(1);
      std::vector<std::pair<Expr, int>> factors;
      flatten_product(l, coeff, factors, n);
      return rebuild_product(std::move(coeff), factors);
    }
    case ExprKind::Func: {
      Expr a = simplify(e.left());
      if (a.is_const()) {
        const Rational& v = a.const_value();
        if (v == 0) {
          switch (e.func()) {
            case FuncKind::Sin:
            case FuncKind::Tan:
            case FuncKind::Sqrt: return Expr();
            case FuncKind::Cos:
            case FuncKind::Exp: return Expr::integer(1);
            case FuncKind::Log: break;  // left for eval to reject
          }
        }
        if (v == 1) {
          if (e.func() == FuncKind::Log) return Expr();
          if (e.func() == FuncKind::Sqrt) return Expr::integer(1);
        }
      }
      return Expr::apply(e.func(), a);
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Substitution and free variables

Expr substitute(const Expr& e, const std::map<std::string, Expr>& subst) {
  switch (e.kind()) {
    case ExprKind::Const: return e;
    case ExprKind::Var: {
      auto it = subst.find(e.var_name());
      return it == subst.end() ? e : it->second;
    }
    case ExprKind::Neg: return -substitute(e.left(), subst);
    case ExprKind::Add: return substitute(e.left(), subst) + substitute(e.right(), subst);
    case ExprKind::Sub: return substitute(e.left(), subst) - substitute(e.right(), subst);
    case ExprKind::Mul: return substitute(e.left(), subst) * substitute(e.right(), subst);
    case ExprKind::Div: return substitute(e.left(), subst) / substitute(e.right(), subst);
    case ExprKind::IntPow: return substitute(e.left(), subst).pow(e.exponent());
    case ExprKind::Func: return Expr::apply(e.func(), substitute(e.left(), subst));
  }
  return e;
}

void collect_free_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case ExprKind::Const: return;
    case ExprKind::Var: out.insert(e.var_name()); return;
    case ExprKind::Neg:
    case ExprKind::IntPow:
    case ExprKind::Func:
      collect_free_vars(e.left(), out);
      return;
    default:
      collect_free_vars(e.left(), out);
      collect_free_vars(e.right(), out);
      return;
  }
}

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect_free_vars(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial normalization over analytic atoms. Used for exact zero proofs;
// bails out (nullopt) past the term cap, in which case callers fall back to
// seeded sampling.

namespace {

using Mono = std::vector<std::pair<std::string, int>>;  // sorted by key

struct PolyCtx {
  std::size_t max_terms = 50000;
  std::map<std::string, Expr> atoms;  // key -> atom expression
  bool overflow = false;
};

using Poly = std::map<Mono, Rational>;

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      int exp = a[i].second + b[j].second;
      if (exp != 0) out.emplace_back(a[i].first, exp);
      ++i;
      ++j;
    }
  }
  return out;
}

Mono mono_pow(const Mono& m, int e) {
  Mono out;
  for (const auto& [k, exp] : m)
    if (exp * e != 0) out.emplace_back(k, exp * e);
  return out;
}

void poly_add(Poly& into, const Poly& p, const Rational& scale, PolyCtx& ctx) {
  for (const auto& [m, c] : p) {
    auto it = into.find(m);
    if (it == into.end()) {
      if (into.size() >= ctx.max_terms) {
        ctx.overflow = true;
        return;
      }
      Rational v = scale * c;
      if (v != 0) into.emplace(m, std::move(v));
    } else {
      it->second += scale * c;
      if (it->second == 0) into.erase(it);
    }
  }
}

Poly poly_mul(const Poly& a, const Poly& b, PolyCtx& ctx) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      if (ctx.overflow) return out;
      Mono m = mono_mul(ma, mb);
      auto it = out.find(m);
      if (it == out.end()) {
        if (out.size() >= ctx.max_terms) {
          ctx.overflow = true;
          return out;
        }
        out.emplace(std::move(m), ca * cb);
      } else {
        it->second += ca * cb;
        if (it->second == 0) out.erase(it);
      }
    }
  }
  return out;
}

std::optional<Poly> polynomialize(const Expr& e, PolyCtx& ctx);

Expr poly_to_expr(const Poly& p, const PolyCtx& ctx) {
  Expr sum;
  bool first = true;
  for (const auto& [m, c] : p) {
    Expr term = Expr::constant(c);
    Expr prod;
    bool pfirst = true;
    for (const auto& [key, exp] : m) {
      auto it = ctx.atoms.find(key);
      Expr base = it != ctx.atoms.end() ? it->second : Expr::var(key);
      Expr piece = exp == 1 ? base : base.pow(exp);
      prod = pfirst ? piece : prod * piece;
      pfirst = false;
    }
    if (!pfirst) term = c == 1 ? prod : term * prod;
    sum = first ? term : sum + term;
    first = false;
  }
  return first ? Expr() : sum;
}

// Canonical form of a subexpression used as an atom key.
Expr canonicalize(const Expr& e, PolyCtx& ctx) {
  PolyCtx sub;
  sub.max_terms = ctx.max_terms;
  auto p = polynomialize(e, sub);
  if (p && !sub.overflow) {
    for (auto& [k, v] : sub.atoms) ctx.atoms.emplace(k, v);
    return poly_to_expr(*p, sub);
  }
  return simplify(e);
}

Poly atom_poly(const Expr& atom, int exp, PolyCtx& ctx) {
  std::string key = atom.str();
  ctx.atoms.emplace(key, atom);
  Poly p;
  p.emplace(Mono{{key, exp}}, Rational(1));
  return p;
}

// Inverts a single-term polynomial; nullopt when p has several terms.
std::optional<Poly> poly_invert(const Poly& p) {
  if (p.size() != 1) return std::nullopt;
  const auto& [m, c] = *p.begin();
  if (c == 0) return std::nullopt;
  Poly out;
  out.emplace(mono_pow(m, -1), Rational(1) / c);
  return out;
}

Poly poly_pow(const Poly& p, int n, PolyCtx& ctx) {
  Poly out;
  out.emplace(Mono{}, Rational(1));
  for (int i = 0; i < n && !ctx.overflow; ++i) out = poly_mul(out, p, ctx);
  return out;
}

std::optional<Poly> polynomialize(const Expr& e, PolyCtx& ctx) {
  if (ctx.overflow) return std::nullopt;
  switch (e.kind()) {
    case ExprKind::Const: {
      Poly p;
      if (e.const_value() != 0) p.emplace(Mono{}, e.const_value());
      return p;
    }
    case ExprKind::Var: {
      Poly p;
      p.emplace(Mono{{e.var_name(), 1}}, Rational(1));
      return p;
    }
    case ExprKind::Neg: {
      auto a = polynomialize(e.left(), ctx);
      if (!a) return std::nullopt;
      Poly out;
      poly_add(out, *a, Rational(-1), ctx);
      return ctx.overflow ? std::nullopt : std::optional<Poly>(out);
    }
    case ExprKind::Add:
    case ExprKind::Sub: {
      auto a = polynomialize(e.left(), ctx);
      auto b = polynomialize(e.right(), ctx);
      if (!a || !b) return std::nullopt;
      Poly out = *a;
      poly_add(out, *b, e.kind() == ExprKind::Sub ? Rational(-1) : Rational(1), ctx);
      return ctx.overflow ? std::nullopt : std::optional<Poly>(out);
    }
    case ExprKind::Mul: {
      auto a = polynomialize(e.left(), ctx);
      auto b = polynomialize(e.right(), ctx);
      if (!a || !b) return std::nullopt;
      Poly out = poly_mul(*a, *b, ctx);
      return ctx.overflow ? std::nullopt : std::optional<Poly>(out);
    }
    case ExprKind::Div: {
      auto a = polynomialize(e.left(), ctx);
      auto b = polynomialize(e.right(), ctx);
      if (!a || !b) return std::nullopt;
      if (auto inv = poly_invert(*b)) {
        Poly out = poly_mul(*a, *inv, ctx);
        return ctx.overflow ? std::nullopt : std::optional<Poly>(out);
      }
      Expr denom = canonicalize(e.right(), ctx);
      if (denom.is_zero()) return std::nullopt;  // identically singular
      Poly out = poly_mul(*a, atom_poly(denom, -1, ctx), ctx);
      return ctx.overflow ? std::nullopt : std::optional<Poly>(out);
    }
    case ExprKind::IntPow: {
      auto a = polynomialize(e.left(), ctx);
      if (!a) return std::nullopt;
      int n = e.exponent();
      if (n >= 0) {
        Poly out = poly_pow(*a, n, ctx);
        return ctx.overflow ? std::nullopt : std::optional<Poly>(out);
      }
      if (auto inv = poly_invert(*a)) {
        Poly out = poly_pow(*inv, -n, ctx);
        return ctx.overflow ? std::nullopt : std::optional<Poly>(out);
      }
      Expr base = canonicalize(e.left(), ctx);
      if (base.is_zero()) return std::nullopt;
      return atom_poly(base, n, ctx);
    }
    case ExprKind::Func: {
      Expr arg = canonicalize(e.left(), ctx);
      return atom_poly(Expr::apply(e.func(), arg), 1, ctx);
    }
  }
  return std::nullopt;
}

}  // namespace

bool provably_zero(const Expr& e) {
  PolyCtx ctx;
  auto p = polynomialize(e, ctx);
  return p.has_value() && !ctx.overflow && p->empty();
}

// ---------------------------------------------------------------------------
// Numeric evaluation and sampled equivalence

double eval_double(const Expr& e, const std::map<std::string, double>& env) {
  switch (e.kind()) {
    case ExprKind::Const: return to_double(e.const_value());
    case ExprKind::Var: {
      auto it = env.find(e.var_name());
      if (it == env.end())
        throw InputError("unbound variable: " + e.var_name());
      return it->second;
    }
    case ExprKind::Neg: return -eval_double(e.left(), env);
    case ExprKind::Add: return eval_double(e.left(), env) + eval_double(e.right(), env);
    case ExprKind::Sub: return eval_double(e.left(), env) - eval_double(e.right(), env);
    case ExprKind::Mul: return eval_double(e.left(), env) * eval_double(e.right(), env);
    case ExprKind::Div: {
      double denom = eval_double(e.right(), env);
      if (denom == 0.0) throw DivisionByNonUnit("division by zero");
      return eval_double(e.left(), env) / denom;
    }
    case ExprKind::IntPow: {
      double base = eval_double(e.left(), env);
      int n = e.exponent();
      if (n < 0 && base == 0.0) throw DivisionByNonUnit("zero base, negative exponent");
      return std::pow(base, n);
    }
    case ExprKind::Func: {
      double a = eval_double(e.left(), env);
      switch (e.func()) {
        case FuncKind::Sin: return std::sin(a);
        case FuncKind::Cos: return std::cos(a);
        case FuncKind::Tan: return std::tan(a);
        case FuncKind::Exp: return std::exp(a);
        case FuncKind::Log:
          if (a <= 0.0) throw DomainError("log of nonpositive value");
          return std::log(a);
        case FuncKind::Sqrt:
          if (a < 0.0) throw DomainError("sqrt of negative value");
          return std::sqrt(a);
      }
    }
  }
  throw Error("unreachable expression kind");
}

bool expr_equiv(const Expr& a, const Expr& b, const SamplePolicy& policy) {
  Expr diff = simplify(a - b);
  if (diff.is_zero()) return true;
  if (diff.is_const()) return false;
  if (provably_zero(diff)) return true;

  std::set<std::string> vars;
  collect_free_vars(a, vars);
  collect_free_vars(b, vars);

  std::mt19937_64 rng(policy.seed);
  std::uniform_real_distribution<double> dist(policy.lo, policy.hi);
  int rejected = 0;
  int accepted = 0;
  while (accepted < policy.samples) {
    if (rejected > policy.retry_cap)
      throw UnsampleablePoint("sampling rejection cap exceeded");
    std::map<std::string, double> env;
    for (const auto& v : vars) env[v] = dist(rng);
    double va, vb;
    try {
      va = eval_double(a, env);
      vb = eval_double(b, env);
    } catch (const Error&) {
      ++rejected;
      continue;
    }
    if (!std::isfinite(va) || !std::isfinite(vb) || std::abs(va) > 1e12 ||
        std::abs(vb) > 1e12) {
      ++rejected;
      continue;
    }
    if (std::abs(va - vb) > policy.tol) return false;
    ++accepted;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Taylor machinery for the analytic fragment

std::vector<Expr> taylor_derivatives(FuncKind f, const std::string& var, int count) {
  std::vector<Expr> out;
  Expr cur = Expr::apply(f, Expr::var(var));
  for (int i = 0; i < count; ++i) {
    out.push_back(cur);
    cur = simplify(differentiate(cur, var));
  }
  return out;
}

}  // namespace weil
