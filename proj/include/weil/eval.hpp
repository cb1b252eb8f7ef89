#pragma once

#include <cmath>
#include <map>
#include <string>

#include "weil/expr.hpp"
#include "weil/weil_element.hpp"

namespace weil {

// Scalar rings over which expressions can be evaluated. Each ring exposes
// the same interface; `eval` below is generic over it. Rings are instances
// (WeilRing carries its algebra), the scalar kinds stay distinct types.

struct DoubleRing {
  using Scalar = double;
  Scalar zero() const { return 0.0; }
  Scalar one() const { return 1.0; }
  Scalar from_rational(const Rational& r) const { return to_double(r); }
  Scalar add(const Scalar& a, const Scalar& b) const { return a + b; }
  Scalar sub(const Scalar& a, const Scalar& b) const { return a - b; }
  Scalar neg(const Scalar& a) const { return -a; }
  Scalar mul(const Scalar& a, const Scalar& b) const { return a * b; }
  Scalar div(const Scalar& a, const Scalar& b) const {
    if (b == 0.0) throw DivisionByNonUnit("division by zero");
    return a / b;
  }
  bool is_zero(const Scalar& a) const { return a == 0.0; }
  Scalar apply_func(FuncKind f, const Scalar& a) const {
    switch (f) {
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
    throw Error("unreachable");
  }
};

struct RationalRing {
  using Scalar = Rational;
  Scalar zero() const { return Rational(0); }
  Scalar one() const { return Rational(1); }
  Scalar from_rational(const Rational& r) const { return r; }
  Scalar add(const Scalar& a, const Scalar& b) const { return a + b; }
  Scalar sub(const Scalar& a, const Scalar& b) const { return a - b; }
  Scalar neg(const Scalar& a) const { return -a; }
  Scalar mul(const Scalar& a, const Scalar& b) const { return a * b; }
  Scalar div(const Scalar& a, const Scalar& b) const {
    if (b == 0) throw DivisionByNonUnit("division by zero");
    return a / b;
  }
  bool is_zero(const Scalar& a) const { return a == 0; }
  Scalar apply_func(FuncKind f, const Scalar&) const {
    throw DomainError(std::string(func_name(f)) +
                      " has no exact rational value");
  }
};

struct ExprRing {
  using Scalar = Expr;
  Scalar zero() const { return Expr(); }
  Scalar one() const { return Expr::integer(1); }
  Scalar from_rational(const Rational& r) const { return Expr::constant(r); }
  Scalar add(const Scalar& a, const Scalar& b) const { return simplify(a + b); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return simplify(a - b); }
  Scalar neg(const Scalar& a) const { return simplify(-a); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return simplify(a * b); }
  Scalar div(const Scalar& a, const Scalar& b) const {
    Expr d = simplify(b);
    if (d.is_zero()) throw DivisionByNonUnit("division by zero expression");
    return simplify(a / d);
  }
  // Syntactic zero only; proofs go through provably_zero separately.
  bool is_zero(const Scalar& a) const { return simplify(a).is_zero(); }
  Scalar apply_func(FuncKind f, const Scalar& a) const {
    return Expr::apply(f, a);
  }
};

// Generic evaluation of an expression with values assigned to variables.
template <class Ring>
typename Ring::Scalar eval(const Expr& e, const Ring& ring,
                           const std::map<std::string, typename Ring::Scalar>& env) {
  switch (e.kind()) {
    case ExprKind::Const: return ring.from_rational(e.const_value());
    case ExprKind::Var: {
      auto it = env.find(e.var_name());
      if (it == env.end()) throw InputError("unbound variable: " + e.var_name());
      return it->second;
    }
    case ExprKind::Neg: return ring.neg(eval(e.left(), ring, env));
    case ExprKind::Add:
      return ring.add(eval(e.left(), ring, env), eval(e.right(), ring, env));
    case ExprKind::Sub:
      return ring.sub(eval(e.left(), ring, env), eval(e.right(), ring, env));
    case ExprKind::Mul:
      return ring.mul(eval(e.left(), ring, env), eval(e.right(), ring, env));
    case ExprKind::Div:
      return ring.div(eval(e.left(), ring, env), eval(e.right(), ring, env));
    case ExprKind::IntPow: {
      auto base = eval(e.left(), ring, env);
      int n = e.exponent();
      auto acc = ring.one();
      for (int i = 0; i < std::abs(n); ++i) acc = ring.mul(acc, base);
      return n >= 0 ? acc : ring.div(ring.one(), acc);
    }
    case ExprKind::Func:
      return ring.apply_func(e.func(), eval(e.left(), ring, env));
  }
  throw Error("unreachable expression kind");
}

// The A-points ring: scalars are Weil elements with coefficients in a base
// scalar ring. Evaluating a function expression over this ring at the
// A-point coordinates realizes the algebra homomorphism C^inf(R^n) -> A.
template <class Base>
struct WeilRing {
  using S = typename Base::Scalar;
  using Scalar = WeilElement<S>;

  const WeilAlgebra* alg;
  Base base;

  explicit WeilRing(const WeilAlgebra& a, Base b = {}) : alg(&a), base(b) {}

  Scalar from_scalar(const S& s) const {
    std::vector<S> c(alg->dim(), base.zero());
    c[0] = s;
    return Scalar(*alg, std::move(c));
  }
  Scalar zero() const { return from_scalar(base.zero()); }
  Scalar one() const { return from_scalar(base.one()); }
  Scalar from_rational(const Rational& r) const {
    return from_scalar(base.from_rational(r));
  }
  // a_k as an element with base-ring coefficients.
  Scalar basis_element(std::size_t k) const {
    std::vector<S> c(alg->dim(), base.zero());
    c.at(k) = base.one();
    return Scalar(*alg, std::move(c));
  }

  void check(const Scalar& x) const {
    if (x.alg != alg) throw AlgebraMismatch("element from a different algebra");
  }

  Scalar add(const Scalar& a, const Scalar& b) const {
    check(a);
    check(b);
    std::vector<S> c(alg->dim(), base.zero());
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] = base.add(a.coeff[i], b.coeff[i]);
    return Scalar(*alg, std::move(c));
  }
  Scalar sub(const Scalar& a, const Scalar& b) const {
    check(a);
    check(b);
    std::vector<S> c(alg->dim(), base.zero());
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] = base.sub(a.coeff[i], b.coeff[i]);
    return Scalar(*alg, std::move(c));
  }
  Scalar neg(const Scalar& a) const {
    check(a);
    std::vector<S> c(alg->dim(), base.zero());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = base.neg(a.coeff[i]);
    return Scalar(*alg, std::move(c));
  }

  Scalar mul(const Scalar& a, const Scalar& b) const {
    check(a);
    check(b);
    std::size_t l = alg->dim();
    std::vector<S> c(l, base.zero());
    for (std::size_t i = 0; i < l; ++i) {
      if (base.is_zero(a.coeff[i])) continue;
      for (std::size_t j = 0; j < l; ++j) {
        if (base.is_zero(b.coeff[j])) continue;
        S f = base.mul(a.coeff[i], b.coeff[j]);
        const QVector& t = alg->product(i, j);
        for (std::size_t k = 0; k < l; ++k) {
          if (t[k] == 0) continue;
          S term = t[k] == 1 ? f : base.mul(base.from_rational(t[k]), f);
          c[k] = base.add(c[k], term);
        }
      }
    }
    return Scalar(*alg, std::move(c));
  }

  Scalar scale(const Rational& r, const Scalar& a) const {
    check(a);
    std::vector<S> c(alg->dim(), base.zero());
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] = base.mul(base.from_rational(r), a.coeff[i]);
    return Scalar(*alg, std::move(c));
  }

  bool is_zero(const Scalar& a) const {
    check(a);
    for (const auto& s : a.coeff)
      if (!base.is_zero(s)) return false;
    return true;
  }

  // Nilpotent part n = a - real(a)·1.
  Scalar nilpotent_part(const Scalar& a) const {
    Scalar out = a;
    out.coeff[0] = base.zero();
    return out;
  }

  // Truncated geometric series: b = r(1 + m) with m nilpotent, so
  // b^{-1} = r^{-1} Σ_{j<q} (-m)^j. Requires an invertible real part.
  Scalar invert(const Scalar& b) const {
    check(b);
    const S& r = b.real_part();
    if (base.is_zero(r)) throw ZeroRealPart("element has zero real part");
    int q = alg->nilpotency_order();
    Scalar m = nilpotent_part(b);
    // m/r, nilpotent.
    std::vector<S> mc(alg->dim(), base.zero());
    for (std::size_t i = 1; i < mc.size(); ++i)
      mc[i] = base.div(m.coeff[i], r);
    Scalar mr(*alg, std::move(mc));
    Scalar acc = one();
    Scalar power = one();
    for (int j = 1; j < q; ++j) {
      power = neg(mul(power, mr));
      acc = add(acc, power);
    }
    std::vector<S> out(alg->dim(), base.zero());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = base.div(acc.coeff[i], r);
    return Scalar(*alg, std::move(out));
  }

  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, invert(b)); }

  // Finite Taylor expansion around the real part:
  //   f(r + n) = Σ_{j<q} f^{(j)}(r)/j! · n^j,   n nilpotent.
  // Derivative values f^{(j)}(r) are computed in the base ring.
  Scalar apply_func(FuncKind f, const Scalar& a) const {
    check(a);
    int q = alg->nilpotency_order();
    auto derivs = taylor_derivatives(f, "t", q);
    std::map<std::string, S> env{{"t", a.real_part()}};
    Scalar n = nilpotent_part(a);
    Scalar acc = zero();
    Scalar npow = one();
    Rational fact(1);
    for (int j = 0; j < q; ++j) {
      if (j > 0) {
        npow = mul(npow, n);
        fact *= j;
      }
      S dj = eval(derivs[j], base, env);
      Scalar term = scale(Rational(1) / fact, mul(from_scalar(dj), npow));
      acc = add(acc, term);
    }
    return acc;
  }
};

}  // namespace weil
