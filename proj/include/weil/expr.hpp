#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "weil/errors.hpp"
#include "weil/rational.hpp"

namespace weil {

enum class ExprKind { Const, Var, Neg, Add, Sub, Mul, Div, IntPow, Func };

// The fixed analytic fragment. Each function carries a derivative rule
// (differentiate) and a Taylor-coefficient generator (taylor_derivatives).
enum class FuncKind { Sin, Cos, Tan, Exp, Log, Sqrt };

const char* func_name(FuncKind f);

// Immutable symbolic scalar expression over named coordinates.
class Expr {
 public:
  struct Node {
    ExprKind kind;
    Rational value;    // Const
    std::string name;  // Var
    FuncKind func = FuncKind::Sin;
    int exponent = 0;  // IntPow
    std::shared_ptr<const Node> a, b;
  };

  Expr();  // zero
  static Expr constant(Rational v);
  static Expr integer(long v);
  static Expr var(std::string name);
  static Expr apply(FuncKind f, Expr arg);

  Expr operator-() const;
  Expr pow(int exponent) const;

  ExprKind kind() const { return node_->kind; }
  bool is_const() const { return node_->kind == ExprKind::Const; }
  bool is_zero() const { return is_const() && node_->value == 0; }
  bool is_one() const { return is_const() && node_->value == 1; }
  const Rational& const_value() const { return node_->value; }
  const std::string& var_name() const { return node_->name; }
  FuncKind func() const { return node_->func; }
  int exponent() const { return node_->exponent; }
  Expr left() const { return Expr(node_->a); }
  Expr right() const { return Expr(node_->b); }

  bool same(const Expr& other) const;  // structural equality

  // Unambiguous printing in the manifest grammar; parse(str()) round-trips.
  std::string str() const;

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node* raw() const { return node_.get(); }

 private:
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);

inline Expr sin(const Expr& e) { return Expr::apply(FuncKind::Sin, e); }
inline Expr cos(const Expr& e) { return Expr::apply(FuncKind::Cos, e); }
inline Expr tan(const Expr& e) { return Expr::apply(FuncKind::Tan, e); }
inline Expr exp(const Expr& e) { return Expr::apply(FuncKind::Exp, e); }
inline Expr log(const Expr& e) { return Expr::apply(FuncKind::Log, e); }
inline Expr sqrt(const Expr& e) { return Expr::apply(FuncKind::Sqrt, e); }

// Recursive-descent parser for the expression grammar:
//   precedence  ^ (right-assoc, integer exponent) > unary - > * / > + -
//   function application name(expr), identifiers, decimal/rational literals.
// Throws SyntaxError with byte offset and expectation set.
Expr parse_expr(const std::string& text);

Expr differentiate(const Expr& e, const std::string& var);

// Constant folding, 0/1 identities, commutative flattening with a
// deterministic operand order. Eval-equivalent to the input; does not
// distribute products.
Expr simplify(const Expr& e);

Expr substitute(const Expr& e, const std::map<std::string, Expr>& subst);

void collect_free_vars(const Expr& e, std::set<std::string>& out);
std::set<std::string> free_vars(const Expr& e);

// Exact zero test by expansion into a multivariate polynomial over
// analytic atoms. Returns true only on a proof; false means "unknown".
bool provably_zero(const Expr& e);

// Seeded random-sampling policy for symbolic equivalence verdicts.
struct SamplePolicy {
  std::uint64_t seed = 42;
  int samples = 24;
  double tol = 1e-9;
  int retry_cap = 200;
  double lo = -2.0, hi = 2.0;
};

// True iff the difference is provably zero or vanishes to tolerance at
// `samples` seeded random points (singular points skipped by rejection).
bool expr_equiv(const Expr& a, const Expr& b, const SamplePolicy& policy = {});

inline bool expr_zero(const Expr& e, const SamplePolicy& policy = {}) {
  return expr_equiv(e, Expr(), policy);
}

double eval_double(const Expr& e, const std::map<std::string, double>& env);

// Derivative values f, f', f'', ... of the analytic function applied to a
// fresh variable, as expressions in that variable; used by Weil-series
// evaluation. `count` entries.
std::vector<Expr> taylor_derivatives(FuncKind f, const std::string& var,
                                     int count);

}  // namespace weil
