#pragma once

#include <string>
#include <vector>

#include "weil/errors.hpp"
#include "weil/qlinalg.hpp"
#include "weil/report.hpp"

namespace weil {

// Finite-dimensional commutative unital real algebra A = R·1 ⊕ N with N a
// nilpotent maximal ideal, presented by a structure-constant table over the
// rationals: a_i · a_j = Σ_k c[i][j][k] a_k. Basis element 0 is the unit.
class WeilAlgebra {
 public:
  WeilAlgebra(std::string name, std::vector<std::string> basis,
              std::vector<std::vector<QVector>> table);

  static WeilAlgebra trivial();
  static WeilAlgebra dual();

  const std::string& name() const { return name_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::string>& basis() const { return basis_; }
  const std::string& basis_name(std::size_t i) const { return basis_[i]; }

  // Structure constants of a_i a_j as a coefficient vector.
  const QVector& product(std::size_t i, std::size_t j) const {
    return table_[i][j];
  }

  // Product of two coefficient vectors by contraction with the table.
  QVector mul(const QVector& a, const QVector& b) const;

  // Smallest q with N^q = 0; series in a nilpotent element truncate at q
  // terms. At most dim() for a genuine Weil algebra.
  int nilpotency_order() const;

  // Checks commutativity, associativity, the unit law and nilpotency of
  // the ideal spanned by a_1..a_{l-1}. All verdicts are exact.
  VerificationReport verify_axioms() const;

 private:
  std::string name_;
  std::vector<std::string> basis_;
  std::vector<std::vector<QVector>> table_;
  mutable int nilpotency_ = -1;  // lazily computed
};

// R[t]/(t^{k+1}), the k-jet algebra; dimension k+1.
WeilAlgebra make_jet_algebra(int k);

// R[X_1..X_n]/(monomials of degree > k); basis is all monomials of total
// degree at most k in degree-lexicographic order, dimension C(n+k, k).
// Throws InputError when the dimension would exceed 512.
WeilAlgebra make_truncated_poly(int n, int k);

// A linear functional lambda on A, given by its values on the basis.
// Induces the Gram pairing B[k][m] = lambda(a_k a_m) used by metric and
// form lifts, and the triple table T[t][k][m] = lambda(a_t a_k a_m).
class LinearFunctional {
 public:
  LinearFunctional(const WeilAlgebra& alg, QVector values);

  const WeilAlgebra& algebra() const { return *alg_; }
  const QVector& values() const { return values_; }

  Rational operator()(const QVector& coeffs) const;

  QMatrix gram() const;
  bool nondegenerate() const;
  std::vector<QMatrix> triple_table() const;  // indexed T[t][k][m]

  // Named presets:
  //   "real"  lambda = pr_R (evaluation of the real part);
  //   "top"   coefficient of the highest basis element;
  //   "mixed" starts from pr_R and greedily turns on higher basis values,
  //           scanning from the top down, keeping an entry only when it
  //           increases the Gram rank; nondegenerate whenever possible.
  static LinearFunctional preset(const WeilAlgebra& alg,
                                 const std::string& which);

 private:
  const WeilAlgebra* alg_;
  QVector values_;
};

}  // namespace weil
