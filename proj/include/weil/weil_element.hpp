#pragma once

#include <vector>

#include "weil/algebra.hpp"
#include "weil/errors.hpp"

namespace weil {

// Element of a Weil algebra with coefficients in a scalar kind S (Rational,
// double or Expr — never converted implicitly between kinds). Arithmetic
// lives in WeilRing<Base> (eval.hpp), which supplies the scalar operations;
// this is the plain coefficient container.
template <class S>
struct WeilElement {
  const WeilAlgebra* alg = nullptr;
  std::vector<S> coeff;

  WeilElement() = default;
  WeilElement(const WeilAlgebra& a, std::vector<S> c)
      : alg(&a), coeff(std::move(c)) {
    if (coeff.size() != a.dim())
      throw AlgebraMismatch("element has wrong coefficient count");
  }

  const S& real_part() const { return coeff.at(0); }
  std::size_t dim() const { return coeff.size(); }

  const S& operator[](std::size_t i) const { return coeff.at(i); }
  S& operator[](std::size_t i) { return coeff.at(i); }
};

}  // namespace weil
