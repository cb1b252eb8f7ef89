#pragma once

#include <optional>
#include <vector>

#include "weil/rational.hpp"

namespace weil {

// Dense exact linear algebra over the rationals. Sizes here are tiny
// (Weil algebra dimensions), so plain Gaussian elimination is fine.
using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;

int qrank(QMatrix m);
Rational qdet(QMatrix m);

// Inverse of a square matrix; nullopt when singular.
std::optional<QMatrix> qinverse(const QMatrix& m);

// Solves m x = rhs for square m; nullopt when singular.
std::optional<QVector> qsolve(QMatrix m, QVector rhs);

QMatrix qidentity(std::size_t n);
QMatrix qmul(const QMatrix& a, const QMatrix& b);

}  // namespace weil
