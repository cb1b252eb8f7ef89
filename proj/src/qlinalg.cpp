#include "weil/qlinalg.hpp"

#include <stdexcept>

namespace weil {

namespace {

// Row-reduces m in place, returning the rank. Pivots are restricted to the
// first `pivot_cols` columns (all columns when 0). When det_out is nonnull
// the determinant (for square m) is accumulated there.
int row_reduce(QMatrix& m, Rational* det_out, std::size_t pivot_cols = 0) {
  if (det_out) *det_out = 1;
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size();
  std::size_t limit = pivot_cols == 0 ? cols : pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < limit && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) {
      if (det_out) *det_out = 0;
      continue;
    }
    if (pivot != r) {
      std::swap(m[pivot], m[r]);
      if (det_out) *det_out = -*det_out;
    }
    if (det_out) *det_out *= m[r][c];
    Rational inv = Rational(1) / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

}  // namespace

int qrank(QMatrix m) { return row_reduce(m, nullptr); }

Rational qdet(QMatrix m) {
  if (m.empty()) return 1;
  if (m.size() != m[0].size()) throw std::invalid_argument("qdet: not square");
  Rational det;
  int rank = row_reduce(m, &det);
  return rank == static_cast<int>(m.size()) ? det : Rational(0);
}

std::optional<QMatrix> qinverse(const QMatrix& m) {
  std::size_t n = m.size();
  QMatrix aug(n, QVector(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw std::invalid_argument("qinverse: not square");
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  if (row_reduce(aug, nullptr, n) != static_cast<int>(n)) return std::nullopt;
  QMatrix out(n, QVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
  return out;
}

std::optional<QVector> qsolve(QMatrix m, QVector rhs) {
  auto inv = qinverse(m);
  if (!inv) return std::nullopt;
  std::size_t n = m.size();
  QVector x(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x[i] += (*inv)[i][j] * rhs[j];
  return x;
}

QMatrix qidentity(std::size_t n) {
  QMatrix out(n, QVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

QMatrix qmul(const QMatrix& a, const QMatrix& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  QMatrix out(n, QVector(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  return out;
}

}  // namespace weil
