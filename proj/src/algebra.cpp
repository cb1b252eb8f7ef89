#include "weil/algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace weil {

WeilAlgebra::WeilAlgebra(std::string name, std::vector<std::string> basis,
                         std::vector<std::vector<QVector>> table)
    : name_(std::move(name)), basis_(std::move(basis)), table_(std::move(table)) {
  std::size_t l = basis_.size();
  if (l == 0) throw InputError("algebra needs at least the unit");
  if (table_.size() != l)
    throw InputError("structure table must be " + std::to_string(l) + " x " +
                     std::to_string(l));
  for (const auto& row : table_) {
    if (row.size() != l) throw InputError("ragged structure table");
    for (const auto& v : row)
      if (v.size() != l) throw InputError("structure vector of wrong length");
  }
}

WeilAlgebra WeilAlgebra::trivial() { return make_jet_algebra(0); }
WeilAlgebra WeilAlgebra::dual() { return make_jet_algebra(1); }

QVector WeilAlgebra::mul(const QVector& a, const QVector& b) const {
  std::size_t l = dim();
  if (a.size() != l || b.size() != l)
    throw AlgebraMismatch("coefficient vector of wrong length");
  QVector out(l, 0);
  for (std::size_t i = 0; i < l; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < l; ++j) {
      if (b[j] == 0) continue;
      Rational f = a[i] * b[j];
      const QVector& c = table_[i][j];
      for (std::size_t k = 0; k < l; ++k)
        if (c[k] != 0) out[k] += f * c[k];
    }
  }
  return out;
}

int WeilAlgebra::nilpotency_order() const {
  if (nilpotency_ >= 0) return nilpotency_;
  std::size_t l = dim();
  // Basis of the current ideal power, as rows; start with N = <a_1..>.
  QMatrix power;
  for (std::size_t i = 1; i < l; ++i) {
    QVector v(l, 0);
    v[i] = 1;
    power.push_back(v);
  }
  int q = 1;
  while (!power.empty() && qrank(power) > 0 && q <= static_cast<int>(l) + 1) {
    QMatrix next;
    for (const auto& v : power)
      for (std::size_t j = 1; j < l; ++j) {
        QVector e(l, 0);
        e[j] = 1;
        next.push_back(mul(v, e));
      }
    power = std::move(next);
    ++q;
  }
  if (q > static_cast<int>(l) + 1)
    throw InputError("ideal <a_1..> is not nilpotent");
  nilpotency_ = q;
  return nilpotency_;
}

VerificationReport WeilAlgebra::verify_axioms() const {
  VerificationReport report;
  std::size_t l = dim();

  bool unit_ok = true;
  for (std::size_t i = 0; i < l && unit_ok; ++i) {
    QVector e(l, 0);
    e[i] = 1;
    QVector one(l, 0);
    one[0] = 1;
    unit_ok = mul(one, e) == e && mul(e, one) == e;
  }
  report.add_exact("unit", unit_ok);

  bool comm_ok = true;
  for (std::size_t i = 0; i < l && comm_ok; ++i)
    for (std::size_t j = i + 1; j < l && comm_ok; ++j)
      comm_ok = table_[i][j] == table_[j][i];
  report.add_exact("commutativity", comm_ok);

  bool assoc_ok = true;
  for (std::size_t i = 0; i < l && assoc_ok; ++i)
    for (std::size_t j = 0; j < l && assoc_ok; ++j)
      for (std::size_t k = 0; k < l && assoc_ok; ++k) {
        QVector ek(l, 0);
        ek[k] = 1;
        QVector ei(l, 0);
        ei[i] = 1;
        assoc_ok = mul(table_[i][j], ek) == mul(ei, table_[j][k]);
      }
  report.add_exact("associativity", assoc_ok);

  try {
    int q = nilpotency_order();
    report.add_exact("nilpotent_ideal", true)
        .note = "N^" + std::to_string(q) + " = 0";
  } catch (const Error& e) {
    report.add_exact("nilpotent_ideal", false).note = e.what();
  }
  return report;
}

WeilAlgebra make_jet_algebra(int k) {
  if (k < 0 || k > 511) throw InputError("jet order out of range");
  std::size_t l = static_cast<std::size_t>(k) + 1;
  std::vector<std::string> basis;
  for (std::size_t i = 0; i < l; ++i) {
    if (i == 0)
      basis.push_back("1");
    else if (i == 1)
      basis.push_back("t");
    else
      basis.push_back("t^" + std::to_string(i));
  }
  std::vector<std::vector<QVector>> table(
      l, std::vector<QVector>(l, QVector(l, 0)));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j)
      if (i + j < l) table[i][j][i + j] = 1;
  std::string name = k == 0 ? "trivial" : (k == 1 ? "dual" : "jet" + std::to_string(k));
  return WeilAlgebra(name, std::move(basis), std::move(table));
}

namespace {

std::string monomial_name(const std::vector<int>& exps) {
  std::string out;
  for (std::size_t v = 0; v < exps.size(); ++v) {
    if (exps[v] == 0) continue;
    if (!out.empty()) out += '*';
    out += "X" + std::to_string(v + 1);
    if (exps[v] > 1) out += "^" + std::to_string(exps[v]);
  }
  return out.empty() ? "1" : out;
}

// Monomials of total degree <= k in degree-lex order.
void enumerate_monomials(int n, int k, std::vector<std::vector<int>>& out) {
  for (int d = 0; d <= k; ++d) {
    std::vector<int> cur(n, 0);
    // Generates all compositions of d into n parts in lex order.
    std::function<void(int, int)> rec = [&](int var, int remaining) {
      if (var == n - 1) {
        cur[var] = remaining;
        out.push_back(cur);
        return;
      }
      for (int e = remaining; e >= 0; --e) {
        cur[var] = e;
        rec(var + 1, remaining - e);
      }
    };
    if (n == 0) {
      if (d == 0) out.push_back({});
    } else {
      rec(0, d);
    }
  }
}

}  // namespace

WeilAlgebra make_truncated_poly(int n, int k) {
  if (n < 0 || k < 0) throw InputError("truncated polynomial parameters must be nonnegative");
  std::vector<std::vector<int>> monos;
  enumerate_monomials(n, k, monos);
  std::size_t l = monos.size();
  if (l > 512) throw InputError("truncated polynomial algebra dimension exceeds 512");
  std::map<std::vector<int>, std::size_t> index;
  std::vector<std::string> basis;
  for (std::size_t i = 0; i < l; ++i) {
    index[monos[i]] = i;
    basis.push_back(monomial_name(monos[i]));
  }
  std::vector<std::vector<QVector>> table(
      l, std::vector<QVector>(l, QVector(l, 0)));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      std::vector<int> sum(monos[i]);
      int deg = 0;
      for (std::size_t v = 0; v < sum.size(); ++v) {
        sum[v] += monos[j][v];
        deg += sum[v];
      }
      if (deg <= k) table[i][j][index.at(sum)] = 1;
    }
  return WeilAlgebra("trunc(" + std::to_string(n) + "," + std::to_string(k) + ")",
                     std::move(basis), std::move(table));
}

LinearFunctional::LinearFunctional(const WeilAlgebra& alg, QVector values)
    : alg_(&alg), values_(std::move(values)) {
  if (values_.size() != alg.dim())
    throw AlgebraMismatch("functional has wrong number of values");
}

Rational LinearFunctional::operator()(const QVector& coeffs) const {
  if (coeffs.size() != values_.size())
    throw AlgebraMismatch("coefficient vector of wrong length");
  Rational out = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) out += values_[i] * coeffs[i];
  return out;
}

QMatrix LinearFunctional::gram() const {
  std::size_t l = alg_->dim();
  QMatrix B(l, QVector(l));
  for (std::size_t k = 0; k < l; ++k)
    for (std::size_t m = 0; m < l; ++m) B[k][m] = (*this)(alg_->product(k, m));
  return B;
}

bool LinearFunctional::nondegenerate() const { return qdet(gram()) != 0; }

std::vector<QMatrix> LinearFunctional::triple_table() const {
  std::size_t l = alg_->dim();
  std::vector<QMatrix> T(l, QMatrix(l, QVector(l)));
  for (std::size_t t = 0; t < l; ++t) {
    QVector et(l, 0);
    et[t] = 1;
    for (std::size_t k = 0; k < l; ++k) {
      QVector tk = alg_->mul(et, [&] {
        QVector ek(l, 0);
        ek[k] = 1;
        return ek;
      }());
      for (std::size_t m = 0; m < l; ++m) {
        QVector em(l, 0);
        em[m] = 1;
        T[t][k][m] = (*this)(alg_->mul(tk, em));
      }
    }
  }
  return T;
}

LinearFunctional LinearFunctional::preset(const WeilAlgebra& alg,
                                          const std::string& which) {
  std::size_t l = alg.dim();
  QVector v(l, 0);
  if (which == "real") {
    v[0] = 1;
    return LinearFunctional(alg, v);
  }
  if (which == "top") {
    v[l - 1] = 1;
    return LinearFunctional(alg, v);
  }
  if (which == "mixed") {
    v[0] = 1;
    LinearFunctional lam(alg, v);
    int rank = qrank(lam.gram());
    for (std::size_t j = l; j-- > 1 && rank < static_cast<int>(l);) {
      v[j] = 1;
      LinearFunctional trial(alg, v);
      int r = qrank(trial.gram());
      if (r > rank) {
        rank = r;
      } else {
        v[j] = 0;
      }
    }
    return LinearFunctional(alg, v);
  }
  throw InputError("unknown functional preset: " + which);
}

}  // namespace weil
