#include "weil/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>

namespace weil {

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

Patch::Patch(std::vector<std::string> names) : coords(std::move(names)) {
  if (coords.empty()) throw InputError("patch needs at least one coordinate");
  std::set<std::string> seen;
  for (const auto& c : coords) {
    if (!valid_identifier(c)) throw InputError("invalid coordinate name: " + c);
    if (!seen.insert(c).second)
      throw InputError("duplicate coordinate name: " + c);
  }
}

void require_same_patch(const Patch& a, const Patch& b) {
  if (a != b) throw PatchMismatch("tensors live on different patches");
}

VectorField::VectorField(Patch p, std::vector<Expr> c)
    : patch(std::move(p)), comp(std::move(c)) {
  if (comp.size() != patch.dim())
    throw InputError("vector field has wrong component count");
}

Expr VectorField::apply(const Expr& f) const {
  Expr out;
  for (std::size_t i = 0; i < comp.size(); ++i)
    out = out + comp[i] * differentiate(f, patch.coord(i));
  return simplify(out);
}

KForm KForm::scalar(Patch p, Expr f) {
  KForm out(std::move(p), 0);
  out.set({}, f);
  return out;
}

Expr KForm::coeff(const FormIndex& idx) const {
  auto it = comp.find(idx);
  return it == comp.end() ? Expr() : it->second;
}

void KForm::set(const FormIndex& idx, const Expr& value) {
  if (static_cast<int>(idx.size()) != degree)
    throw InputError("form index arity does not match degree");
  for (std::size_t p = 0; p + 1 < idx.size(); ++p)
    if (idx[p] >= idx[p + 1])
      throw InputError("form indices must be strictly increasing");
  if (!idx.empty() && idx.back() >= patch.dim())
    throw InputError("form index out of range");
  Expr v = simplify(value);
  if (v.is_zero())
    comp.erase(idx);
  else
    comp[idx] = v;
}

void KForm::add(const FormIndex& idx, const Expr& value) {
  set(idx, coeff(idx) + value);
}

Metric::Metric(Patch p, std::vector<std::vector<Expr>> c)
    : patch(std::move(p)), comp(std::move(c)) {
  if (comp.size() != patch.dim())
    throw InputError("metric has wrong shape");
  for (auto& row : comp)
    if (row.size() != patch.dim()) throw InputError("metric has wrong shape");
}

Tensor11::Tensor11(Patch p, std::vector<std::vector<Expr>> c)
    : patch(std::move(p)), comp(std::move(c)) {
  if (comp.size() != patch.dim())
    throw InputError("(1,1)-tensor has wrong shape");
  for (auto& row : comp)
    if (row.size() != patch.dim())
      throw InputError("(1,1)-tensor has wrong shape");
}

Bivector::Bivector(Patch p, std::vector<std::vector<Expr>> c)
    : patch(std::move(p)), comp(std::move(c)) {
  if (comp.size() != patch.dim())
    throw InputError("bivector has wrong shape");
  for (auto& row : comp)
    if (row.size() != patch.dim()) throw InputError("bivector has wrong shape");
}

Connection::Connection(Patch p, std::vector<std::vector<std::vector<Expr>>> g)
    : patch(std::move(p)), gamma(std::move(g)) {
  std::size_t n = patch.dim();
  if (gamma.size() != n) throw InputError("connection has wrong shape");
  for (auto& a : gamma) {
    if (a.size() != n) throw InputError("connection has wrong shape");
    for (auto& b : a)
      if (b.size() != n) throw InputError("connection has wrong shape");
  }
}

bool Connection::torsion_free(const SamplePolicy& policy) const {
  std::size_t n = patch.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (!expr_equiv(gamma[i][j][k], gamma[i][k][j], policy)) return false;
  return true;
}

Distribution::Distribution(Patch p, std::vector<VectorField> gens, int r)
    : patch(std::move(p)), generators(std::move(gens)), rank(r) {
  if (static_cast<int>(generators.size()) < rank)
    throw InputError("distribution has fewer generators than its rank");
  for (const auto& g : generators) require_same_patch(patch, g.patch);
}

SmoothMap::SmoothMap(Patch src, Patch tgt, std::vector<Expr> c)
    : source(std::move(src)), target(std::move(tgt)), comp(std::move(c)) {
  if (comp.size() != target.dim())
    throw InputError("map has wrong component count");
}

SmoothMap SmoothMap::identity(const Patch& p) {
  std::vector<Expr> c;
  for (const auto& name : p.coords) c.push_back(Expr::var(name));
  return SmoothMap(p, p, std::move(c));
}

Expr SmoothMap::pull(const Expr& f) const {
  std::map<std::string, Expr> subst;
  for (std::size_t i = 0; i < target.dim(); ++i)
    subst[target.coord(i)] = comp[i];
  return simplify(substitute(f, subst));
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  require_same_patch(outer.source, inner.target);
  std::vector<Expr> c;
  for (const auto& e : outer.comp) c.push_back(inner.pull(e));
  return SmoothMap(inner.source, outer.target, std::move(c));
}

// --- exterior calculus -----------------------------------------------------

namespace {

// Inserts index j into the strictly increasing tuple idx; returns the sign
// (−1)^position, or 0 if j already present.
int insert_index(FormIndex idx, std::size_t j, FormIndex& out) {
  int pos = 0;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    if (idx[p] == j) return 0;
    if (idx[p] < j) ++pos;
  }
  idx.insert(idx.begin() + pos, j);
  out = std::move(idx);
  return pos % 2 == 0 ? 1 : -1;
}

// Merge for dx_a ∧ dx_b: append each index of b from the right and move it
// into place, one transposition per larger entry. Returns 0 on repeats.
int merge_indices(const FormIndex& a, const FormIndex& b, FormIndex& out) {
  out = a;
  int sign = 1;
  for (std::size_t j : b) {
    auto it = std::lower_bound(out.begin(), out.end(), j);
    if (it != out.end() && *it == j) return 0;
    std::size_t larger = static_cast<std::size_t>(out.end() - it);
    if (larger % 2 != 0) sign = -sign;
    out.insert(it, j);
  }
  return sign;
}

}  // namespace

KForm exterior_derivative(const KForm& w) {
  std::size_t n = w.patch.dim();
  KForm out(w.patch, w.degree + 1);
  if (w.degree + 1 > static_cast<int>(n)) return out;  // identically zero
  for (const auto& [idx, c] : w.comp) {
    for (std::size_t j = 0; j < n; ++j) {
      Expr dc = differentiate(c, w.patch.coord(j));
      if (simplify(dc).is_zero()) continue;
      FormIndex merged;
      int sign = insert_index(idx, j, merged);
      if (sign == 0) continue;
      out.add(merged, Expr::integer(sign) * dc);
    }
  }
  return out;
}

KForm wedge(const KForm& a, const KForm& b) {
  require_same_patch(a.patch, b.patch);
  KForm out(a.patch, a.degree + b.degree);
  if (out.degree > static_cast<int>(a.patch.dim())) return out;
  for (const auto& [ia, ca] : a.comp)
    for (const auto& [ib, cb] : b.comp) {
      FormIndex merged;
      int sign = merge_indices(ia, ib, merged);
      if (sign == 0) continue;
      out.add(merged, Expr::integer(sign) * ca * cb);
    }
  return out;
}

KForm wedge_power(const KForm& w, int p) {
  KForm acc = KForm::scalar(w.patch, Expr::integer(1));
  for (int i = 0; i < p; ++i) acc = wedge(acc, w);
  return acc;
}

KForm interior_product(const VectorField& x, const KForm& w) {
  require_same_patch(x.patch, w.patch);
  if (w.degree == 0) throw InputError("interior product needs degree >= 1");
  KForm out(w.patch, w.degree - 1);
  for (const auto& [idx, c] : w.comp)
    for (std::size_t p = 0; p < idx.size(); ++p) {
      FormIndex rest;
      for (std::size_t q = 0; q < idx.size(); ++q)
        if (q != p) rest.push_back(idx[q]);
      int sign = p % 2 == 0 ? 1 : -1;
      out.add(rest, Expr::integer(sign) * x.comp[idx[p]] * c);
    }
  return out;
}

KForm pullback(const SmoothMap& phi, const KForm& w) {
  require_same_patch(phi.target, w.patch);
  // dφ^i as 1-forms on the source.
  std::size_t m = phi.source.dim();
  std::vector<KForm> dphi;
  for (const auto& comp : phi.comp) {
    KForm df(phi.source, 1);
    for (std::size_t j = 0; j < m; ++j)
      df.add({j}, differentiate(comp, phi.source.coord(j)));
    dphi.push_back(df);
  }
  KForm out(phi.source, w.degree);
  for (const auto& [idx, c] : w.comp) {
    KForm term = KForm::scalar(phi.source, phi.pull(c));
    for (std::size_t j : idx) term = wedge(term, dphi[j]);
    for (const auto& [ti, tc] : term.comp) out.add(ti, tc);
  }
  return out;
}

// --- Lie calculus ----------------------------------------------------------

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_patch(x.patch, y.patch);
  std::size_t n = x.patch.dim();
  std::vector<Expr> c(n);
  for (std::size_t i = 0; i < n; ++i)
    c[i] = simplify(x.apply(y.comp[i]) - y.apply(x.comp[i]));
  return VectorField(x.patch, std::move(c));
}

KForm lie_derivative(const VectorField& x, const KForm& w) {
  if (w.degree == 0) {
    return KForm::scalar(w.patch, x.apply(w.coeff({})));
  }
  KForm a = interior_product(x, exterior_derivative(w));
  KForm b = exterior_derivative(interior_product(x, w));
  for (const auto& [idx, c] : b.comp) a.add(idx, c);
  return a;
}

Tensor02 lie_derivative(const VectorField& x, const Tensor02& t) {
  require_same_patch(x.patch, t.patch);
  std::size_t n = x.patch.dim();
  std::vector<std::vector<Expr>> c(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr v = x.apply(t.comp[i][j]);
      for (std::size_t k = 0; k < n; ++k) {
        v = v + t.comp[k][j] * differentiate(x.comp[k], x.patch.coord(i));
        v = v + t.comp[i][k] * differentiate(x.comp[k], x.patch.coord(j));
      }
      c[i][j] = simplify(v);
    }
  return Tensor02(t.patch, std::move(c));
}

Tensor11 lie_derivative(const VectorField& x, const Tensor11& t) {
  require_same_patch(x.patch, t.patch);
  std::size_t n = x.patch.dim();
  std::vector<std::vector<Expr>> c(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr v = x.apply(t.comp[i][j]);
      for (std::size_t k = 0; k < n; ++k) {
        v = v - t.comp[k][j] * differentiate(x.comp[i], x.patch.coord(k));
        v = v + t.comp[i][k] * differentiate(x.comp[k], x.patch.coord(j));
      }
      c[i][j] = simplify(v);
    }
  return Tensor11(t.patch, std::move(c));
}

Bivector lie_derivative_bivector(const VectorField& x, const Bivector& lam) {
  require_same_patch(x.patch, lam.patch);
  std::size_t n = x.patch.dim();
  std::vector<std::vector<Expr>> c(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr v = x.apply(lam.comp[i][j]);
      for (std::size_t k = 0; k < n; ++k) {
        v = v - lam.comp[k][j] * differentiate(x.comp[i], x.patch.coord(k));
        v = v - lam.comp[i][k] * differentiate(x.comp[j], x.patch.coord(k));
      }
      c[i][j] = simplify(v);
    }
  return Bivector(lam.patch, std::move(c));
}

std::vector<std::vector<std::vector<Expr>>> nijenhuis(const Tensor11& j) {
  std::size_t n = j.patch.dim();
  const auto& J = j.comp;
  auto d = [&](const Expr& e, std::size_t k) {
    return differentiate(e, j.patch.coord(k));
  };
  std::vector<std::vector<std::vector<Expr>>> N(
      n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        Expr v;
        for (std::size_t m = 0; m < n; ++m) {
          v = v + J[m][a] * d(J[i][b], m) - J[m][b] * d(J[i][a], m) -
              J[i][m] * d(J[m][b], a) + J[i][m] * d(J[m][a], b);
        }
        N[i][a][b] = simplify(v);
      }
  return N;
}

std::vector<std::vector<std::vector<Expr>>> schouten_ll(const Bivector& lam) {
  std::size_t n = lam.patch.dim();
  const auto& L = lam.comp;
  auto d = [&](const Expr& e, std::size_t k) {
    return differentiate(e, lam.patch.coord(k));
  };
  std::vector<std::vector<std::vector<Expr>>> S(
      n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Expr v;
        for (std::size_t m = 0; m < n; ++m) {
          v = v + L[m][i] * d(L[j][k], m) + L[m][j] * d(L[k][i], m) +
              L[m][k] * d(L[i][j], m);
        }
        S[i][j][k] = simplify(Expr::integer(2) * v);
      }
  return S;
}

std::vector<std::vector<std::vector<Expr>>> wedge_vector_bivector(
    const VectorField& xi, const Bivector& lam) {
  require_same_patch(xi.patch, lam.patch);
  std::size_t n = xi.patch.dim();
  std::vector<std::vector<std::vector<Expr>>> W(
      n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        W[i][j][k] = simplify(xi.comp[i] * lam.comp[j][k] +
                              xi.comp[j] * lam.comp[k][i] +
                              xi.comp[k] * lam.comp[i][j]);
  return W;
}

// --- symbolic matrices -----------------------------------------------------

namespace {

EMatrix eminor(const EMatrix& m, std::size_t row, std::size_t col) {
  EMatrix out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i == row) continue;
    std::vector<Expr> r;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (j != col) r.push_back(m[i][j]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Expr edet(const EMatrix& m) {
  std::size_t n = m.size();
  if (n == 0) return Expr::integer(1);
  if (n == 1) return simplify(m[0][0]);
  // Cofactor expansion along the row with the most zeros.
  std::size_t best = 0, best_zeros = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t z = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (m[i][j].is_zero()) ++z;
    if (z > best_zeros) {
      best = i;
      best_zeros = z;
    }
  }
  Expr out;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[best][j].is_zero()) continue;
    Expr cof = edet(eminor(m, best, j));
    int sign = (best + j) % 2 == 0 ? 1 : -1;
    out = out + Expr::integer(sign) * m[best][j] * cof;
  }
  return simplify(out);
}

EMatrix einverse(const EMatrix& m) {
  std::size_t n = m.size();
  Expr det = edet(m);
  if (det.is_zero() || provably_zero(det))
    throw DegenerateMetric("matrix has identically zero determinant");
  EMatrix out(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr cof = edet(eminor(m, j, i));  // adjugate = transposed cofactors
      int sign = (i + j) % 2 == 0 ? 1 : -1;
      out[i][j] = simplify(Expr::integer(sign) * cof / det);
    }
  return out;
}

// --- Riemannian operators --------------------------------------------------

Connection levi_civita(const Metric& g) {
  if (g.patch.dim() > 4)
    throw InputError(
        "symbolic metric inversion limited to dim <= 4; supply an inverse");
  return levi_civita(g, einverse(g.comp));
}

Connection levi_civita(const Metric& g, const EMatrix& g_inv) {
  std::size_t n = g.patch.dim();
  auto d = [&](const Expr& e, std::size_t k) {
    return differentiate(e, g.patch.coord(k));
  };
  std::vector<std::vector<std::vector<Expr>>> gamma(
      n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Expr v;
        for (std::size_t m = 0; m < n; ++m) {
          if (g_inv[i][m].is_zero()) continue;
          v = v + g_inv[i][m] * (d(g.comp[m][k], j) + d(g.comp[m][j], k) -
                                 d(g.comp[j][k], m));
        }
        gamma[i][j][k] = simplify(Expr::constant(Rational(1, 2)) * v);
      }
  return Connection(g.patch, std::move(gamma));
}

VectorField covariant_derivative(const Connection& c, const VectorField& x,
                                 const VectorField& y) {
  require_same_patch(c.patch, x.patch);
  require_same_patch(c.patch, y.patch);
  std::size_t n = c.patch.dim();
  std::vector<Expr> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Expr v = x.apply(y.comp[i]);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        v = v + c.gamma[i][j][m] * x.comp[j] * y.comp[m];
    out[i] = simplify(v);
  }
  return VectorField(c.patch, std::move(out));
}

Tensor02 covariant_derivative(const Connection& c, const VectorField& x,
                              const Tensor02& t) {
  require_same_patch(c.patch, x.patch);
  require_same_patch(c.patch, t.patch);
  std::size_t n = c.patch.dim();
  std::vector<std::vector<Expr>> out(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr v = x.apply(t.comp[i][j]);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) {
          v = v - c.gamma[m][k][i] * x.comp[k] * t.comp[m][j];
          v = v - c.gamma[m][k][j] * x.comp[k] * t.comp[i][m];
        }
      out[i][j] = simplify(v);
    }
  return Tensor02(t.patch, std::move(out));
}

Tensor11 covariant_derivative(const Connection& c, const VectorField& x,
                              const Tensor11& t) {
  require_same_patch(c.patch, x.patch);
  require_same_patch(c.patch, t.patch);
  std::size_t n = c.patch.dim();
  std::vector<std::vector<Expr>> out(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr v = x.apply(t.comp[i][j]);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) {
          v = v + c.gamma[i][k][m] * x.comp[k] * t.comp[m][j];
          v = v - c.gamma[m][k][j] * x.comp[k] * t.comp[i][m];
        }
      out[i][j] = simplify(v);
    }
  return Tensor11(t.patch, std::move(out));
}

std::vector<std::vector<std::vector<std::vector<Expr>>>> riemann(
    const Connection& c) {
  std::size_t n = c.patch.dim();
  auto d = [&](const Expr& e, std::size_t k) {
    return differentiate(e, c.patch.coord(k));
  };
  std::vector<std::vector<std::vector<std::vector<Expr>>>> R(
      n, std::vector<std::vector<std::vector<Expr>>>(
             n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n))));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          Expr v = d(c.gamma[i][l][j], k) - d(c.gamma[i][k][j], l);
          for (std::size_t m = 0; m < n; ++m)
            v = v + c.gamma[i][k][m] * c.gamma[m][l][j] -
                c.gamma[i][l][m] * c.gamma[m][k][j];
          R[i][j][k][l] = simplify(v);
        }
  return R;
}

Tensor02 ricci(const Connection& c) {
  auto R = riemann(c);
  std::size_t n = c.patch.dim();
  std::vector<std::vector<Expr>> out(n, std::vector<Expr>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) {
      Expr v;
      for (std::size_t i = 0; i < n; ++i) v = v + R[i][j][i][l];
      out[j][l] = simplify(v);
    }
  return Tensor02(c.patch, std::move(out));
}

// --- sampling utilities ----------------------------------------------------

int numeric_rank(std::vector<std::vector<double>> m, double tol) {
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size();
  int rank = 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    for (std::size_t i = r + 1; i < rows; ++i)
      if (std::abs(m[i][c]) > std::abs(m[pivot][c])) pivot = i;
    if (std::abs(m[pivot][c]) <= tol) continue;
    std::swap(m[pivot], m[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      double f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

RankReport pointwise_rank(const EMatrix& m, const Patch& patch,
                          const SamplePolicy& policy) {
  std::mt19937_64 rng(policy.seed);
  std::uniform_real_distribution<double> dist(policy.lo, policy.hi);
  RankReport report;
  report.min_rank = -1;
  int rejected = 0;
  while (report.samples_used < policy.samples) {
    if (rejected > policy.retry_cap)
      throw UnsampleablePoint("rank sampling rejection cap exceeded");
    std::map<std::string, double> env;
    for (const auto& c : patch.coords) env[c] = dist(rng);
    std::vector<std::vector<double>> vals;
    try {
      for (const auto& row : m) {
        std::vector<double> r;
        for (const auto& e : row) r.push_back(eval_double(e, env));
        vals.push_back(std::move(r));
      }
    } catch (const Error&) {
      ++rejected;
      continue;
    }
    bool finite = true;
    for (const auto& row : vals)
      for (double v : row)
        if (!std::isfinite(v)) finite = false;
    if (!finite) {
      ++rejected;
      continue;
    }
    int rank = numeric_rank(vals, 1e-7);
    report.max_rank = std::max(report.max_rank, rank);
    report.min_rank = report.min_rank < 0 ? rank : std::min(report.min_rank, rank);
    ++report.samples_used;
  }
  if (report.min_rank < 0) report.min_rank = 0;
  return report;
}

EMatrix component_matrix(const std::vector<VectorField>& fields) {
  EMatrix out;
  for (const auto& f : fields) out.push_back(f.comp);
  return out;
}

EMatrix form_matrix(const KForm& w) {
  if (w.degree != 2) throw InputError("form_matrix needs a 2-form");
  std::size_t n = w.patch.dim();
  EMatrix out(n, std::vector<Expr>(n));
  for (const auto& [idx, c] : w.comp) {
    out[idx[0]][idx[1]] = c;
    out[idx[1]][idx[0]] = simplify(-c);
  }
  return out;
}

}  // namespace weil
