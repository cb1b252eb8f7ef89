#include "weil/lift.hpp"

#include <algorithm>

namespace weil {

namespace {

WeilRing<ExprRing> ring(const LiftedPatch& lp) {
  return WeilRing<ExprRing>(lp.algebra);
}

// Multiplication-operator matrix of a Weil element over Expr:
// M(x)[k][s] = a_k-coefficient of x·a_s.
EMatrix mul_operator(const LiftedPatch& lp, const WeilElement<Expr>& x) {
  auto R = ring(lp);
  std::size_t l = lp.l();
  EMatrix m(l, std::vector<Expr>(l));
  for (std::size_t s = 0; s < l; ++s) {
    auto col = R.mul(x, R.basis_element(s));
    for (std::size_t k = 0; k < l; ++k) m[k][s] = col.coeff[k];
  }
  return m;
}

}  // namespace

LiftedPatch lift_patch(const Patch& base, const WeilAlgebra& algebra) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < base.dim(); ++i)
    for (std::size_t k = 0; k < algebra.dim(); ++k)
      names.push_back(base.coord(i) + "_" + std::to_string(k + 1));
  return LiftedPatch{base, algebra, Patch(std::move(names))};
}

std::map<std::string, WeilElement<Expr>> a_point_env(const LiftedPatch& lp) {
  std::map<std::string, WeilElement<Expr>> env;
  for (std::size_t i = 0; i < lp.n(); ++i) {
    std::vector<Expr> c;
    for (std::size_t k = 0; k < lp.l(); ++k)
      c.push_back(Expr::var(lp.coord(i, k)));
    env.emplace(lp.base.coord(i), WeilElement<Expr>(lp.algebra, std::move(c)));
  }
  return env;
}

AValuedFunction lift_function(const LiftedPatch& lp, const Expr& f) {
  auto val = eval(f, ring(lp), a_point_env(lp));
  AValuedFunction out;
  for (auto& c : val.coeff) out.coeff.push_back(simplify(c));
  return out;
}

SmoothMap lift_map(const SmoothMap& phi, const WeilAlgebra& algebra) {
  LiftedPatch src = lift_patch(phi.source, algebra);
  LiftedPatch tgt = lift_patch(phi.target, algebra);
  std::vector<Expr> comps;
  for (const auto& c : phi.comp) {
    AValuedFunction lifted = lift_function(src, c);
    for (auto& e : lifted.coeff) comps.push_back(e);
  }
  return SmoothMap(src.patch, tgt.patch, std::move(comps));
}

VectorField lift_vector_field(const LiftedPatch& lp, const VectorField& x) {
  require_same_patch(lp.base, x.patch);
  std::vector<Expr> comps;
  for (const auto& c : x.comp) {
    AValuedFunction lifted = lift_function(lp, c);
    for (auto& e : lifted.coeff) comps.push_back(e);
  }
  return VectorField(lp.patch, std::move(comps));
}

VectorField weighted_lift_vector(const LiftedPatch& lp, const VectorField& x,
                                 const QVector& weight) {
  require_same_patch(lp.base, x.patch);
  auto R = ring(lp);
  WeilElement<Expr> w(lp.algebra, [&] {
    std::vector<Expr> c;
    for (const auto& q : weight) c.push_back(Expr::constant(q));
    return c;
  }());
  std::vector<Expr> comps;
  auto env = a_point_env(lp);
  for (const auto& c : x.comp) {
    auto val = R.mul(eval(c, ring(lp), env), w);
    for (auto& e : val.coeff) comps.push_back(simplify(e));
  }
  return VectorField(lp.patch, std::move(comps));
}

AValuedForm lift_form_A(const LiftedPatch& lp, const KForm& w) {
  require_same_patch(lp.base, w.patch);
  auto R = ring(lp);
  std::size_t l = lp.l();
  AValuedForm out(l, KForm(lp.patch, w.degree));
  auto env = a_point_env(lp);
  for (const auto& [idx, c] : w.comp) {
    WeilElement<Expr> ca = eval(c, R, env);
    // Expand the A-valued coframe product over k-tuples.
    std::size_t p = idx.size();
    std::vector<std::size_t> ks(p, 0);
    for (;;) {
      WeilElement<Expr> term = ca;
      for (std::size_t q = 0; q < p; ++q)
        term = R.mul(term, R.basis_element(ks[q]));
      FormIndex lifted_idx;
      for (std::size_t q = 0; q < p; ++q)
        lifted_idx.push_back(lp.idx(idx[q], ks[q]));
      for (std::size_t t = 0; t < l; ++t)
        if (!simplify(term.coeff[t]).is_zero())
          out[t].add(lifted_idx, term.coeff[t]);
      // next tuple
      std::size_t q = 0;
      while (q < p && ++ks[q] == l) ks[q++] = 0;
      if (q == p) break;  // wrapped around (p = 0 runs the body once)
    }
  }
  return out;
}

KForm lift_form(const LiftedPatch& lp, const KForm& w,
                const LinearFunctional& lam) {
  AValuedForm coeffs = lift_form_A(lp, w);
  KForm out(lp.patch, w.degree);
  const QVector& lv = lam.values();
  for (std::size_t t = 0; t < coeffs.size(); ++t) {
    if (lv[t] == 0) continue;
    for (const auto& [idx, c] : coeffs[t].comp)
      out.add(idx, Expr::constant(lv[t]) * c);
  }
  return out;
}

AValuedForm wedge_A(const LiftedPatch& lp, const AValuedForm& a,
                    const AValuedForm& b) {
  std::size_t l = lp.l();
  int degree = a.at(0).degree + b.at(0).degree;
  AValuedForm out(l, KForm(lp.patch, degree));
  for (std::size_t s = 0; s < l; ++s)
    for (std::size_t t = 0; t < l; ++t) {
      const QVector& prod = lp.algebra.product(s, t);
      KForm piece = wedge(a[s], b[t]);
      for (std::size_t k = 0; k < l; ++k) {
        if (prod[k] == 0) continue;
        for (const auto& [idx, c] : piece.comp)
          out[k].add(idx, Expr::constant(prod[k]) * c);
      }
    }
  return out;
}

Metric lift_metric(const LiftedPatch& lp, const Metric& g,
                   const LinearFunctional& lam) {
  require_same_patch(lp.base, g.patch);
  std::size_t n = lp.n(), l = lp.l();
  auto T = lam.triple_table();
  std::vector<std::vector<Expr>> out(n * l, std::vector<Expr>(n * l));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      AValuedFunction gij = lift_function(lp, g.comp[i][j]);
      for (std::size_t k = 0; k < l; ++k)
        for (std::size_t m = 0; m < l; ++m) {
          Expr v;
          for (std::size_t t = 0; t < l; ++t) {
            if (T[t][k][m] == 0) continue;
            v = v + Expr::constant(T[t][k][m]) * gij.coeff[t];
          }
          out[lp.idx(i, k)][lp.idx(j, m)] = simplify(v);
        }
    }
  return Metric(lp.patch, std::move(out));
}

EMatrix lifted_metric_inverse(const LiftedPatch& lp, const EMatrix& g_inv_base,
                              const LinearFunctional& lam) {
  std::size_t n = lp.n(), l = lp.l();
  auto binv_opt = qinverse(lam.gram());
  if (!binv_opt)
    throw DegenerateMetric("functional Gram matrix is degenerate");
  const QMatrix& binv = *binv_opt;
  auto R = ring(lp);
  auto env = a_point_env(lp);
  EMatrix out(n * l, std::vector<Expr>(n * l));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      WeilElement<Expr> gij = eval(g_inv_base[i][j], R, env);
      EMatrix M = mul_operator(lp, gij);
      for (std::size_t k = 0; k < l; ++k)
        for (std::size_t m = 0; m < l; ++m) {
          Expr v;
          for (std::size_t s = 0; s < l; ++s) {
            if (binv[s][m] == 0) continue;
            v = v + M[k][s] * Expr::constant(binv[s][m]);
          }
          out[lp.idx(i, k)][lp.idx(j, m)] = simplify(v);
        }
    }
  return out;
}

Tensor11 lift_tensor11(const LiftedPatch& lp, const Tensor11& j) {
  require_same_patch(lp.base, j.patch);
  std::size_t n = lp.n(), l = lp.l();
  auto R = ring(lp);
  auto env = a_point_env(lp);
  std::vector<std::vector<Expr>> out(n * l, std::vector<Expr>(n * l));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t jj = 0; jj < n; ++jj) {
      WeilElement<Expr> jij = eval(j.comp[i][jj], R, env);
      EMatrix M = mul_operator(lp, jij);
      for (std::size_t k = 0; k < l; ++k)
        for (std::size_t m = 0; m < l; ++m)
          out[lp.idx(i, k)][lp.idx(jj, m)] = simplify(M[k][m]);
    }
  return Tensor11(lp.patch, std::move(out));
}

Bivector lift_bivector(const LiftedPatch& lp, const Bivector& lam_bv,
                       const LinearFunctional& lam) {
  require_same_patch(lp.base, lam_bv.patch);
  std::size_t n = lp.n(), l = lp.l();
  auto binv_opt = qinverse(lam.gram());
  if (!binv_opt)
    throw DegenerateMetric("functional Gram matrix is degenerate");
  const QMatrix& binv = *binv_opt;
  auto R = ring(lp);
  auto env = a_point_env(lp);
  std::vector<std::vector<Expr>> out(n * l, std::vector<Expr>(n * l));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      WeilElement<Expr> lij = eval(lam_bv.comp[i][j], R, env);
      EMatrix M = mul_operator(lp, lij);
      for (std::size_t k = 0; k < l; ++k)
        for (std::size_t m = 0; m < l; ++m) {
          Expr v;
          for (std::size_t s = 0; s < l; ++s) {
            if (binv[s][m] == 0) continue;
            v = v + M[k][s] * Expr::constant(binv[s][m]);
          }
          out[lp.idx(i, k)][lp.idx(j, m)] = simplify(v);
        }
    }
  return Bivector(lp.patch, std::move(out));
}

Connection lift_connection(const LiftedPatch& lp, const Connection& c) {
  require_same_patch(lp.base, c.patch);
  std::size_t n = lp.n(), l = lp.l();
  auto R = ring(lp);
  auto env = a_point_env(lp);
  std::size_t N = n * l;
  std::vector<std::vector<std::vector<Expr>>> gamma(
      N, std::vector<std::vector<Expr>>(N, std::vector<Expr>(N)));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        WeilElement<Expr> grij = eval(c.gamma[r][i][j], R, env);
        for (std::size_t k = 0; k < l; ++k)
          for (std::size_t m = 0; m < l; ++m) {
            auto prod = R.mul(R.mul(grij, R.basis_element(k)),
                              R.basis_element(m));
            for (std::size_t s = 0; s < l; ++s)
              gamma[lp.idx(r, s)][lp.idx(i, k)][lp.idx(j, m)] =
                  simplify(prod.coeff[s]);
          }
      }
  return Connection(lp.patch, std::move(gamma));
}

// --- sections and averaged lifts ------------------------------------------

SmoothMap canonical_section(const LiftedPatch& lp) {
  std::vector<Expr> comps(lp.n() * lp.l());
  for (std::size_t i = 0; i < lp.n(); ++i)
    comps[lp.idx(i, 0)] = Expr::var(lp.base.coord(i));
  return SmoothMap(lp.base, lp.patch, std::move(comps));
}

std::vector<SmoothMap> basis_sections(const LiftedPatch& lp) {
  std::vector<SmoothMap> out;
  out.push_back(canonical_section(lp));
  for (std::size_t j = 1; j < lp.l(); ++j) {
    std::vector<Expr> comps(lp.n() * lp.l());
    for (std::size_t i = 0; i < lp.n(); ++i) {
      comps[lp.idx(i, 0)] = Expr::var(lp.base.coord(i));
      comps[lp.idx(i, j)] = Expr::var(lp.base.coord(i));
    }
    out.emplace_back(lp.base, lp.patch, std::move(comps));
  }
  return out;
}

namespace {

void require_affine_section(const LiftedPatch& lp, const SmoothMap& s) {
  require_same_patch(s.source, lp.base);
  require_same_patch(s.target, lp.patch);
  for (const auto& comp : s.comp)
    for (const auto& a : lp.base.coords)
      for (const auto& b : lp.base.coords) {
        Expr second = differentiate(differentiate(comp, a), b);
        if (!provably_zero(second))
          throw NonAffineSection(
              "section component is not affine in the base coordinates");
      }
  // Section property: the k = 1 slots must be the base coordinates.
  for (std::size_t i = 0; i < lp.n(); ++i)
    if (!provably_zero(s.comp[lp.idx(i, 0)] - Expr::var(lp.base.coord(i))))
      throw InputError("not a section: x^{i,1} component differs from x^i");
}

// Substitute base coordinates by the corresponding x^{i,1} (fiber-constant
// extension of a function defined along the section image).
Expr extend_fiber_constant(const LiftedPatch& lp, const Expr& e) {
  std::map<std::string, Expr> subst;
  for (std::size_t i = 0; i < lp.n(); ++i)
    subst[lp.base.coord(i)] = Expr::var(lp.coord(i, 0));
  return simplify(substitute(e, subst));
}

}  // namespace

VectorField section_pushforward(const LiftedPatch& lp, const SmoothMap& s,
                                const VectorField& x) {
  require_affine_section(lp, s);
  require_same_patch(x.patch, lp.base);
  std::vector<Expr> comps;
  for (const auto& comp : s.comp)
    comps.push_back(extend_fiber_constant(lp, x.apply(comp)));
  return VectorField(lp.patch, std::move(comps));
}

Bivector section_pushforward(const LiftedPatch& lp, const SmoothMap& s,
                             const Bivector& lam) {
  require_affine_section(lp, s);
  require_same_patch(lam.patch, lp.base);
  std::size_t n = lp.n(), N = lp.n() * lp.l();
  std::vector<std::vector<Expr>> out(N, std::vector<Expr>(N));
  for (std::size_t p = 0; p < N; ++p)
    for (std::size_t q = 0; q < N; ++q) {
      Expr v;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          if (lam.comp[a][b].is_zero()) continue;
          v = v + lam.comp[a][b] *
                  differentiate(s.comp[p], lp.base.coord(a)) *
                  differentiate(s.comp[q], lp.base.coord(b));
        }
      out[p][q] = extend_fiber_constant(lp, simplify(v));
    }
  return Bivector(lp.patch, std::move(out));
}

VectorField averaged_lift_vector(const LiftedPatch& lp, const VectorField& x,
                                 const std::vector<SmoothMap>& sections) {
  std::size_t N = lp.n() * lp.l();
  std::vector<Expr> acc(N);
  for (const auto& s : sections) {
    VectorField push = section_pushforward(lp, s, x);
    for (std::size_t p = 0; p < N; ++p) acc[p] = acc[p] + push.comp[p];
  }
  Expr inv = Expr::constant(Rational(1, static_cast<long>(sections.size())));
  for (auto& e : acc) e = simplify(inv * e);
  return VectorField(lp.patch, std::move(acc));
}

Bivector averaged_lift_bivector(const LiftedPatch& lp, const Bivector& lam,
                                const std::vector<SmoothMap>& sections) {
  std::size_t N = lp.n() * lp.l();
  std::vector<std::vector<Expr>> acc(N, std::vector<Expr>(N));
  for (const auto& s : sections) {
    Bivector push = section_pushforward(lp, s, lam);
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = 0; q < N; ++q)
        acc[p][q] = acc[p][q] + push.comp[p][q];
  }
  Expr inv = Expr::constant(Rational(1, static_cast<long>(sections.size())));
  for (auto& row : acc)
    for (auto& e : row) e = simplify(inv * e);
  return Bivector(lp.patch, std::move(acc));
}

// --- projection ------------------------------------------------------------

SmoothMap projection_map(const LiftedPatch& lp) {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < lp.n(); ++i)
    comps.push_back(Expr::var(lp.coord(i, 0)));
  return SmoothMap(lp.patch, lp.base, std::move(comps));
}

KForm pullback_projection(const LiftedPatch& lp, const KForm& w) {
  return pullback(projection_map(lp), w);
}

VectorField projection_pushforward(const LiftedPatch& lp,
                                   const VectorField& v) {
  require_same_patch(v.patch, lp.patch);
  std::set<std::string> allowed;
  std::map<std::string, Expr> subst;
  for (std::size_t i = 0; i < lp.n(); ++i) {
    allowed.insert(lp.coord(i, 0));
    subst[lp.coord(i, 0)] = Expr::var(lp.base.coord(i));
  }
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < lp.n(); ++i) {
    Expr c = simplify(v.comp[lp.idx(i, 0)]);
    for (const auto& var : free_vars(c))
      if (!allowed.count(var))
        throw NotProjectable("component of " + lp.coord(i, 0) +
                             " depends on fiber coordinate " + var);
    comps.push_back(simplify(substitute(c, subst)));
  }
  return VectorField(lp.base, std::move(comps));
}

// --- augmentation, submanifolds, suspension --------------------------------

namespace {

void require_odd(const LiftedPatch& lp) {
  if (lp.l() % 2 == 0)
    throw OddDimensionRequired("augmentation requires odd algebra dimension");
}

}  // namespace

KForm augment_two_form(const LiftedPatch& lp, const KForm& lifted_omega,
                       std::size_t z_base) {
  require_odd(lp);
  if (z_base >= lp.n()) throw InputError("augmentation coordinate out of range");
  require_same_patch(lifted_omega.patch, lp.patch);
  if (lifted_omega.degree != 2)
    throw InputError("two-form augmentation needs degree 2");
  KForm out = lifted_omega;
  for (std::size_t k = 1; k + 1 < lp.l(); k += 2) {
    // pairs (2,3), (4,5), … in 1-based fiber numbering
    out.add({lp.idx(z_base, k), lp.idx(z_base, k + 1)}, Expr::integer(1));
  }
  return out;
}

KForm augment_one_form(const LiftedPatch& lp, const KForm& lifted_beta,
                       std::size_t z_base) {
  require_odd(lp);
  if (z_base >= lp.n()) throw InputError("augmentation coordinate out of range");
  require_same_patch(lifted_beta.patch, lp.patch);
  if (lifted_beta.degree != 1)
    throw InputError("one-form augmentation needs degree 1");
  KForm out = lifted_beta;
  for (std::size_t k = 1; k + 1 < lp.l(); k += 2)
    out.add({lp.idx(z_base, k + 1)}, Expr::var(lp.coord(z_base, k)));
  return out;
}

Distribution lift_submanifold(const LiftedPatch& lp,
                              const std::vector<std::size_t>& keep) {
  std::vector<VectorField> gens;
  for (std::size_t i : keep) {
    if (i >= lp.n()) throw InputError("submanifold index out of range");
    for (std::size_t k = 0; k < lp.l(); ++k) {
      std::vector<Expr> c(lp.n() * lp.l());
      c[lp.idx(i, k)] = Expr::integer(1);
      gens.emplace_back(lp.patch, std::move(c));
    }
  }
  return Distribution(lp.patch, std::move(gens),
                      static_cast<int>(keep.size() * lp.l()));
}

KForm restrict_form(const KForm& w, const std::vector<std::size_t>& keep_base,
                    const LiftedPatch& lp) {
  require_same_patch(w.patch, lp.patch);
  std::set<std::size_t> kept;
  std::map<std::string, Expr> zeros;
  for (std::size_t i = 0; i < lp.n(); ++i) {
    bool keep = std::find(keep_base.begin(), keep_base.end(), i) !=
                keep_base.end();
    for (std::size_t k = 0; k < lp.l(); ++k) {
      if (keep)
        kept.insert(lp.idx(i, k));
      else
        zeros[lp.coord(i, k)] = Expr();
    }
  }
  KForm out(lp.patch, w.degree);
  for (const auto& [idx, c] : w.comp) {
    bool inside = true;
    for (std::size_t j : idx)
      if (!kept.count(j)) inside = false;
    if (!inside) continue;
    out.add(idx, substitute(c, zeros));
  }
  return out;
}

KForm suspension(const KForm& omega, const KForm& eta) {
  require_same_patch(omega.patch, eta.patch);
  if (omega.degree != 2 || eta.degree != 1)
    throw InputError("suspension takes a 2-form and a 1-form");
  std::vector<std::string> names = omega.patch.coords;
  names.push_back("u");
  Patch ext(std::move(names));
  std::size_t u = ext.dim() - 1;
  KForm out(ext, 2);
  for (const auto& [idx, c] : omega.comp) out.add(idx, c);
  for (const auto& [idx, c] : eta.comp) out.add({idx[0], u}, c);
  return out;
}

}  // namespace weil
