#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "weil/geometry.hpp"

using namespace weil;

namespace {

Patch r2() { return Patch({"x", "y"}); }
Patch r3() { return Patch({"x", "y", "z"}); }

Expr X() { return Expr::var("x"); }
Expr Y() { return Expr::var("y"); }
Expr Z() { return Expr::var("z"); }

// Random sparse polynomial in the patch coordinates, small degree.
Expr random_poly(std::mt19937& rng, const Patch& p, int terms = 3,
                 int max_deg = 2) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> deg(0, max_deg);
  Expr out;
  for (int t = 0; t < terms; ++t) {
    Expr term = Expr::integer(coeff(rng));
    for (const auto& c : p.coords) {
      int d = deg(rng);
      if (d > 0) term = term * Expr::var(c).pow(d);
    }
    out = out + term;
  }
  return simplify(out);
}

VectorField random_field(std::mt19937& rng, const Patch& p) {
  std::vector<Expr> c;
  for (std::size_t i = 0; i < p.dim(); ++i) c.push_back(random_poly(rng, p));
  return VectorField(p, c);
}

KForm random_form(std::mt19937& rng, const Patch& p, int degree) {
  KForm w(p, degree);
  std::function<void(FormIndex, std::size_t)> rec = [&](FormIndex idx,
                                                        std::size_t next) {
    if (static_cast<int>(idx.size()) == degree) {
      w.add(idx, random_poly(rng, p));
      return;
    }
    for (std::size_t j = next; j < p.dim(); ++j) {
      FormIndex e = idx;
      e.push_back(j);
      rec(e, j + 1);
    }
  };
  rec({}, 0);
  return w;
}

bool form_equiv(const KForm& a, const KForm& b) {
  if (a.degree != b.degree) return false;
  std::set<FormIndex> keys;
  for (const auto& [i, c] : a.comp) keys.insert(i);
  for (const auto& [i, c] : b.comp) keys.insert(i);
  for (const auto& k : keys)
    if (!expr_equiv(a.coeff(k), b.coeff(k))) return false;
  return true;
}

}  // namespace

TEST_CASE("exterior derivative basics") {
  // d(x dy) = dx ∧ dy
  KForm w(r2(), 1);
  w.set({1}, X());
  KForm dw = exterior_derivative(w);
  CHECK(dw.coeff({0, 1}).is_one());

  // d(dz + x dy) = dx ∧ dy on R^3
  KForm b(r3(), 1);
  b.set({2}, Expr::integer(1));
  b.set({1}, X());
  KForm db = exterior_derivative(b);
  CHECK(db.coeff({0, 1}).is_one());
  CHECK(db.coeff({0, 2}).is_zero());
  CHECK(db.coeff({1, 2}).is_zero());

  // d(df) = 0 for f = sin(x)·y
  KForm f = KForm::scalar(r2(), sin(X()) * Y());
  CHECK(exterior_derivative(exterior_derivative(f)).is_zero());
}

TEST_CASE("d squared vanishes on random forms") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    for (int deg : {0, 1}) {
      KForm w = random_form(rng, r3(), deg);
      KForm ddw = exterior_derivative(exterior_derivative(w));
      for (const auto& [idx, c] : ddw.comp) CHECK(provably_zero(c));
    }
  }
}

TEST_CASE("wedge algebra") {
  std::mt19937 rng(5);
  KForm a = random_form(rng, r3(), 1);
  KForm b = random_form(rng, r3(), 1);
  KForm c = random_form(rng, r3(), 1);
  // Graded commutativity: a∧b = −b∧a for 1-forms.
  KForm ab = wedge(a, b), ba = wedge(b, a);
  for (const auto& [idx, v] : ab.comp)
    CHECK(expr_equiv(v, simplify(-ba.coeff(idx))));
  // Associativity.
  CHECK(form_equiv(wedge(wedge(a, b), c), wedge(a, wedge(b, c))));
  // Leibniz: d(a∧b) = da∧b − a∧db for 1-forms.
  KForm lhs = exterior_derivative(wedge(a, b));
  KForm rhs = wedge(exterior_derivative(a), b);
  KForm sub = wedge(a, exterior_derivative(b));
  for (const auto& [idx, v] : sub.comp) rhs.add(idx, -v);
  CHECK(form_equiv(lhs, rhs));
}

TEST_CASE("interior product") {
  // i_{∂z}(dz + x dy) = 1
  KForm b(r3(), 1);
  b.set({2}, Expr::integer(1));
  b.set({1}, X());
  VectorField dz(r3(), {Expr(), Expr(), Expr::integer(1)});
  KForm ib = interior_product(dz, b);
  CHECK(ib.coeff({}).is_one());

  // i_X(dx∧dy) = X^x dy − X^y dx
  KForm w(r2(), 2);
  w.set({0, 1}, Expr::integer(1));
  VectorField v(r2(), {X(), Y()});
  KForm iw = interior_product(v, w);
  CHECK(expr_equiv(iw.coeff({1}), X()));
  CHECK(expr_equiv(iw.coeff({0}), simplify(-Y())));
}

TEST_CASE("lie bracket and Jacobi identity") {
  VectorField xdx(r2(), {X(), Expr()});
  VectorField dx(r2(), {Expr::integer(1), Expr()});
  VectorField br = lie_bracket(xdx, dx);
  CHECK(expr_equiv(br.comp[0], Expr::integer(-1)));
  CHECK(br.comp[1].is_zero());

  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    VectorField a = random_field(rng, r3());
    VectorField b = random_field(rng, r3());
    VectorField c = random_field(rng, r3());
    VectorField jac = lie_bracket(a, lie_bracket(b, c));
    VectorField t2 = lie_bracket(b, lie_bracket(c, a));
    VectorField t3 = lie_bracket(c, lie_bracket(a, b));
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(provably_zero(jac.comp[i] + t2.comp[i] + t3.comp[i]));
  }
}

TEST_CASE("Cartan identity on random forms") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    VectorField v = random_field(rng, r3());
    for (int deg : {1, 2}) {
      KForm w = random_form(rng, r3(), deg);
      KForm lie = lie_derivative(v, w);
      KForm cartan = interior_product(v, exterior_derivative(w));
      KForm second = exterior_derivative(interior_product(v, w));
      for (const auto& [idx, c] : second.comp) cartan.add(idx, c);
      CHECK(form_equiv(lie, cartan));
    }
  }
}

TEST_CASE("pullback") {
  // (x,y) ↦ (x, x+y) pulls dx∧dy back to dx∧dy.
  SmoothMap phi(r2(), r2(), {X(), X() + Y()});
  KForm w(r2(), 2);
  w.set({0, 1}, Expr::integer(1));
  KForm pw = pullback(phi, w);
  CHECK(pw.coeff({0, 1}).is_one());

  // Pullback commutes with d on random forms.
  std::mt19937 rng(13);
  SmoothMap psi(r2(), r2(), {X() * Y(), X() + Y() * Y()});
  for (int trial = 0; trial < 5; ++trial) {
    KForm a = random_form(rng, r2(), 1);
    CHECK(form_equiv(exterior_derivative(pullback(psi, a)),
                     pullback(psi, exterior_derivative(a))));
  }

  // Functoriality: (φ∘ψ)* = ψ*∘φ*.
  SmoothMap comp = compose(phi, psi);
  KForm a = random_form(rng, r2(), 1);
  CHECK(form_equiv(pullback(comp, a), pullback(psi, pullback(phi, a))));
}

TEST_CASE("nijenhuis tensor") {
  // Flat J: ∂x ↦ ∂y, ∂y ↦ −∂x.
  Tensor11 flat(r2(), {{Expr(), Expr::integer(-1)}, {Expr::integer(1), Expr()}});
  for (const auto& plane : nijenhuis(flat))
    for (const auto& row : plane)
      for (const auto& e : row) CHECK(e.is_zero());

  // Identity tensor → 0.
  Tensor11 id(r2(), {{Expr::integer(1), Expr()}, {Expr(), Expr::integer(1)}});
  for (const auto& plane : nijenhuis(id))
    for (const auto& row : plane)
      for (const auto& e : row) CHECK(e.is_zero());

  // x-dependent J: J∂x = ∂y, J∂y = −(1+x²)∂x. Oracle: evaluate
  // N(X,Y) = [JX,JY] − J[JX,Y] − J[X,JY] + J²[X,Y] on coordinate fields.
  Expr f = Expr::integer(1) + X().pow(2);
  Tensor11 J(r2(), {{Expr(), simplify(-f)}, {Expr::integer(1), Expr()}});
  auto N = nijenhuis(J);
  auto apply_J = [&](const VectorField& v) {
    std::vector<Expr> c(2);
    for (int i = 0; i < 2; ++i)
      c[i] = simplify(J.comp[i][0] * v.comp[0] + J.comp[i][1] * v.comp[1]);
    return VectorField(r2(), c);
  };
  bool nonzero = false;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      std::vector<Expr> ca(2), cb(2);
      ca[a] = Expr::integer(1);
      cb[b] = Expr::integer(1);
      VectorField ea(r2(), ca), eb(r2(), cb);
      VectorField Ja = apply_J(ea), Jb = apply_J(eb);
      VectorField t1 = lie_bracket(Ja, Jb);
      VectorField t2 = apply_J(lie_bracket(Ja, eb));
      VectorField t3 = apply_J(lie_bracket(ea, Jb));
      VectorField t4 = apply_J(apply_J(lie_bracket(ea, eb)));
      for (std::size_t i = 0; i < 2; ++i) {
        Expr oracle = simplify(t1.comp[i] - t2.comp[i] - t3.comp[i] + t4.comp[i]);
        CHECK(expr_equiv(N[i][a][b], oracle));
        if (!simplify(N[i][a][b]).is_zero()) nonzero = true;
      }
    }
  CHECK(nonzero);
  // Antisymmetry in the lower pair.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        CHECK(expr_equiv(N[i][a][b], simplify(-N[i][b][a])));
}

TEST_CASE("schouten bracket and Jacobi pair") {
  // Constant bivector → [Λ,Λ] = 0.
  Bivector flat(r2(), {{Expr(), Expr::integer(1)}, {Expr::integer(-1), Expr()}});
  for (const auto& plane : schouten_ll(flat))
    for (const auto& row : plane)
      for (const auto& e : row) CHECK(e.is_zero());

  // z-independent Λ: L_{∂z}Λ = 0.
  Bivector lam(r3(), {{Expr(), Expr::integer(1), simplify(-X())},
                      {Expr::integer(-1), Expr(), Expr()},
                      {X(), Expr(), Expr()}});
  VectorField dz(r3(), {Expr(), Expr(), Expr::integer(1)});
  auto ld = lie_derivative_bivector(dz, lam);
  for (const auto& row : ld.comp)
    for (const auto& e : row) CHECK(e.is_zero());

  // Contact-induced Jacobi pair from β = dz + x dy:
  // Λ = ∂x∧(∂y − x∂z), Ξ = ∂z satisfies [Λ,Λ] = 2 Ξ∧Λ.
  auto S = schouten_ll(lam);
  auto W = wedge_vector_bivector(dz, lam);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        CHECK(expr_equiv(S[i][j][k], simplify(Expr::integer(2) * W[i][j][k])));
        // Independent pointwise numeric oracle.
        for (int pt = 0; pt < 10; ++pt) {
          std::map<std::string, double> env{
              {"x", dist(rng)}, {"y", dist(rng)}, {"z", dist(rng)}};
          CHECK(std::abs(eval_double(S[i][j][k], env) -
                         2 * eval_double(W[i][j][k], env)) < 1e-9);
        }
      }
}

TEST_CASE("levi-civita connection") {
  // Euclidean: all Christoffels vanish.
  Metric eu(r2(), {{Expr::integer(1), Expr()}, {Expr(), Expr::integer(1)}});
  Connection flat = levi_civita(eu);
  for (const auto& a : flat.gamma)
    for (const auto& b : a)
      for (const auto& e : b) CHECK(e.is_zero());

  // Split metric 2dx·dy: constant coefficients, flat.
  Metric split(r2(), {{Expr(), Expr::integer(1)}, {Expr::integer(1), Expr()}});
  Connection split_conn = levi_civita(split);
  for (const auto& a : split_conn.gamma)
    for (const auto& b : a)
      for (const auto& e : b) CHECK(e.is_zero());

  // Conformal metric e^{2x}(dx²+dy²).
  Expr e2x = exp(Expr::integer(2) * X());
  Metric g(r2(), {{e2x, Expr()}, {Expr(), e2x}});
  Connection c = levi_civita(g);
  CHECK(expr_equiv(c.gamma[0][0][0], Expr::integer(1)));   // Γ^x_xx = 1
  CHECK(expr_equiv(c.gamma[0][1][1], Expr::integer(-1)));  // Γ^x_yy = −1
  CHECK(expr_equiv(c.gamma[1][0][1], Expr::integer(1)));   // Γ^y_xy = 1
  CHECK(c.torsion_free());

  // Koszul oracle: 2 g(∇_{∂i}∂j, ∂k) = ∂i g_jk + ∂j g_ik − ∂k g_ij.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        Expr lhs;
        for (std::size_t m = 0; m < 2; ++m)
          lhs = lhs + Expr::integer(2) * g.comp[m][k] * c.gamma[m][i][j];
        Expr rhs = differentiate(g.comp[j][k], g.patch.coord(i)) +
                   differentiate(g.comp[i][k], g.patch.coord(j)) -
                   differentiate(g.comp[i][j], g.patch.coord(k));
        CHECK(expr_equiv(lhs, rhs));
      }

  // Metric compatibility: ∇g = 0 in every coordinate direction.
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<Expr> ei(2);
    ei[i] = Expr::integer(1);
    Tensor02 nabla_g = covariant_derivative(c, VectorField(r2(), ei), g);
    for (const auto& row : nabla_g.comp)
      for (const auto& e : row) CHECK(expr_equiv(e, Expr()));
  }
}

TEST_CASE("covariant derivative basics") {
  Patch p = r2();
  std::vector<std::vector<std::vector<Expr>>> zeros(
      2, std::vector<std::vector<Expr>>(2, std::vector<Expr>(2)));
  Connection flat(p, zeros);
  VectorField dx(p, {Expr::integer(1), Expr()});
  VectorField dy(p, {Expr(), Expr::integer(1)});
  VectorField r = covariant_derivative(flat, dx, dy);
  CHECK(r.comp[0].is_zero());
  CHECK(r.comp[1].is_zero());

  // Leibniz over products f·Y.
  Expr f = X() * Y() + Expr::integer(2);
  VectorField fy(p, {Expr(), f});
  VectorField lhs = covariant_derivative(flat, dx, fy);
  // ∇_X(fY) = X(f)Y + f∇_X Y = X(f)∂y.
  CHECK(expr_equiv(lhs.comp[1], differentiate(f, "x")));
}

TEST_CASE("curvature") {
  // Flat connection → zero Riemann tensor.
  std::vector<std::vector<std::vector<Expr>>> zeros(
      2, std::vector<std::vector<Expr>>(2, std::vector<Expr>(2)));
  Connection flat(r2(), zeros);
  for (const auto& a : riemann(flat))
    for (const auto& b : a)
      for (const auto& c : b)
        for (const auto& e : c) CHECK(e.is_zero());

  // e^{2x}(dx²+dy²) is flat (u = e^x turns it into du² + u²dy², polar
  // coordinates): Ricci vanishes identically.
  Expr e2x = exp(Expr::integer(2) * X());
  Metric g(r2(), {{e2x, Expr()}, {Expr(), e2x}});
  Tensor02 ric = ricci(levi_civita(g));
  for (const auto& row : ric.comp)
    for (const auto& e : row) CHECK(expr_equiv(e, Expr()));

  // Hyperbolic half-plane (1/y²)(dx²+dy²): Ric = −g (curvature −1).
  Expr y2 = Y().pow(-2);
  Metric h(r2(), {{y2, Expr()}, {Expr(), y2}});
  Connection hc = levi_civita(h);
  Tensor02 hric = ricci(hc);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(expr_equiv(hric.comp[i][j], simplify(-h.comp[i][j])));
  // Ricci symmetry.
  CHECK(expr_equiv(hric.comp[0][1], hric.comp[1][0]));
}

TEST_CASE("pointwise rank") {
  VectorField a(r3(), {Expr::integer(1), Expr(), Expr()});
  VectorField b(r3(), {Expr(), Expr::integer(1), X()});
  auto rep = pointwise_rank(component_matrix({a, b}), r3());
  CHECK(rep.min_rank == 2);
  CHECK(rep.max_rank == 2);

  KForm w(Patch({"x", "y", "z", "w"}), 2);
  w.set({0, 1}, Expr::integer(1));
  auto rep2 = pointwise_rank(form_matrix(w), w.patch);
  CHECK(rep2.max_rank == 2);

  VectorField c(r3(), {Expr::integer(1), Expr(), Expr()});
  VectorField d(r3(), {X(), Expr(), Expr()});
  auto rep3 = pointwise_rank(component_matrix({c, d}), r3());
  CHECK(rep3.max_rank == 1);
}

TEST_CASE("symbolic inverse") {
  EMatrix m = {{X() + Expr::integer(2), Expr::integer(1)},
               {Expr(), Expr::integer(3)}};
  EMatrix inv = einverse(m);
  // m·inv = Id symbolically.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Expr v;
      for (std::size_t k = 0; k < 2; ++k) v = v + m[i][k] * inv[k][j];
      CHECK(expr_equiv(v, i == j ? Expr::integer(1) : Expr()));
    }
  EMatrix sing = {{X(), X()}, {X(), X()}};
  CHECK_THROWS_AS(einverse(sing), DegenerateMetric);
}

TEST_CASE("graph sections satisfy the interior-product exchange law") {
  // Lemma: for a section S of the product projection p and any Y on the
  // base, S*(i_{S_*Y} θ) = i_Y S*(θ).
  Patch base = r2();
  Patch total({"x", "y", "u"});
  Expr h = X() * X() + Expr::integer(3) * Y();  // graph section u = h(x,y)
  SmoothMap S(base, total, {X(), Y(), h});
  std::mt19937 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    VectorField Yf(base, {random_poly(rng, base), random_poly(rng, base)});
    // S-related extension of Y: fiber-independent components + Y(h) ∂u.
    VectorField SY(total, {Yf.comp[0], Yf.comp[1], Yf.apply(h)});
    for (int deg : {1, 2}) {
      KForm theta = random_form(rng, total, deg);
      KForm lhs = pullback(S, interior_product(SY, theta));
      KForm rhs = interior_product(Yf, pullback(S, theta));
      CHECK(form_equiv(lhs, rhs));
    }
  }
}
