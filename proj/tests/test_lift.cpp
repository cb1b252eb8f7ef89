#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "weil/lift.hpp"

using namespace weil;

namespace {

Expr X() { return Expr::var("x"); }
Expr Y() { return Expr::var("y"); }

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

TEST_CASE("lifted patch naming") {
  Patch r2({"x", "y"});
  LiftedPatch lp = lift_patch(r2, WeilAlgebra::dual());
  CHECK(lp.patch.dim() == 4);
  CHECK(lp.patch.coords ==
        std::vector<std::string>{"x_1", "x_2", "y_1", "y_2"});
  LiftedPatch l9 = lift_patch(Patch({"x", "y", "z"}), make_jet_algebra(2));
  CHECK(l9.patch.dim() == 9);
  CHECK(l9.coord(2, 2) == "z_3");
  // Trivial algebra: lift is the identity in all but name.
  LiftedPatch triv = lift_patch(Patch({"x"}), WeilAlgebra::trivial());
  CHECK(triv.patch.dim() == 1);
}

TEST_CASE("function lifts") {
  Patch r1({"x"});
  for (auto A : {WeilAlgebra::dual(), make_jet_algebra(2)}) {
    LiftedPatch lp = lift_patch(r1, A);
    AValuedFunction fx = lift_function(lp, X());
    for (std::size_t k = 0; k < A.dim(); ++k)
      CHECK(fx.coeff[k].str() == lp.coord(0, k));
  }
  LiftedPatch lp = lift_patch(r1, WeilAlgebra::dual());
  AValuedFunction sq = lift_function(lp, X() * X());
  CHECK(expr_equiv(sq.coeff[0], parse_expr("x_1^2")));
  CHECK(expr_equiv(sq.coeff[1], parse_expr("2*x_1*x_2")));
  AValuedFunction sn = lift_function(lp, sin(X()));
  CHECK(expr_equiv(sn.coeff[0], parse_expr("sin(x_1)")));
  CHECK(expr_equiv(sn.coeff[1], parse_expr("x_2*cos(x_1)")));
}

TEST_CASE("map lifts are functorial") {
  Patch r1({"x"});
  WeilAlgebra A = WeilAlgebra::dual();
  SmoothMap id = SmoothMap::identity(r1);
  SmoothMap lid = lift_map(id, A);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(lid.comp[i].str() == lid.source.coord(i));

  SmoothMap sq(r1, r1, {X() * X()});
  SmoothMap cube(r1, r1, {X() * X() * X()});
  SmoothMap both = compose(sq, cube);  // x ↦ x^6
  SmoothMap lhs = lift_map(both, A);
  SmoothMap rhs = compose(lift_map(sq, A), lift_map(cube, A));
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(expr_equiv(lhs.comp[i], rhs.comp[i]));
}

TEST_CASE("vector field lifts: fixtures") {
  Patch r1({"x"});
  LiftedPatch lp = lift_patch(r1, WeilAlgebra::dual());
  VectorField dx(r1, {Expr::integer(1)});
  VectorField ldx = lift_vector_field(lp, dx);
  CHECK(ldx.comp[0].is_one());
  CHECK(ldx.comp[1].is_zero());

  VectorField xdx(r1, {X()});
  VectorField lxdx = lift_vector_field(lp, xdx);
  CHECK(lxdx.comp[0].str() == "x_1");
  CHECK(lxdx.comp[1].str() == "x_2");
}

TEST_CASE("vector field lifts: Prop XAlift laws on random fields") {
  Patch r2({"x", "y"});
  std::mt19937 rng(31);
  for (auto A : {WeilAlgebra::dual(), make_jet_algebra(2)}) {
    LiftedPatch lp = lift_patch(r2, A);
    for (int trial = 0; trial < 6; ++trial) {
      VectorField x(r2, {random_poly(rng, r2), random_poly(rng, r2)});
      VectorField y(r2, {random_poly(rng, r2), random_poly(rng, r2)});
      VectorField lx = lift_vector_field(lp, x);
      VectorField ly = lift_vector_field(lp, y);

      // Projection: (π̃)_* X^A = X.
      VectorField proj = projection_pushforward(lp, lx);
      for (std::size_t i = 0; i < 2; ++i)
        CHECK(provably_zero(proj.comp[i] - x.comp[i]));

      // Bracket homomorphism: [X^A, Y^A] = [X,Y]^A.
      VectorField lhs = lie_bracket(lx, ly);
      VectorField rhs = lift_vector_field(lp, lie_bracket(x, y));
      for (std::size_t p = 0; p < lp.patch.dim(); ++p)
        CHECK(provably_zero(lhs.comp[p] - rhs.comp[p]));

      // Module law: X^A(f^A) = (Xf)^A componentwise.
      Expr f = random_poly(rng, r2);
      AValuedFunction fa = lift_function(lp, f);
      AValuedFunction xfa = lift_function(lp, x.apply(f));
      for (std::size_t k = 0; k < A.dim(); ++k)
        CHECK(provably_zero(lx.apply(fa.coeff[k]) - xfa.coeff[k]));
    }
  }
}

TEST_CASE("form lifts: dual fixtures") {
  Patch r2({"x", "y"});
  LiftedPatch lp = lift_patch(r2, WeilAlgebra::dual());
  KForm w(r2, 2);
  w.set({0, 1}, Expr::integer(1));

  KForm real = lift_form(lp, w, LinearFunctional::preset(lp.algebra, "real"));
  CHECK(real.coeff({0, 2}).is_one());  // dx_1 ∧ dy_1
  CHECK(real.comp.size() == 1);
  auto rank_real = pointwise_rank(form_matrix(real), lp.patch);
  CHECK(rank_real.max_rank == 2);  // degenerate on the 4-dim patch

  KForm top = lift_form(lp, w, LinearFunctional::preset(lp.algebra, "top"));
  CHECK(top.coeff({0, 3}).is_one());   // dx_1 ∧ dy_2
  CHECK(top.coeff({1, 2}).is_one());   // dx_2 ∧ dy_1
  auto rank_top = pointwise_rank(form_matrix(top), lp.patch);
  CHECK(rank_top.min_rank == 4);

  // Degree 0: lift_form = λ ∘ lift_function.
  Expr f = X() * Y();
  KForm f0 = KForm::scalar(r2, f);
  auto lam = LinearFunctional::preset(lp.algebra, "top");
  KForm lf = lift_form(lp, f0, lam);
  AValuedFunction fa = lift_function(lp, f);
  CHECK(expr_equiv(lf.coeff({}), fa.coeff[1]));
}

TEST_CASE("d commutes with form lifts") {
  Patch r2({"x", "y"});
  std::mt19937 rng(37);
  for (auto A : {WeilAlgebra::dual(), make_jet_algebra(2)}) {
    LiftedPatch lp = lift_patch(r2, A);
    for (const char* preset : {"real", "top", "mixed"}) {
      auto lam = LinearFunctional::preset(lp.algebra, preset);
      for (int deg : {0, 1}) {
        KForm w(r2, deg);
        if (deg == 0) {
          w.set({}, random_poly(rng, r2));
        } else {
          w.set({0}, random_poly(rng, r2));
          w.set({1}, random_poly(rng, r2));
        }
        KForm lhs = exterior_derivative(lift_form(lp, w, lam));
        KForm rhs = lift_form(lp, exterior_derivative(w), lam);
        CHECK(form_equiv(lhs, rhs));
      }
    }
  }
}

TEST_CASE("A-valued wedge compatibility") {
  Patch r2({"x", "y"});
  std::mt19937 rng(41);
  LiftedPatch lp = lift_patch(r2, make_jet_algebra(2));
  for (int trial = 0; trial < 3; ++trial) {
    KForm a(r2, 1), b(r2, 1);
    a.set({0}, random_poly(rng, r2));
    a.set({1}, random_poly(rng, r2));
    b.set({0}, random_poly(rng, r2));
    b.set({1}, random_poly(rng, r2));
    AValuedForm lhs = lift_form_A(lp, wedge(a, b));
    AValuedForm rhs = wedge_A(lp, lift_form_A(lp, a), lift_form_A(lp, b));
    for (std::size_t t = 0; t < lp.l(); ++t) CHECK(form_equiv(lhs[t], rhs[t]));
  }
}

TEST_CASE("interior product compatibility") {
  Patch r2({"x", "y"});
  std::mt19937 rng(43);
  LiftedPatch lp = lift_patch(r2, WeilAlgebra::dual());
  for (const char* preset : {"real", "top"}) {
    auto lam = LinearFunctional::preset(lp.algebra, preset);
    for (int trial = 0; trial < 3; ++trial) {
      VectorField x(r2, {random_poly(rng, r2), random_poly(rng, r2)});
      KForm w(r2, 2);
      w.set({0, 1}, random_poly(rng, r2));
      KForm lhs = interior_product(lift_vector_field(lp, x),
                                   lift_form(lp, w, lam));
      KForm rhs = lift_form(lp, interior_product(x, w), lam);
      CHECK(form_equiv(lhs, rhs));
    }
  }
}

TEST_CASE("metric lifts") {
  Patch r1({"x"});
  LiftedPatch lp = lift_patch(r1, WeilAlgebra::dual());
  Metric eu(r1, {{Expr::integer(1)}});
  Metric top = lift_metric(lp, eu, LinearFunctional::preset(lp.algebra, "top"));
  CHECK(top.comp[0][0].is_zero());
  CHECK(top.comp[0][1].is_one());
  CHECK(top.comp[1][0].is_one());
  CHECK(top.comp[1][1].is_zero());
  Metric real = lift_metric(lp, eu, LinearFunctional::preset(lp.algebra, "real"));
  CHECK(real.comp[0][0].is_one());
  CHECK(real.comp[1][1].is_zero());
}

TEST_CASE("structured lifted metric inverse") {
  Patch r2({"x", "y"});
  LiftedPatch lp = lift_patch(r2, WeilAlgebra::dual());
  auto lam = LinearFunctional::preset(lp.algebra, "top");
  Expr e2x = exp(Expr::integer(2) * X());
  Metric g(r2, {{e2x, Expr()}, {Expr(), e2x}});
  Metric G = lift_metric(lp, g, lam);
  EMatrix Ginv = lifted_metric_inverse(lp, einverse(g.comp), lam);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Expr v;
      for (std::size_t k = 0; k < 4; ++k) v = v + Ginv[i][k] * G.comp[k][j];
      CHECK(expr_equiv(v, i == j ? Expr::integer(1) : Expr()));
    }
}

TEST_CASE("tensor11 lifts") {
  Patch r2({"x", "y"});
  LiftedPatch lp = lift_patch(r2, WeilAlgebra::dual());
  Tensor11 J(r2, {{Expr(), Expr::integer(-1)}, {Expr::integer(1), Expr()}});
  Tensor11 JA = lift_tensor11(lp, J);
  // (J^A)^2 = −Id.
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Expr v;
      for (std::size_t k = 0; k < 4; ++k)
        v = v + JA.comp[i][k] * JA.comp[k][j];
      CHECK(expr_equiv(v, i == j ? Expr::integer(-1) : Expr()));
    }
  // (JX)^A = J^A X^A on random fields, x-dependent J too.
  std::mt19937 rng(47);
  Tensor11 Jx(r2, {{Expr(), simplify(-(Expr::integer(1) + X() * X()))},
                   {Expr::integer(1), Expr()}});
  Tensor11 JxA = lift_tensor11(lp, Jx);
  for (int trial = 0; trial < 4; ++trial) {
    VectorField v(r2, {random_poly(rng, r2), random_poly(rng, r2)});
    std::vector<Expr> jv(2);
    for (int i = 0; i < 2; ++i)
      jv[i] = simplify(Jx.comp[i][0] * v.comp[0] + Jx.comp[i][1] * v.comp[1]);
    VectorField lhs = lift_vector_field(lp, VectorField(r2, jv));
    VectorField lv = lift_vector_field(lp, v);
    for (std::size_t p = 0; p < 4; ++p) {
      Expr rhs;
      for (std::size_t q = 0; q < 4; ++q)
        rhs = rhs + JxA.comp[p][q] * lv.comp[q];
      CHECK(expr_equiv(lhs.comp[p], rhs));
    }
  }
}

TEST_CASE("connection lifts and Theorem B compatibility") {
  Patch r2({"x", "y"});
  LiftedPatch lp = lift_patch(r2, WeilAlgebra::dual());
  auto lam = LinearFunctional::preset(lp.algebra, "top");

  // Flat lifts to flat.
  Metric eu(r2, {{Expr::integer(1), Expr()}, {Expr(), Expr::integer(1)}});
  Connection flat_lift = lift_connection(lp, levi_civita(eu));
  for (const auto& a : flat_lift.gamma)
    for (const auto& b : a)
      for (const auto& e : b) CHECK(e.is_zero());
  // ... and agrees with the Levi-Civita connection of the lifted metric.
  Connection eu_lc = levi_civita(lift_metric(lp, eu, lam));
  for (const auto& a : eu_lc.gamma)
    for (const auto& b : a)
      for (const auto& e : b) CHECK(simplify(e).is_zero());

  // Curved case: levi_civita(lift_metric(g)) = lift_connection(levi_civita(g)).
  Expr e2x = exp(Expr::integer(2) * X());
  Metric g(r2, {{e2x, Expr()}, {Expr(), e2x}});
  Connection lhs = levi_civita(lift_metric(lp, g, lam),
                               lifted_metric_inverse(lp, einverse(g.comp), lam));
  Connection rhs = lift_connection(lp, levi_civita(g));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k)
        CHECK(expr_equiv(lhs.gamma[i][j][k], rhs.gamma[i][j][k]));
}

TEST_CASE("sections and averaged lifts") {
  Patch r1({"x"});
  LiftedPatch lp = lift_patch(r1, WeilAlgebra::dual());
  SmoothMap alpha = canonical_section(lp);
  CHECK(alpha.comp[0].str() == "x");
  CHECK(alpha.comp[1].is_zero());
  // α-pullback of the real lift of a form recovers the form.
  KForm w(r1, 1);
  w.set({0}, X() * X());
  KForm wr = lift_form(lp, w, LinearFunctional::preset(lp.algebra, "real"));
  CHECK(form_equiv(pullback(alpha, wr), w));

  auto sections = basis_sections(lp);
  REQUIRE(sections.size() == 2);
  CHECK(sections[1].comp[1].str() == "x");

  // Averaged lift of ∂x: ∂x_1 + ½ ∂x_2.
  VectorField dx(r1, {Expr::integer(1)});
  VectorField avg = averaged_lift_vector(lp, dx, sections);
  CHECK(expr_equiv(avg.comp[0], Expr::integer(1)));
  CHECK(expr_equiv(avg.comp[1], Expr::constant(Rational(1, 2))));

  // x∂x: averaged = x_1∂x_1 + ½x_1∂x_2 ≠ canonical = x_1∂x_1 + x_2∂x_2.
  VectorField xdx(r1, {X()});
  VectorField axdx = averaged_lift_vector(lp, xdx, sections);
  CHECK(expr_equiv(axdx.comp[0], parse_expr("x_1")));
  CHECK(expr_equiv(axdx.comp[1], parse_expr("x_1/2")));
  VectorField cxdx = lift_vector_field(lp, xdx);
  CHECK_FALSE(expr_equiv(axdx.comp[1], cxdx.comp[1]));

  // Both project to X.
  for (const auto& v : {axdx, cxdx}) {
    VectorField proj = projection_pushforward(lp, v);
    CHECK(expr_equiv(proj.comp[0], X()));
  }

  // With an affine section family and fiber-constant extension the averaged
  // lift is S_*X = Σ_j X^j(x_{·,1}) V_j for constant directions V_j with
  // V_j(x^{m,1}) = δ^m_j, so it preserves brackets: check that here rather
  // than the failure one might expect.
  VectorField ady = averaged_lift_vector(lp, dx, sections);
  VectorField bracket_avg = lie_bracket(axdx, ady);
  VectorField avg_bracket =
      averaged_lift_vector(lp, lie_bracket(xdx, dx), sections);
  for (std::size_t p = 0; p < 2; ++p)
    CHECK(expr_equiv(bracket_avg.comp[p], avg_bracket.comp[p]));

  // Non-affine sections are rejected.
  SmoothMap bad(r1, lp.patch, {X(), X() * X()});
  CHECK_THROWS_AS(section_pushforward(lp, bad, dx), NonAffineSection);
}

TEST_CASE("projection pushforward failure modes") {
  Patch r1({"x"});
  LiftedPatch lp = lift_patch(r1, WeilAlgebra::dual());
  VectorField vert(lp.patch, {Expr(), Expr::integer(1)});
  VectorField pv = projection_pushforward(lp, vert);
  CHECK(pv.comp[0].is_zero());
  VectorField badf(lp.patch, {Expr::var("x_2"), Expr()});
  CHECK_THROWS_AS(projection_pushforward(lp, badf), NotProjectable);
}

TEST_CASE("pullback by projection") {
  Patch r2({"x", "y"});
  LiftedPatch lp = lift_patch(r2, WeilAlgebra::dual());
  KForm w(r2, 2);
  w.set({0, 1}, Expr::integer(1));
  KForm pw = pullback_projection(lp, w);
  KForm rw = lift_form(lp, w, LinearFunctional::preset(lp.algebra, "real"));
  CHECK(form_equiv(pw, rw));
  // Commutes with d.
  KForm a(r2, 1);
  a.set({0}, X() * Y());
  CHECK(form_equiv(exterior_derivative(pullback_projection(lp, a)),
                   pullback_projection(lp, exterior_derivative(a))));
}

TEST_CASE("weighted lifts") {
  Patch r3({"x", "y", "z"});
  LiftedPatch lp = lift_patch(r3, WeilAlgebra::dual());
  VectorField dz(r3, {Expr(), Expr(), Expr::integer(1)});
  // Weight a_2 (the nilpotent): ∂z^{(ε)} = ∂z_2.
  VectorField w = weighted_lift_vector(lp, dz, {Rational(0), Rational(1)});
  for (std::size_t p = 0; p < lp.patch.dim(); ++p)
    CHECK(w.comp[p].is_zero() == (p != lp.idx(2, 1)));
  CHECK(w.comp[lp.idx(2, 1)].is_one());
}

TEST_CASE("augmentation") {
  Patch r3({"x", "y", "z"});
  LiftedPatch even = lift_patch(r3, WeilAlgebra::dual());
  KForm w2(even.patch, 2);
  CHECK_THROWS_AS(augment_two_form(even, w2, 2), OddDimensionRequired);

  LiftedPatch lp = lift_patch(r3, make_jet_algebra(2));
  KForm base(r3, 2);
  base.set({0, 1}, Expr::integer(1));
  QVector vals{1, 0, 1};
  LinearFunctional lam(lp.algebra, vals);
  KForm lifted = lift_form(lp, base, lam);
  KForm aug = augment_two_form(lp, lifted, 2);
  // σ adds dz_2 ∧ dz_3.
  CHECK(aug.coeff({lp.idx(2, 1), lp.idx(2, 2)}).is_one());
  CHECK(exterior_derivative(aug).is_zero());
  // Augmented rank on the 9-dim patch: 8 (kernel only along z_1).
  auto rep = pointwise_rank(form_matrix(aug), lp.patch);
  CHECK(rep.min_rank == 8);

  KForm beta(r3, 1);
  beta.set({2}, Expr::integer(1));
  beta.set({1}, X());
  KForm lbeta = lift_form(lp, beta, lam);
  KForm abeta = augment_one_form(lp, lbeta, 2);
  CHECK(expr_equiv(abeta.coeff({lp.idx(2, 2)}) -
                       lbeta.coeff({lp.idx(2, 2)}),
                   Expr::var(lp.coord(2, 1))));
}

TEST_CASE("lifted Lagrangian subspaces") {
  Patch r2({"x", "y"});
  for (auto spec : std::vector<std::pair<WeilAlgebra, const char*>>{
           {WeilAlgebra::dual(), "top"}, {make_jet_algebra(2), "mixed"}}) {
    LiftedPatch lp = lift_patch(r2, spec.first);
    auto lam = LinearFunctional::preset(lp.algebra, spec.second);
    KForm w(r2, 2);
    w.set({0, 1}, Expr::integer(1));
    KForm lifted = lift_form(lp, w, lam);
    Distribution sub = lift_submanifold(lp, {0});
    CHECK(sub.generators.size() == lp.l());
    KForm restricted = restrict_form(lifted, {0}, lp);
    CHECK(restricted.is_zero());
  }
}

TEST_CASE("suspension") {
  Patch r3({"x", "y", "z"});
  KForm w(r3, 2);
  w.set({0, 1}, Expr::integer(1));
  KForm eta(r3, 1);
  eta.set({2}, Expr::integer(1));
  KForm s = suspension(w, eta);
  CHECK(s.patch.dim() == 4);
  CHECK(s.coeff({0, 1}).is_one());
  CHECK(s.coeff({2, 3}).is_one());
  CHECK(exterior_derivative(s).is_zero());
  auto rep = pointwise_rank(form_matrix(s), s.patch);
  CHECK(rep.min_rank == 4);
}
