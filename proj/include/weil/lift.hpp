#pragma once

#include <string>
#include <vector>

#include "weil/algebra.hpp"
#include "weil/eval.hpp"
#include "weil/geometry.hpp"

namespace weil {

// The Weil bundle of a coordinate patch: for dim-n base and dim-l algebra,
// an n·l-dimensional patch with coordinates x^{i,k} named `<base>_<k>`
// (k 1-based, i outer / k inner). x^{i,1} is the base coordinate of the
// bundle projection.
struct LiftedPatch {
  Patch base;
  WeilAlgebra algebra;
  Patch patch;  // the lifted coordinates

  std::size_t n() const { return base.dim(); }
  std::size_t l() const { return algebra.dim(); }

  // Flat index of x^{i,k} with 0-based i and k.
  std::size_t idx(std::size_t i, std::size_t k) const { return i * l() + k; }
  const std::string& coord(std::size_t i, std::size_t k) const {
    return patch.coord(idx(i, k));
  }
};

LiftedPatch lift_patch(const Patch& base, const WeilAlgebra& algebra);

// A-valued function on the lifted patch: the a_k-coefficients of f^A.
struct AValuedFunction {
  std::vector<Expr> coeff;  // l entries, fields on the lifted patch
};

// A-valued k-form: the a_t-coefficient forms of ω^A on the lifted patch.
using AValuedForm = std::vector<KForm>;

// The A-point environment: x^i ↦ Σ_k x^{i,k} a_k, realizing evaluation of
// expressions as the algebra homomorphism ζ.
std::map<std::string, WeilElement<Expr>> a_point_env(const LiftedPatch& lp);

AValuedFunction lift_function(const LiftedPatch& lp, const Expr& f);

// Componentwise lift of a map; both patches lifted over the same algebra.
SmoothMap lift_map(const SmoothMap& phi, const WeilAlgebra& algebra);

// Canonical (complete) lift X^A = Σ_{i,k} [X^i]^A_k ∂_{x^{i,k}}.
VectorField lift_vector_field(const LiftedPatch& lp, const VectorField& x);

// Basis-weighted lift X^{(a)} with components [a·(X^i)^A]_k, used for
// lifted distribution generators and rigging fields.
VectorField weighted_lift_vector(const LiftedPatch& lp, const VectorField& x,
                                 const QVector& weight);

AValuedForm lift_form_A(const LiftedPatch& lp, const KForm& w);
KForm lift_form(const LiftedPatch& lp, const KForm& w,
                const LinearFunctional& lam);

// A-valued wedge of A-valued forms (coefficient arrays multiplied in A).
AValuedForm wedge_A(const LiftedPatch& lp, const AValuedForm& a,
                    const AValuedForm& b);

// g^λ((i,k),(j,m)) = λ((g_ij)^A a_k a_m).
Metric lift_metric(const LiftedPatch& lp, const Metric& g,
                   const LinearFunctional& lam);

// Exact inverse of the lifted metric from a symbolic inverse of the base
// metric: block (i,j) equals M((g^{ij})^A)·B_λ^{-1}, where M(x) is the
// multiplication operator of x on the algebra. Requires nondegenerate λ.
EMatrix lifted_metric_inverse(const LiftedPatch& lp, const EMatrix& g_inv_base,
                              const LinearFunctional& lam);

// J^A((i,k),(j,m)) = [(J^i_j)^A · a_m]_k, so that (JX)^A = J^A X^A.
Tensor11 lift_tensor11(const LiftedPatch& lp, const Tensor11& j);

// Λ^λ((i,k),(j,m)) = Σ_t [(Λ^{ij})^A]_t (M(a_t) B_λ^{-1})_{km}; for constant
// Λ this is Λ ⊗ B^{-1}, the inverse construction to lift_metric.
Bivector lift_bivector(const LiftedPatch& lp, const Bivector& lam_bv,
                       const LinearFunctional& lam);

// Γ^A with Γ^{(r,s)}_{(i,k)(j,m)} = [(Γ^r_{ij})^A a_k a_m]_s.
Connection lift_connection(const LiftedPatch& lp, const Connection& c);

// --- sections and averaged lifts ------------------------------------------

// α: x^{i,1} = x^i, other fiber coordinates 0.
SmoothMap canonical_section(const LiftedPatch& lp);

// Default diagonal-affine family: S_1 = α; S_j (j ≥ 2) additionally sets
// x^{i,j} = x^i.
std::vector<SmoothMap> basis_sections(const LiftedPatch& lp);

// (S)_*X along the image, extended fiber-constantly. Throws
// NonAffineSection unless S is affine in the base coordinates.
VectorField section_pushforward(const LiftedPatch& lp, const SmoothMap& s,
                                const VectorField& x);
Bivector section_pushforward(const LiftedPatch& lp, const SmoothMap& s,
                             const Bivector& lam);

VectorField averaged_lift_vector(const LiftedPatch& lp, const VectorField& x,
                                 const std::vector<SmoothMap>& sections);
Bivector averaged_lift_bivector(const LiftedPatch& lp, const Bivector& lam,
                                const std::vector<SmoothMap>& sections);

// --- projection ------------------------------------------------------------

// The bundle projection as a map (x^{i,k}) ↦ (x^{i,1}).
SmoothMap projection_map(const LiftedPatch& lp);

KForm pullback_projection(const LiftedPatch& lp, const KForm& w);

// Pushforward along the projection; defined only when the k=1 components
// depend on the x^{·,1} coordinates alone.
VectorField projection_pushforward(const LiftedPatch& lp,
                                   const VectorField& v);

// --- augmentation, submanifolds, suspension --------------------------------

// Adds σ = Σ dz_{2r} ∧ dz_{2r+1} over adjacent pairs (2,3),(4,5),… of the
// fiber coordinates of the distinguished base coordinate z (index z_base),
// leaving z_1 free for the Reeb pairing. Requires odd l.
KForm augment_two_form(const LiftedPatch& lp, const KForm& lifted_omega,
                       std::size_t z_base);

// Contact variant: adds Σ z_{2r} dz_{2r+1}, so dβ gains the matching σ.
KForm augment_one_form(const LiftedPatch& lp, const KForm& lifted_beta,
                       std::size_t z_base);

// Lift of the coordinate subspace {x^i = 0 : i ∉ keep}: the spanning
// coordinate fields of {x^{i,k} = 0 : i ∉ keep}.
Distribution lift_submanifold(const LiftedPatch& lp,
                              const std::vector<std::size_t>& keep);

// Restriction of a form to the coordinate subspace spanned by `keep`
// lifted indices: drops terms with other indices, zeroes other coords.
KForm restrict_form(const KForm& w, const std::vector<std::size_t>& keep_base,
                    const LiftedPatch& lp);

// p*(ω) + p*(η) ∧ du on patch × R (new coordinate `u`).
KForm suspension(const KForm& omega, const KForm& eta);

}  // namespace weil
