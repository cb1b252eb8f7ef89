#pragma once

#include <map>
#include <string>
#include <vector>

#include "weil/errors.hpp"
#include "weil/expr.hpp"

namespace weil {

// A coordinate patch: an open piece of R^n with named coordinates. All
// tensor fields below live on a patch and store symbolic components.
struct Patch {
  std::vector<std::string> coords;

  Patch() = default;
  explicit Patch(std::vector<std::string> names);

  std::size_t dim() const { return coords.size(); }
  const std::string& coord(std::size_t i) const { return coords.at(i); }

  bool operator==(const Patch& other) const { return coords == other.coords; }
  bool operator!=(const Patch& other) const { return !(*this == other); }
};

void require_same_patch(const Patch& a, const Patch& b);

struct VectorField {
  Patch patch;
  std::vector<Expr> comp;

  VectorField() = default;
  VectorField(Patch p, std::vector<Expr> c);

  Expr apply(const Expr& f) const;  // X(f) = sum X^i df/dx^i
};

// Strictly increasing tuple of coordinate indices.
using FormIndex = std::vector<std::size_t>;

// Differential k-form; only strictly increasing index tuples are stored
// and zero coefficients are dropped. Degree 0 is a scalar field with the
// empty tuple as its only key.
struct KForm {
  Patch patch;
  int degree = 0;
  std::map<FormIndex, Expr> comp;

  KForm() = default;
  KForm(Patch p, int k) : patch(std::move(p)), degree(k) {}

  static KForm scalar(Patch p, Expr f);

  Expr coeff(const FormIndex& idx) const;
  void set(const FormIndex& idx, const Expr& value);  // simplifies, drops 0
  void add(const FormIndex& idx, const Expr& value);

  bool is_zero() const { return comp.empty(); }
};

// Symmetric (0,2)-tensor; also used for general bilinear forms.
struct Metric {
  Patch patch;
  std::vector<std::vector<Expr>> comp;

  Metric() = default;
  Metric(Patch p, std::vector<std::vector<Expr>> c);
};

using Tensor02 = Metric;

// (1,1)-tensor; comp[i][j] is the output-i component of J(∂_j).
struct Tensor11 {
  Patch patch;
  std::vector<std::vector<Expr>> comp;

  Tensor11() = default;
  Tensor11(Patch p, std::vector<std::vector<Expr>> c);
};

// Antisymmetric (2,0)-tensor Λ^{ij}.
struct Bivector {
  Patch patch;
  std::vector<std::vector<Expr>> comp;

  Bivector() = default;
  Bivector(Patch p, std::vector<std::vector<Expr>> c);
};

// Linear connection via Christoffel symbols gamma[i][j][k] = Γ^i_{jk}.
struct Connection {
  Patch patch;
  std::vector<std::vector<std::vector<Expr>>> gamma;

  Connection() = default;
  Connection(Patch p, std::vector<std::vector<std::vector<Expr>>> g);

  bool torsion_free(const SamplePolicy& policy = {}) const;
};

struct Distribution {
  Patch patch;
  std::vector<VectorField> generators;
  int rank = 0;

  Distribution() = default;
  Distribution(Patch p, std::vector<VectorField> gens, int r);
};

// Map between patches, written in coordinates: target coord expressions
// in the source coordinates.
struct SmoothMap {
  Patch source, target;
  std::vector<Expr> comp;

  SmoothMap() = default;
  SmoothMap(Patch src, Patch tgt, std::vector<Expr> c);

  static SmoothMap identity(const Patch& p);
  Expr pull(const Expr& f) const;  // f ∘ φ
};

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);

// --- exterior calculus -----------------------------------------------------

KForm exterior_derivative(const KForm& w);
KForm wedge(const KForm& a, const KForm& b);
KForm interior_product(const VectorField& x, const KForm& w);
KForm pullback(const SmoothMap& phi, const KForm& w);

// ω^p (wedge power).
KForm wedge_power(const KForm& w, int p);

// --- Lie calculus ----------------------------------------------------------

VectorField lie_bracket(const VectorField& x, const VectorField& y);
KForm lie_derivative(const VectorField& x, const KForm& w);  // Cartan
Tensor02 lie_derivative(const VectorField& x, const Tensor02& t);
Tensor11 lie_derivative(const VectorField& x, const Tensor11& t);
Bivector lie_derivative_bivector(const VectorField& x, const Bivector& lam);

// Nijenhuis tensor N^i_{jk}, antisymmetric in (j,k).
std::vector<std::vector<std::vector<Expr>>> nijenhuis(const Tensor11& j);

// Schouten–Nijenhuis bracket [Λ,Λ]^{ijk}; convention
//   [Λ,Λ]^{ijk} = 2 Σ_m (Λ^{mi}∂_mΛ^{jk} + Λ^{mj}∂_mΛ^{ki} + Λ^{mk}∂_mΛ^{ij}).
std::vector<std::vector<std::vector<Expr>>> schouten_ll(const Bivector& lam);

// Ξ ∧ Λ as a 3-vector: (Ξ∧Λ)^{ijk} = Ξ^iΛ^{jk} + Ξ^jΛ^{ki} + Ξ^kΛ^{ij}.
std::vector<std::vector<std::vector<Expr>>> wedge_vector_bivector(
    const VectorField& xi, const Bivector& lam);

// --- symbolic matrices -----------------------------------------------------

using EMatrix = std::vector<std::vector<Expr>>;

Expr edet(const EMatrix& m);
// Adjugate inverse; intended for n <= 4 (symbolic blow-up beyond).
// Throws DegenerateMetric when the determinant is provably zero.
EMatrix einverse(const EMatrix& m);

// --- Riemannian operators --------------------------------------------------

// Levi-Civita connection by the Koszul/Christoffel formula. The metric
// inverse is computed by adjugate for dim <= 4; beyond that a precomputed
// inverse must be supplied.
Connection levi_civita(const Metric& g);
Connection levi_civita(const Metric& g, const EMatrix& g_inv);

VectorField covariant_derivative(const Connection& c, const VectorField& x,
                                 const VectorField& y);
Tensor02 covariant_derivative(const Connection& c, const VectorField& x,
                              const Tensor02& t);
Tensor11 covariant_derivative(const Connection& c, const VectorField& x,
                              const Tensor11& t);

// R^i_{jkl} = ∂_kΓ^i_{lj} − ∂_lΓ^i_{kj} + Γ^i_{km}Γ^m_{lj} − Γ^i_{lm}Γ^m_{kj}
std::vector<std::vector<std::vector<std::vector<Expr>>>> riemann(
    const Connection& c);
Tensor02 ricci(const Connection& c);

// --- sampling utilities ----------------------------------------------------

struct RankReport {
  int min_rank = 0;
  int max_rank = 0;
  int samples_used = 0;
};

// Numeric rank of a symbolic matrix at seeded sample points of the patch.
RankReport pointwise_rank(const EMatrix& m, const Patch& patch,
                          const SamplePolicy& policy = {});

// Component matrix of a list of vector fields (rows) for rank tests.
EMatrix component_matrix(const std::vector<VectorField>& fields);

// Component matrix of a 2-form (antisymmetric n×n).
EMatrix form_matrix(const KForm& w);

// Numeric rank of a double matrix with tolerance.
int numeric_rank(std::vector<std::vector<double>> m, double tol);

}  // namespace weil
