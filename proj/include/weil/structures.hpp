#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weil/lift.hpp"
#include "weil/report.hpp"

namespace weil {

// Result of solving the Reeb equations. When the coefficient matrix is not
// symbolically solvable the field is absent and only sampled residuals of
// the defining equations are reported.
struct ReebSolution {
  std::optional<VectorField> xi;
  bool exact = false;       // solved by exact symbolic elimination
  int kernel_dim = 0;       // solve-kernel dimension; 0 = unique
  double max_residual = 0;  // defining-equation residual (samples or 0)
  int samples_used = 0;
};

struct SignatureReport {
  int positive = 0, negative = 0, zero = 0;
  bool consistent = true;  // same counts at every sample
  int samples_used = 0;
};

// --- verifiers (one per structure kind) ------------------------------------

VerificationReport verify_symplectic(const KForm& omega,
                                     const SamplePolicy& policy = {});

VerificationReport verify_contact(const KForm& beta,
                                  const SamplePolicy& policy = {});
ReebSolution reeb_contact(const KForm& beta, const SamplePolicy& policy = {});

VerificationReport verify_cosymplectic(const KForm& omega, const KForm& eta,
                                       const SamplePolicy& policy = {});
ReebSolution reeb_cosymplectic(const KForm& omega, const KForm& eta,
                               const SamplePolicy& policy = {});

VerificationReport verify_lcs(const KForm& omega, const KForm& theta,
                              const SamplePolicy& policy = {});
VerificationReport verify_lcc(const KForm& omega, const KForm& eta,
                              const KForm& theta,
                              const SamplePolicy& policy = {});

// Signature is reported; positive-definiteness is a check, not a crash.
VerificationReport verify_riemannian(const Metric& g,
                                     SignatureReport* signature = nullptr,
                                     const SamplePolicy& policy = {});

// check_nabla_j opts into the covariant-constancy check (needs the
// Levi-Civita connection; supply g_inv beyond dimension 4).
VerificationReport verify_kahler(const Metric& g, const KForm& omega,
                                 const Tensor11& j, bool check_nabla_j = false,
                                 const EMatrix* g_inv = nullptr,
                                 const SamplePolicy& policy = {});

VerificationReport verify_sasakian(const Metric& g, const KForm& eta,
                                   const VectorField& xi, const Tensor11& phi,
                                   const EMatrix* g_inv = nullptr,
                                   const SamplePolicy& policy = {});

VerificationReport verify_jacobi(const Bivector& lambda, const VectorField& xi,
                                 const SamplePolicy& policy = {});

VerificationReport verify_walker(const Metric& g, const Distribution& d,
                                 const EMatrix* g_inv = nullptr,
                                 const SamplePolicy& policy = {});

VerificationReport verify_bracket_generating(const Distribution& d,
                                             int depth_cap = 4,
                                             const SamplePolicy& policy = {});

// Sign law det J(φ^A) = (det Jφ ∘ π)^l, checked symbolically with a sampled
// local-diffeo precondition. Throws SingularJacobian when a sample lands on
// a singular point of φ.
VerificationReport verify_orientation_lift(const SmoothMap& phi,
                                           const WeilAlgebra& algebra,
                                           const SamplePolicy& policy = {});

// --- Riemannian side reports -----------------------------------------------

VerificationReport killing_check(const VectorField& x, const Metric& g);

// Geodesic equation for the curve with the given components (expressions in
// `param`) under the connection, checked symbolically.
VerificationReport geodesic_check(const Connection& c,
                                  const std::vector<Expr>& curve,
                                  const std::string& param);

struct EinsteinReport {
  double lambda = 0;    // least-squares fit of Ric = λ g at samples
  double residual = 0;  // max |Ric − λ g| entry over samples
  int samples_used = 0;
};
EinsteinReport einstein_report(const Metric& g, const EMatrix* g_inv = nullptr,
                               const SamplePolicy& policy = {});

// dθ = 0 iff d(θ^λ) = 0, both sides checked.
VerificationReport lee_closedness(const KForm& theta, const KForm& lifted_theta,
                                  const SamplePolicy& policy = {});

// --- structure manifests and the lift dispatch -----------------------------

// Ingredient bundle for one structure on one patch. Which fields are
// populated depends on `kind`.
struct StructureManifest {
  std::string kind;  // symplectic | contact | cosymplectic | lcs | lcc |
                     // riemannian | kahler | sasakian | jacobi | walker |
                     // subriemannian | orientation
  Patch patch;
  std::optional<KForm> omega, beta, eta, theta;
  std::optional<Metric> g;
  std::optional<Tensor11> J;
  std::optional<VectorField> xi;
  std::optional<Bivector> Lambda;
  std::optional<VectorField> Xi;
  std::optional<Distribution> dist;
  std::optional<SmoothMap> map;
  std::optional<KForm> volume;
};

// Runs the kind's verifier on the base structure.
VerificationReport verify_structure(const StructureManifest& m,
                                    const SamplePolicy& policy = {});

struct LiftConfig {
  WeilAlgebra algebra = WeilAlgebra::dual();
  QVector lambda_values;         // empty = "top" preset
  bool augment = true;           // odd-l matching for contact/cosymplectic
  std::size_t z_base = SIZE_MAX; // distinguished coordinate; default last
  std::vector<SmoothMap> sections;  // empty = diagonal-affine default
  int depth_cap = 4;
  SamplePolicy policy;
};

// The executable theorem: lifted ingredients plus the re-run verifier
// report. Nothing is asserted; failures are recorded.
struct LiftOutcome {
  LiftedPatch lp;
  StructureManifest lifted;
  VerificationReport report;
  std::optional<ReebSolution> reeb;
  std::vector<std::string> notes;
};

LiftOutcome lift_structure(const StructureManifest& m, const LiftConfig& cfg);

// Primitive of a closed polynomial 1-form by path integration along the
// coordinate axes; nullopt when a component is not polynomial in the
// integration variable.
std::optional<Expr> potential(const KForm& theta);

// Seeded sample points of a patch (shared by the verifiers).
std::vector<std::map<std::string, double>> sample_points(
    const Patch& patch, const SamplePolicy& policy);

}  // namespace weil
