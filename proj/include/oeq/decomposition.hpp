#pragma once

#include <vector>

#include "oeq/equation.hpp"
#include "oeq/linalg.hpp"

namespace oeq {

// Default relative tolerance for residual acceptance, fit acceptance and the
// adjoint identity check.
inline constexpr double kDefaultTol = 1e-8;
// Absolute tolerance on the section identities and subspace containment
// carried by a valid certificate.
inline constexpr double kCertTol = 1e-9;

// Structure certificate for a solution pair of the orthogonality equation.
//
// Coordinate conventions (used consistently across the toolkit):
//  * span / degenerate are Euclidean-orthonormal bases in ambient codomain
//    coordinates.
//  * Dual vectors of the span are stored as their value rows against the
//    span basis, so the span and its dual pair through the identity gram;
//    the same convention holds for the quotient by the degenerate part.
//  * Quotient coordinates refer to the canonical representative basis
//    returned by quotient_representatives().
//  * core maps the domain (under e_pairing) onto quotient coordinates.
//  * projection_section (phi) takes quotient coordinates to ambient points
//    of the span; it is a right inverse of the quotient projection.
//  * restriction_section (psi) takes span-dual value rows to ambient dual
//    vectors; restricting its output to the span gives back the input.
//
// The certified factorisation: f = phi . core and
// g = psi . inject . core_adjoint^{-1}, where inject re-reads a quotient
// dual vector as a span dual vector vanishing on the degenerate part.
struct Decomposition {
  Pairing e_pairing = Pairing::standard(0);
  Pairing f_pairing = Pairing::standard(0);
  Subspace span = Subspace::zero(0);        // closure of the forward map's range
  Subspace degenerate = Subspace::zero(0);  // directions invisible to the dual data
  LinearOperator core = LinearOperator::plain(Mat(0, 0));  // invertible linear heart
  PointMap projection_section{0, 0, {}};   // phi: quotient coords -> span points
  PointMap restriction_section{0, 0, {}};  // psi: span-dual rows -> dual vectors
};

// Throws ValidationError unless all structural invariants hold: dimension
// bookkeeping, degenerate <= span (1e-10), core square and invertible with
// consistent pairings, section identities at kCertTol.
void validate(const Decomposition& dec);

// Canonical representative basis of span/degenerate (ambient coordinates).
Subspace quotient_representatives(const Decomposition& dec);

// Matrix sending a domain dual vector to the span-dual row that the certified
// dual map evaluates its section at: inject . core_adjoint^{-1}.  Shared by
// synthesis, verification and generation so lookup keys agree bitwise.
Mat dual_key_matrix(const Decomposition& dec);

// Evaluate the certified pair on the given grids by section lookup (radius
// kLookupTol).  Throws ValidationError when a grid point's key has no section
// sample near it.  The result satisfies the orthogonality equation up to
// roundoff whenever the certificate is exact.
Instance synthesize(const Decomposition& dec, const std::vector<Vec>& x_grid,
                    const std::vector<Vec>& alpha_grid);

// Outcome of checking a certificate against an instance.  Scale-free checks
// (containment, section identities) compare against rel_tol; data matches and
// the equation residual compare against rel_tol * scale.
struct VerificationReport {
  bool passed = false;
  double scale = 1.0;  // 1 + max |<x, a>| over the instance grids

  double containment_residual = 0.0;  // degenerate directions outside the span
  bool containment_ok = false;
  double core_condition = 0.0;
  bool core_invertible = false;
  double projection_identity_residual = 0.0;  // quotient . phi = id
  bool projection_identity_ok = false;
  double restriction_identity_residual = 0.0;  // restrict . psi = id
  bool restriction_identity_ok = false;
  double forward_match_residual = 0.0;  // f samples vs phi . core
  bool forward_match_ok = false;
  double dual_match_residual = 0.0;  // g samples vs psi . inject . adj^{-1}
  bool dual_match_ok = false;
  double equation_residual = 0.0;
  bool equation_ok = false;
};

VerificationReport verify_decomposition(const Decomposition& dec,
                                        const Instance& instance,
                                        double rel_tol = kDefaultTol);

// extract() runs the structure-recovery pipeline:
//   precondition -> span -> fit-Q0 -> annihilator -> fit-Q1 ->
//   invertibility -> identity-check
// and throws ExtractError tagged with the failing stage.  The detailed
// variant additionally exposes the fitted maps and their residuals.
struct ExtractionDetail {
  Decomposition decomposition;
  double input_residual = 0.0;  // worst equation violation in the input
  double scale = 1.0;
  Mat dual_fit;                 // fitted restricted dual map, span-rank x n
  Mat quotient_dual_fit;        // its compression to quotient coords, n x n
  double dual_fit_residual = 0.0;
  double quotient_fit_residual = 0.0;
  double identity_residual = 0.0;   // |core_adjoint . compression - id|
  double quotient_dual_norm = 0.0;  // operator norm of the compression
};

Decomposition extract(const Instance& instance, double rel_tol = kDefaultTol);
ExtractionDetail extract_detailed(const Instance& instance,
                                  double rel_tol = kDefaultTol);

// Refinement available when both pairings are symmetric positive definite
// (so domain and codomain are inner-product spaces and dual columns act as
// vectors).  The codomain splits into three mutually orthogonal parts:
//   linear_range     - where the shared linear part lives
//   forward_defect   - carries the nonlinear offset of the forward map
//   dual_defect      - carries the nonlinear offset of the dual map
// with f = linear_part + forward_offset and
// g = dual_linear_part + dual_offset, and
// dual_linear_part the inverse adjoint of linear_part.
struct HilbertDecomposition {
  Pairing e_pairing;
  Pairing f_pairing;
  Subspace linear_range;    // inside the forward span, orthogonal to its defect
  Subspace forward_defect;  // the degenerate directions of the certificate
  Subspace dual_defect;     // orthogonal complement of the forward span
  Mat linear_part;          // m x n, range inside linear_range
  Mat dual_linear_part;     // m x n, range inside linear_range
  PointMap forward_offset;  // x -> f(x) - linear_part x, values in forward_defect
  PointMap dual_offset;     // a -> g(a) - dual_linear_part a, values in dual_defect
};

// Throws NotHilbertError when a pairing is not symmetric positive definite
// or the split degenerates; extraction failures propagate as ExtractError.
HilbertDecomposition hilbert_decompose(const Instance& instance,
                                       double rel_tol = kDefaultTol);

}  // namespace oeq
