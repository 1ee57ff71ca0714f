#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "oeq/errors.hpp"

namespace oeq {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// Relative singular-value cutoff used for every rank decision.
inline constexpr double kRankTol = 1e-10;
// A basis matrix B must satisfy max|B^T B - I| <= kOrthoTol.
inline constexpr double kOrthoTol = 1e-12;
// Square operators with condition number below this count as invertible.
inline constexpr double kConditionLimit = 1e8;

struct RankReport {
  int rank = 0;
  std::vector<double> singular_values;  // descending, length min(rows, cols)
  double tolerance_used = 0.0;          // absolute cutoff actually applied
};

// Numerical rank: number of singular values above rel_tol * sigma_max.
RankReport rank_report(const Mat& mat, double rel_tol = kRankTol);

// Nondegenerate bilinear form <x, a> = x^T gram a putting a space in duality
// with its dual.  Vectors on both sides are plain coordinate columns; the
// gram matrix is all that distinguishes one pairing from another.
class Pairing {
 public:
  // Throws ValidationError unless gram is square and invertible at rel_tol.
  explicit Pairing(Mat gram, double rel_tol = kRankTol);

  // Identity gram (the dot product).
  static Pairing standard(Index dim);

  Index dim() const { return gram_.rows(); }
  const Mat& gram() const { return gram_; }

  double evaluate(const Vec& x, const Vec& alpha) const;

  // The induced pairing of the dual space against the original space:
  // <a, x> = a^T gram^T x.
  Pairing transposed() const;

 private:
  Mat gram_;
};

// Subspace of R^d stored as a Euclidean-orthonormal basis (d x rank, rank
// possibly 0).  Construction enforces orthonormality to kOrthoTol.
class Subspace {
 public:
  Subspace(Index ambient_dim, Mat basis);

  static Subspace zero(Index ambient_dim);
  static Subspace full(Index ambient_dim);

  Index ambient_dim() const { return ambient_dim_; }
  Index rank() const { return basis_.cols(); }
  const Mat& basis() const { return basis_; }

  // Euclidean orthogonal projection onto the subspace.
  Vec project(const Vec& v) const;
  // Euclidean distance from v to the subspace.
  double distance(const Vec& v) const;
  bool contains(const Vec& v, double tol) const;
  bool contains(const Subspace& other, double tol) const;

 private:
  Index ambient_dim_;
  Mat basis_;
};

// Same span both ways at tolerance tol.
bool same_span(const Subspace& a, const Subspace& b, double tol);

// Matrix of a linear map together with the pairings its domain and codomain
// live under.  apply() is plain matrix-vector product; the pairings matter
// to adjoint() and to anything comparing vectors against dual data.
class LinearOperator {
 public:
  // Throws ValidationError unless pairing dims match the matrix shape.
  LinearOperator(Mat matrix, Pairing domain_pairing, Pairing codomain_pairing);

  // Matrix with standard pairings on both sides.
  static LinearOperator plain(Mat matrix);

  Index domain_dim() const { return matrix_.cols(); }
  Index codomain_dim() const { return matrix_.rows(); }
  const Mat& matrix() const { return matrix_; }
  const Pairing& domain_pairing() const { return domain_pairing_; }
  const Pairing& codomain_pairing() const { return codomain_pairing_; }

  Vec apply(const Vec& x) const;

 private:
  Mat matrix_;
  Pairing domain_pairing_;
  Pairing codomain_pairing_;
};

// Orthonormal basis (deterministic: SVD directions, each column's largest
// entry made positive) of the span of the given vectors / columns.
Subspace orthonormal_span(Index ambient_dim, const std::vector<Vec>& vectors,
                          double rel_tol = kRankTol);
Subspace orthonormal_span(Index ambient_dim, const Mat& columns,
                          double rel_tol = kRankTol);

// Annihilator of a subspace under a pairing.  With the subspace on the
// primal side (of_dual = false): {a : <v, a> = 0 for all v in the span}.
// With of_dual = true the span lives in the dual and the annihilator is
// {x : <x, a> = 0 for all a in the span}.  Rank is exactly
// ambient_dim - span.rank() by construction.
Subspace annihilator(const Subspace& span, const Pairing& pairing,
                     bool of_dual = false);

// Adjoint S*: dual(codomain) -> dual(domain), defined by
// <S x, b>_cod = <x, S* b>_dom.  Its pairings are the transposed duals.
LinearOperator adjoint(const LinearOperator& op);

// Quotient map L -> L/M realised on concrete representatives: an orthonormal
// basis of the Euclidean complement of M inside L, plus the component map
// sending L-coordinates to representative coordinates.  Requires M <= L
// (each M basis vector within 1e-10 of its projection onto L).
struct QuotientProjection {
  Subspace representatives;  // basis of the complement of M in L, ambient coords
  LinearOperator map;        // rank(L) -> rank(reps), standard pairings
};

QuotientProjection quotient_projection(const Subspace& span,
                                       const Subspace& degenerate);

// Largest singular value (0 for empty shapes).
double operator_norm(const Mat& mat);
double operator_norm(const LinearOperator& op);

// sigma_max / sigma_min over min(rows, cols) singular values; +infinity when
// the smallest is below kRankTol * sigma_max (or the shape has a zero side);
// 1.0 for the 0 x 0 map.  A LinearOperator counts as invertible only when it
// is square with condition below kConditionLimit.
double condition_number(const Mat& mat);
double condition_number(const LinearOperator& op);
bool is_invertible(const LinearOperator& op);

// Columns of the given vectors as a dim x count matrix (validates lengths).
Mat columns_from_vectors(Index dim, const std::vector<Vec>& vectors);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace oeq
