#include "oeq/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace oeq {

namespace {

// Deterministic sign convention: each column's largest-magnitude entry is
// made positive (first occurrence wins on ties).
void canonicalize_column_signs(Mat& basis) {
  for (Index j = 0; j < basis.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < basis.rows(); ++i) {
      const double a = std::abs(basis(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (basis.rows() > 0 && basis(arg, j) < 0.0) basis.col(j) = -basis.col(j);
  }
}

// Orthonormal basis of the kernel of a full-row-rank constraint matrix.
// The kernel dimension is cols - rows exactly; callers guarantee full row
// rank, so we can take the trailing right singular vectors wholesale.
Mat kernel_basis(const Mat& constraints) {
  const Index rows = constraints.rows();
  const Index cols = constraints.cols();
  if (rows == 0) return Mat::Identity(cols, cols);
  Eigen::JacobiSVD<Mat> svd(constraints, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(cols - rows);
}

}  // namespace

const char* to_string(ExtractStage stage) {
  switch (stage) {
    case ExtractStage::kPrecondition: return "precondition";
    case ExtractStage::kSpan: return "span";
    case ExtractStage::kDualFit: return "fit-Q0";
    case ExtractStage::kAnnihilator: return "annihilator";
    case ExtractStage::kQuotientFit: return "fit-Q1";
    case ExtractStage::kInvertibility: return "invertibility";
    case ExtractStage::kIdentityCheck: return "identity-check";
  }
  return "unknown";
}

RankReport rank_report(const Mat& mat, double rel_tol) {
  RankReport report;
  if (mat.rows() == 0 || mat.cols() == 0) return report;
  Eigen::JacobiSVD<Mat> svd(mat);
  const auto& sv = svd.singularValues();
  report.singular_values.assign(sv.data(), sv.data() + sv.size());
  report.tolerance_used = rel_tol * sv(0);
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > report.tolerance_used) ++report.rank;
  }
  return report;
}

Pairing::Pairing(Mat gram, double rel_tol) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) {
    throw ValidationError("pairing gram matrix must be square, got " +
                          std::to_string(gram_.rows()) + " x " +
                          std::to_string(gram_.cols()));
  }
  const RankReport report = rank_report(gram_, rel_tol);
  if (report.rank != gram_.rows()) {
    std::ostringstream msg;
    msg << "pairing gram matrix is singular: rank " << report.rank << " of "
        << gram_.rows();
    throw ValidationError(msg.str());
  }
}

Pairing Pairing::standard(Index dim) { return Pairing(Mat::Identity(dim, dim)); }

double Pairing::evaluate(const Vec& x, const Vec& alpha) const {
  if (x.size() != dim() || alpha.size() != dim()) {
    throw ValidationError("pairing arguments must have length " +
                          std::to_string(dim()));
  }
  return x.dot(gram_ * alpha);
}

Pairing Pairing::transposed() const { return Pairing(gram_.transpose()); }

Subspace::Subspace(Index ambient_dim, Mat basis)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
  if (ambient_dim_ < 0) throw ValidationError("negative ambient dimension");
  if (basis_.rows() != ambient_dim_) {
    throw ValidationError("subspace basis has " + std::to_string(basis_.rows()) +
                          " rows in ambient dimension " +
                          std::to_string(ambient_dim_));
  }
  if (basis_.cols() > ambient_dim_) {
    throw ValidationError("subspace basis has more vectors than the ambient dimension");
  }
  if (basis_.cols() > 0) {
    const Mat gramian = basis_.transpose() * basis_;
    const double defect =
        (gramian - Mat::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
    if (defect > kOrthoTol) {
      std::ostringstream msg;
      msg << "subspace basis is not orthonormal: max deviation " << defect;
      throw ValidationError(msg.str());
    }
  }
}

Subspace Subspace::zero(Index ambient_dim) {
  return Subspace(ambient_dim, Mat(ambient_dim, 0));
}

Subspace Subspace::full(Index ambient_dim) {
  return Subspace(ambient_dim, Mat::Identity(ambient_dim, ambient_dim));
}

Vec Subspace::project(const Vec& v) const {
  if (v.size() != ambient_dim_) {
    throw ValidationError("projection argument has wrong length");
  }
  return basis_ * (basis_.transpose() * v);
}

double Subspace::distance(const Vec& v) const { return (v - project(v)).norm(); }

bool Subspace::contains(const Vec& v, double tol) const {
  return distance(v) <= tol;
}

bool Subspace::contains(const Subspace& other, double tol) const {
  if (other.ambient_dim() != ambient_dim_) {
    throw ValidationError("subspaces live in different ambient dimensions");
  }
  for (Index j = 0; j < other.rank(); ++j) {
    if (!contains(other.basis().col(j), tol)) return false;
  }
  return true;
}

bool same_span(const Subspace& a, const Subspace& b, double tol) {
  return a.rank() == b.rank() && a.contains(b, tol) && b.contains(a, tol);
}

LinearOperator::LinearOperator(Mat matrix, Pairing domain_pairing,
                               Pairing codomain_pairing)
    : matrix_(std::move(matrix)),
      domain_pairing_(std::move(domain_pairing)),
      codomain_pairing_(std::move(codomain_pairing)) {
  if (domain_pairing_.dim() != matrix_.cols() ||
      codomain_pairing_.dim() != matrix_.rows()) {
    throw ValidationError("operator pairings do not match the matrix shape");
  }
}

LinearOperator LinearOperator::plain(Mat matrix) {
  const Index rows = matrix.rows();
  const Index cols = matrix.cols();
  return LinearOperator(std::move(matrix), Pairing::standard(cols),
                        Pairing::standard(rows));
}

Vec LinearOperator::apply(const Vec& x) const {
  if (x.size() != domain_dim()) {
    throw ValidationError("operator argument has wrong length");
  }
  return matrix_ * x;
}

Subspace orthonormal_span(Index ambient_dim, const std::vector<Vec>& vectors,
                          double rel_tol) {
  return orthonormal_span(ambient_dim, columns_from_vectors(ambient_dim, vectors),
                          rel_tol);
}

Subspace orthonormal_span(Index ambient_dim, const Mat& columns, double rel_tol) {
  if (columns.rows() != ambient_dim) {
    throw ValidationError("span columns have wrong length");
  }
  if (ambient_dim == 0 || columns.cols() == 0) return Subspace::zero(ambient_dim);
  Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return Subspace::zero(ambient_dim);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  Mat basis = svd.matrixU().leftCols(rank);
  canonicalize_column_signs(basis);
  return Subspace(ambient_dim, std::move(basis));
}

Subspace annihilator(const Subspace& span, const Pairing& pairing, bool of_dual) {
  const Index dim = span.ambient_dim();
  if (pairing.dim() != dim) {
    throw ValidationError("pairing dimension does not match the span's ambient dimension");
  }
  if (span.rank() == 0) return Subspace::full(dim);
  // <v, a> = v^T G a: fixing the span on the primal side constrains a through
  // B^T G; fixing it on the dual side constrains x through B^T G^T.
  const Mat constraints = of_dual
                              ? Mat(span.basis().transpose() * pairing.gram().transpose())
                              : Mat(span.basis().transpose() * pairing.gram());
  Mat basis = kernel_basis(constraints);
  canonicalize_column_signs(basis);
  return Subspace(dim, std::move(basis));
}

LinearOperator adjoint(const LinearOperator& op) {
  // <S x, b>_cod = <x, S* b>_dom forces S* = G_dom^{-1} S^T G_cod.  The dual
  // spaces pair against the primal ones through the transposed grams.
  const Mat star = op.domain_pairing().gram().partialPivLu().solve(
      op.matrix().transpose() * op.codomain_pairing().gram());
  return LinearOperator(star, op.codomain_pairing().transposed(),
                        op.domain_pairing().transposed());
}

QuotientProjection quotient_projection(const Subspace& span,
                                       const Subspace& degenerate) {
  if (span.ambient_dim() != degenerate.ambient_dim()) {
    throw ValidationError("span and degenerate subspace live in different ambient dimensions");
  }
  for (Index j = 0; j < degenerate.rank(); ++j) {
    const double dist = span.distance(degenerate.basis().col(j));
    if (dist > 1e-10) {
      std::ostringstream msg;
      msg << "degenerate subspace is not inside the span: basis vector " << j
          << " is at distance " << dist;
      throw ValidationError(msg.str());
    }
  }
  // Representatives: complement of the degenerate directions inside the span,
  // computed in span coordinates so the rank comes out exact.
  const Mat coords = degenerate.basis().transpose() * span.basis();
  const Mat complement = kernel_basis(coords);  // span.rank() x (span - degenerate)
  const Subspace reps = orthonormal_span(span.ambient_dim(),
                                         Mat(span.basis() * complement));
  Mat component = reps.basis().transpose() * span.basis();
  LinearOperator map(std::move(component), Pairing::standard(span.rank()),
                     Pairing::standard(reps.rank()));
  return QuotientProjection{reps, std::move(map)};
}

double operator_norm(const Mat& mat) {
  if (mat.rows() == 0 || mat.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(mat);
  return svd.singularValues()(0);
}

double operator_norm(const LinearOperator& op) { return operator_norm(op.matrix()); }

double condition_number(const Mat& mat) {
  if (mat.rows() == 0 && mat.cols() == 0) return 1.0;
  if (mat.rows() == 0 || mat.cols() == 0) return kInf;
  Eigen::JacobiSVD<Mat> svd(mat);
  const auto& sv = svd.singularValues();
  const double largest = sv(0);
  const double smallest = sv(sv.size() - 1);
  if (smallest <= kRankTol * largest) return kInf;
  return largest / smallest;
}

double condition_number(const LinearOperator& op) {
  return condition_number(op.matrix());
}

bool is_invertible(const LinearOperator& op) {
  return op.domain_dim() == op.codomain_dim() &&
         condition_number(op.matrix()) < kConditionLimit;
}

Mat columns_from_vectors(Index dim, const std::vector<Vec>& vectors) {
  Mat columns(dim, static_cast<Index>(vectors.size()));
  for (Index j = 0; j < columns.cols(); ++j) {
    if (vectors[static_cast<std::size_t>(j)].size() != dim) {
      throw ValidationError("vector " + std::to_string(j) + " has length " +
                            std::to_string(vectors[static_cast<std::size_t>(j)].size()) +
                            ", expected " + std::to_string(dim));
    }
    columns.col(j) = vectors[static_cast<std::size_t>(j)];
  }
  return columns;
}

}  // namespace oeq
