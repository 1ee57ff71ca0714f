#include "oeq/decomposition.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace oeq {

namespace {

double max_abs(const Mat& mat) {
  return mat.size() == 0 ? 0.0 : mat.cwiseAbs().maxCoeff();
}

// Value rows of ambient dual vectors against the span basis.
Mat restrict_to_span(const Subspace& span, const Pairing& f_pairing,
                     const Mat& dual_columns) {
  return span.basis().transpose() * (f_pairing.gram() * dual_columns);
}

bool is_spd(const Mat& gram) {
  if (gram.rows() == 0) return true;
  if (max_abs(gram - gram.transpose()) > 1e-12 * (1.0 + max_abs(gram))) return false;
  Eigen::LLT<Mat> llt(gram);
  return llt.info() == Eigen::Success;
}

}  // namespace

void validate(const Decomposition& dec) {
  const Index n = dec.e_pairing.dim();
  const Index m = dec.f_pairing.dim();
  if (dec.span.ambient_dim() != m || dec.degenerate.ambient_dim() != m) {
    throw ValidationError("certificate subspaces do not live in the codomain dimension");
  }
  const Index span_rank = dec.span.rank();
  const Index degenerate_rank = dec.degenerate.rank();
  const Index quotient_dim = span_rank - degenerate_rank;
  if (quotient_dim != n) {
    std::ostringstream msg;
    msg << "quotient dimension " << quotient_dim << " does not match the domain dimension "
        << n;
    throw ValidationError(msg.str());
  }
  if (dec.core.domain_dim() != n || dec.core.codomain_dim() != quotient_dim) {
    throw ValidationError("core shape does not match domain and quotient dimensions");
  }
  if (max_abs(dec.core.domain_pairing().gram() - dec.e_pairing.gram()) > 1e-12 ||
      max_abs(dec.core.codomain_pairing().gram() -
              Mat::Identity(quotient_dim, quotient_dim)) > 1e-12) {
    throw ValidationError("core pairings disagree with the certificate pairings");
  }
  if (dec.projection_section.domain_dim() != quotient_dim ||
      dec.projection_section.codomain_dim() != m) {
    throw ValidationError("projection section has the wrong shape");
  }
  if (dec.restriction_section.domain_dim() != span_rank ||
      dec.restriction_section.codomain_dim() != m) {
    throw ValidationError("restriction section has the wrong shape");
  }
  if (!dec.span.contains(dec.degenerate, 1e-10)) {
    throw ValidationError("degenerate directions are not inside the span");
  }
  if (!is_invertible(dec.core)) {
    std::ostringstream msg;
    msg << "core is not invertible: condition " << condition_number(dec.core);
    throw ValidationError(msg.str());
  }

  const Subspace reps = quotient_representatives(dec);
  for (std::size_t i = 0; i < dec.projection_section.size(); ++i) {
    const Sample& s = dec.projection_section.samples()[i];
    const double off_span = dec.span.distance(s.out);
    if (off_span > kCertTol) {
      std::ostringstream msg;
      msg << "projection section sample " << i << " leaves the span by " << off_span;
      throw ValidationError(msg.str());
    }
    const double gap = (reps.basis().transpose() * s.out - s.in).cwiseAbs().maxCoeff();
    if (gap > kCertTol) {
      std::ostringstream msg;
      msg << "projection section sample " << i << " violates the section identity by "
          << gap;
      throw ValidationError(msg.str());
    }
  }
  for (std::size_t j = 0; j < dec.restriction_section.size(); ++j) {
    const Sample& s = dec.restriction_section.samples()[j];
    const Vec row = dec.span.basis().transpose() * (dec.f_pairing.gram() * s.out);
    const double gap = (row - s.in).cwiseAbs().maxCoeff();
    if (gap > kCertTol) {
      std::ostringstream msg;
      msg << "restriction section sample " << j << " violates the section identity by "
          << gap;
      throw ValidationError(msg.str());
    }
  }
}

Subspace quotient_representatives(const Decomposition& dec) {
  return quotient_projection(dec.span, dec.degenerate).representatives;
}

Mat dual_key_matrix(const Decomposition& dec) {
  const Subspace reps = quotient_representatives(dec);
  const Mat inject = dec.span.basis().transpose() * reps.basis();
  const Mat inverse_adjoint = dec.core.matrix().transpose().partialPivLu().solve(
      dec.e_pairing.gram());
  return inject * inverse_adjoint;
}

Instance synthesize(const Decomposition& dec, const std::vector<Vec>& x_grid,
                    const std::vector<Vec>& alpha_grid) {
  validate(dec);
  const Index n = dec.e_pairing.dim();
  const Index m = dec.f_pairing.dim();
  const Mat key_matrix = dual_key_matrix(dec);

  std::vector<Sample> f_samples;
  f_samples.reserve(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const Vec key = dec.core.apply(x_grid[i]);
    const auto out = dec.projection_section.lookup(key);
    if (!out) {
      std::ostringstream msg;
      msg << "projection section has no sample near the key of grid point " << i;
      throw ValidationError(msg.str());
    }
    f_samples.push_back(Sample{x_grid[i], *out});
  }

  std::vector<Sample> g_samples;
  g_samples.reserve(alpha_grid.size());
  for (std::size_t j = 0; j < alpha_grid.size(); ++j) {
    if (alpha_grid[j].size() != n) {
      throw ValidationError("dual grid point has wrong length");
    }
    const Vec key = key_matrix * alpha_grid[j];
    const auto out = dec.restriction_section.lookup(key);
    if (!out) {
      std::ostringstream msg;
      msg << "restriction section has no sample near the key of dual grid point " << j;
      throw ValidationError(msg.str());
    }
    g_samples.push_back(Sample{alpha_grid[j], *out});
  }

  return Instance(dec.e_pairing, dec.f_pairing, PointMap(n, m, std::move(f_samples)),
                  PointMap(n, m, std::move(g_samples)));
}

VerificationReport verify_decomposition(const Decomposition& dec,
                                        const Instance& instance, double rel_tol) {
  const Index n = dec.e_pairing.dim();
  const Index m = dec.f_pairing.dim();
  if (instance.domain_dim() != n || instance.codomain_dim() != m) {
    throw ValidationError("certificate and instance dimensions disagree");
  }
  if (max_abs(dec.e_pairing.gram() - instance.e_pairing.gram()) > 1e-12 ||
      max_abs(dec.f_pairing.gram() - instance.f_pairing.gram()) > 1e-12) {
    throw ValidationError("certificate and instance pairings disagree");
  }
  if (dec.span.rank() - dec.degenerate.rank() != n ||
      dec.core.domain_dim() != n || dec.core.codomain_dim() != n) {
    throw ValidationError("certificate bookkeeping is inconsistent with the domain dimension");
  }

  VerificationReport report;
  report.scale = pairing_scale(instance);
  const double match_tol = rel_tol * report.scale;

  for (Index j = 0; j < dec.degenerate.rank(); ++j) {
    report.containment_residual = std::max(
        report.containment_residual, dec.span.distance(dec.degenerate.basis().col(j)));
  }
  report.containment_ok = report.containment_residual <= rel_tol;

  report.core_condition = condition_number(dec.core);
  report.core_invertible = is_invertible(dec.core);

  const Subspace reps = quotient_representatives(dec);
  for (const Sample& s : dec.projection_section.samples()) {
    const double gap =
        std::max(dec.span.distance(s.out),
                 (reps.basis().transpose() * s.out - s.in).cwiseAbs().maxCoeff());
    report.projection_identity_residual = std::max(report.projection_identity_residual, gap);
  }
  report.projection_identity_ok = report.projection_identity_residual <= rel_tol;

  for (const Sample& s : dec.restriction_section.samples()) {
    const Vec row = dec.span.basis().transpose() * (dec.f_pairing.gram() * s.out);
    report.restriction_identity_residual = std::max(
        report.restriction_identity_residual, (row - s.in).cwiseAbs().maxCoeff());
  }
  report.restriction_identity_ok = report.restriction_identity_residual <= rel_tol;

  for (const Sample& s : instance.f_map.samples()) {
    const auto rebuilt = dec.projection_section.lookup(dec.core.apply(s.in));
    const double gap = rebuilt ? (*rebuilt - s.out).norm() : kInf;
    report.forward_match_residual = std::max(report.forward_match_residual, gap);
  }
  report.forward_match_ok = report.forward_match_residual <= match_tol;

  const Mat key_matrix = dual_key_matrix(dec);
  for (const Sample& s : instance.g_map.samples()) {
    const auto rebuilt = dec.restriction_section.lookup(key_matrix * s.in);
    const double gap = rebuilt ? (*rebuilt - s.out).norm() : kInf;
    report.dual_match_residual = std::max(report.dual_match_residual, gap);
  }
  report.dual_match_ok = report.dual_match_residual <= match_tol;

  report.equation_residual = residual(instance).max_abs_residual;
  report.equation_ok = report.equation_residual <= match_tol;

  report.passed = report.containment_ok && report.core_invertible &&
                  report.projection_identity_ok && report.restriction_identity_ok &&
                  report.forward_match_ok && report.dual_match_ok && report.equation_ok;
  return report;
}

Decomposition extract(const Instance& instance, double rel_tol) {
  return extract_detailed(instance, rel_tol).decomposition;
}

ExtractionDetail extract_detailed(const Instance& instance, double rel_tol) {
  const Index n = instance.domain_dim();
  const Index m = instance.codomain_dim();

  // Stage: precondition.  The data must be nonempty, spanning on both sides,
  // and satisfy the equation at the requested tolerance.
  if (instance.f_map.size() == 0 || instance.g_map.size() == 0) {
    throw ExtractError(ExtractStage::kPrecondition, "instance has an empty sample table");
  }
  const double scale = pairing_scale(instance);
  const ResidualReport input_report = residual(instance);
  if (input_report.max_abs_residual > rel_tol * scale) {
    std::ostringstream msg;
    msg << "equation residual " << input_report.max_abs_residual
        << " exceeds threshold " << rel_tol * scale;
    throw ExtractError(ExtractStage::kPrecondition, msg.str());
  }
  if (rank_report(instance.f_map.inputs()).rank != n) {
    throw ExtractError(ExtractStage::kPrecondition,
                       "forward samples do not span the domain");
  }
  if (rank_report(instance.g_map.inputs()).rank != n) {
    throw ExtractError(ExtractStage::kPrecondition,
                       "dual samples do not span the domain dual");
  }

  // Stage: span.  Orthonormal basis of the forward range closure.
  const Subspace span = orthonormal_span(m, instance.f_map.outputs());
  const Index span_rank = span.rank();

  // Stage: fit-Q0.  The dual samples, restricted to the span, must be linear
  // in their arguments.
  const Mat value_rows =
      restrict_to_span(span, instance.f_pairing, instance.g_map.outputs());
  std::vector<Sample> restricted_samples;
  restricted_samples.reserve(instance.g_map.size());
  for (Index j = 0; j < static_cast<Index>(instance.g_map.size()); ++j) {
    restricted_samples.push_back(
        Sample{instance.g_map.samples()[static_cast<std::size_t>(j)].in,
               value_rows.col(j)});
  }
  ExtractionDetail detail;
  detail.input_residual = input_report.max_abs_residual;
  detail.scale = scale;
  try {
    detail.dual_fit =
        fit_linear(PointMap(n, span_rank, std::move(restricted_samples)), rel_tol)
            .matrix();
  } catch (const NotLinearError& err) {
    throw ExtractError(ExtractStage::kDualFit, err.what());
  }
  for (Index j = 0; j < static_cast<Index>(instance.g_map.size()); ++j) {
    detail.dual_fit_residual = std::max(
        detail.dual_fit_residual,
        (detail.dual_fit * instance.g_map.samples()[static_cast<std::size_t>(j)].in -
         value_rows.col(j))
            .norm());
  }

  // Stage: annihilator.  Span directions invisible to the fitted dual map,
  // and the resulting quotient bookkeeping.
  const Subspace dual_range = orthonormal_span(span_rank, detail.dual_fit);
  const Subspace degenerate_coords =
      annihilator(dual_range, Pairing::standard(span_rank), /*of_dual=*/true);
  const Subspace degenerate =
      orthonormal_span(m, Mat(span.basis() * degenerate_coords.basis()));
  const Index quotient_dim = span_rank - degenerate.rank();
  if (quotient_dim != n) {
    std::ostringstream msg;
    msg << "quotient dimension " << quotient_dim
        << " does not match the domain dimension " << n;
    throw ExtractError(ExtractStage::kAnnihilator, msg.str());
  }

  // Stage: fit-Q1.  The forward samples, read in quotient coordinates, must
  // be linear in their arguments.
  const QuotientProjection quotient = quotient_projection(span, degenerate);
  const Mat rep_rows = quotient.representatives.basis().transpose() *
                       instance.f_map.outputs();
  std::vector<Sample> quotient_samples;
  quotient_samples.reserve(instance.f_map.size());
  for (Index i = 0; i < static_cast<Index>(instance.f_map.size()); ++i) {
    quotient_samples.push_back(
        Sample{instance.f_map.samples()[static_cast<std::size_t>(i)].in,
               rep_rows.col(i)});
  }
  Mat core_matrix;
  try {
    core_matrix =
        fit_linear(PointMap(n, quotient_dim, std::move(quotient_samples)), rel_tol)
            .matrix();
  } catch (const NotLinearError& err) {
    throw ExtractError(ExtractStage::kQuotientFit, err.what());
  }
  for (Index i = 0; i < static_cast<Index>(instance.f_map.size()); ++i) {
    detail.quotient_fit_residual = std::max(
        detail.quotient_fit_residual,
        (core_matrix * instance.f_map.samples()[static_cast<std::size_t>(i)].in -
         rep_rows.col(i))
            .norm());
  }

  // Stage: invertibility.
  const double core_cond = condition_number(core_matrix);
  if (!(core_cond < kConditionLimit)) {
    std::ostringstream msg;
    msg << "core condition number " << core_cond << " reaches the limit "
        << kConditionLimit;
    throw ExtractError(ExtractStage::kInvertibility, msg.str());
  }

  // Stage: identity-check.  The two fitted maps must be mutually inverse
  // through the adjoint; this is what makes the certificate consistent.
  const LinearOperator core(core_matrix, instance.e_pairing,
                            Pairing::standard(quotient_dim));
  const Mat inject = span.basis().transpose() * quotient.representatives.basis();
  detail.quotient_dual_fit = inject.transpose() * detail.dual_fit;
  detail.identity_residual = max_abs(
      adjoint(core).matrix() * detail.quotient_dual_fit - Mat::Identity(n, n));
  if (detail.identity_residual > rel_tol) {
    std::ostringstream msg;
    msg << "adjoint identity residual " << detail.identity_residual
        << " exceeds " << rel_tol;
    throw ExtractError(ExtractStage::kIdentityCheck, msg.str());
  }
  detail.quotient_dual_norm = operator_norm(detail.quotient_dual_fit);

  // Assemble the sections from the observed data.  Projection-section keys
  // are the projected outputs themselves, so the section identities hold
  // exactly; the same goes for the restriction side.
  std::vector<Sample> phi_samples;
  phi_samples.reserve(instance.f_map.size());
  for (Index i = 0; i < static_cast<Index>(instance.f_map.size()); ++i) {
    phi_samples.push_back(
        Sample{rep_rows.col(i),
               instance.f_map.samples()[static_cast<std::size_t>(i)].out});
  }
  std::vector<Sample> psi_samples;
  psi_samples.reserve(instance.g_map.size());
  for (Index j = 0; j < static_cast<Index>(instance.g_map.size()); ++j) {
    psi_samples.push_back(
        Sample{value_rows.col(j),
               instance.g_map.samples()[static_cast<std::size_t>(j)].out});
  }

  detail.decomposition =
      Decomposition{instance.e_pairing,
                    instance.f_pairing,
                    span,
                    degenerate,
                    core,
                    PointMap(quotient_dim, m, std::move(phi_samples)),
                    PointMap(span_rank, m, std::move(psi_samples))};
  validate(detail.decomposition);
  return detail;
}

HilbertDecomposition hilbert_decompose(const Instance& instance, double rel_tol) {
  if (!is_spd(instance.e_pairing.gram())) {
    throw NotHilbertError("domain pairing is not symmetric positive definite");
  }
  if (!is_spd(instance.f_pairing.gram())) {
    throw NotHilbertError("codomain pairing is not symmetric positive definite");
  }

  const ExtractionDetail detail = extract_detailed(instance, rel_tol);
  const Decomposition& dec = detail.decomposition;
  const Index n = instance.domain_dim();
  const Index m = instance.codomain_dim();
  const Mat& gram_f = instance.f_pairing.gram();
  const Index span_rank = dec.span.rank();

  // Orthogonal complement of the span: the dual offsets live here.
  const Subspace dual_defect = annihilator(dec.span, instance.f_pairing);

  // Orthogonal complement of the degenerate part inside the span, computed in
  // span coordinates under the restricted inner product.
  const Mat span_inner = dec.span.basis().transpose() * gram_f * dec.span.basis();
  const Subspace degenerate_coords = orthonormal_span(
      span_rank, Mat(dec.span.basis().transpose() * dec.degenerate.basis()));
  const Subspace linear_coords =
      annihilator(degenerate_coords, Pairing(span_inner), /*of_dual=*/false);
  const Subspace linear_range =
      orthonormal_span(m, Mat(dec.span.basis() * linear_coords.basis()));

  // The forward map's linear part: project its representative lift onto the
  // linear range along the degenerate directions.
  const Subspace reps = quotient_representatives(dec);
  const Mat lift = reps.basis() * dec.core.matrix();  // m x n, inside the span
  Mat mixer(span_rank, span_rank);
  mixer.leftCols(n) = dec.span.basis().transpose() * linear_range.basis();
  mixer.rightCols(span_rank - n) =
      dec.span.basis().transpose() * dec.degenerate.basis();
  const Mat split = mixer.partialPivLu().solve(
      Mat(dec.span.basis().transpose() * lift));  // span_rank x n
  const Mat linear_in_range = split.topRows(n);   // coordinates against linear_range
  const double linear_cond = condition_number(linear_in_range);
  if (!(linear_cond < kConditionLimit)) {
    std::ostringstream msg;
    msg << "linear part is numerically singular: condition " << linear_cond;
    throw NotHilbertError(msg.str());
  }
  const Mat linear_part = linear_range.basis() * linear_in_range;  // m x n

  // The dual map's linear part: the unique span-valued vector with the fitted
  // value rows.  It lands inside the linear range because the fitted dual map
  // vanishes on the degenerate directions.
  const Mat key_matrix = dual_key_matrix(dec);
  const Mat dual_linear_part =
      dec.span.basis() * Mat(span_inner.llt().solve(key_matrix));  // m x n

  std::vector<Sample> forward_offsets;
  forward_offsets.reserve(instance.f_map.size());
  for (const Sample& s : instance.f_map.samples()) {
    forward_offsets.push_back(Sample{s.in, s.out - linear_part * s.in});
  }
  std::vector<Sample> dual_offsets;
  dual_offsets.reserve(instance.g_map.size());
  for (const Sample& s : instance.g_map.samples()) {
    dual_offsets.push_back(Sample{s.in, s.out - dual_linear_part * s.in});
  }

  return HilbertDecomposition{instance.e_pairing,
                              instance.f_pairing,
                              linear_range,
                              dec.degenerate,
                              dual_defect,
                              linear_part,
                              dual_linear_part,
                              PointMap(n, m, std::move(forward_offsets)),
                              PointMap(n, m, std::move(dual_offsets))};
}

}  // namespace oeq
