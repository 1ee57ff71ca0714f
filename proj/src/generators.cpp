#include "oeq/generators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace oeq {

namespace {

// Matrix entry draw order is pinned (column by column, row by row within a
// column) so generated data is a pure function of the seed.
Mat gaussian_matrix(Index rows, Index cols, SplitMix64& rng) {
  Mat out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = rng.next_gaussian();
  }
  return out;
}

Vec gaussian_vector(Index dim, SplitMix64& rng) {
  Vec out(dim);
  for (Index i = 0; i < dim; ++i) out(i) = rng.next_gaussian();
  return out;
}

Vec uniform_vector(Index dim, double lo, double hi, SplitMix64& rng) {
  Vec out(dim);
  for (Index i = 0; i < dim; ++i) out(i) = rng.next_uniform(lo, hi);
  return out;
}

// Haar-ish random orthogonal matrix: QR of a gaussian draw with the sign
// ambiguity fixed by the diagonal of R.
Mat random_orthogonal(Index dim, SplitMix64& rng) {
  if (dim == 0) return Mat(0, 0);
  const Mat raw = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Mat> qr(raw);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (Index i = 0; i < dim; ++i) {
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  return q;
}

// Singular values (or eigenvalues, in the symmetric case) are kept inside
// [1, 2]: bounded above for mild conditioning, bounded below by one so that
// pairing norms dominate Euclidean norms and Euclidean estimates on generated
// data stay valid.
Pairing random_pairing(Index dim, PairingMode mode, SplitMix64& rng) {
  switch (mode) {
    case PairingMode::kStandard:
      return Pairing::standard(dim);
    case PairingMode::kRandomSpd: {
      const Mat q = random_orthogonal(dim, rng);
      const Vec d = uniform_vector(dim, 1.0, 2.0, rng);
      return Pairing(q * d.asDiagonal() * q.transpose());
    }
    case PairingMode::kRandomInvertible: {
      const Mat u = random_orthogonal(dim, rng);
      const Mat v = random_orthogonal(dim, rng);
      const Vec d = uniform_vector(dim, 1.0, 2.0, rng);
      return Pairing(u * d.asDiagonal() * v.transpose());
    }
  }
  throw ValidationError("unknown pairing mode");
}

// Nonlinear offset attached to a section: a fixed random function of the
// lookup key, so coincident keys always receive identical offsets.  The
// polynomial flavour takes powers 1..offset_dim of the key's squared norm
// (plus a constant): a single power could never manifest more than one offset
// direction over a grid, while the power ladder spans any requested offset
// dimension on generic grids.
class OffsetModel {
 public:
  OffsetModel(SectionMode mode, Index key_dim, Index offset_dim, SplitMix64& rng)
      : mode_(mode), offset_dim_(offset_dim) {
    if (offset_dim_ == 0) return;
    switch (mode_) {
      case SectionMode::kZero:
        break;
      case SectionMode::kPolynomial:
        coeffs_ = gaussian_matrix(offset_dim_, offset_dim_ + 1, rng);
        break;
      case SectionMode::kTrigonometric:
        amplitudes_ = uniform_vector(offset_dim_, 0.5, 1.5, rng);
        frequencies_ = gaussian_matrix(offset_dim_, key_dim, rng);
        phases_ = uniform_vector(offset_dim_, 0.0, 2.0 * std::numbers::pi, rng);
        break;
    }
  }

  Vec operator()(const Vec& key) const {
    Vec out = Vec::Zero(offset_dim_);
    if (offset_dim_ == 0 || mode_ == SectionMode::kZero) return out;
    if (mode_ == SectionMode::kPolynomial) {
      const double t = key.squaredNorm();
      out = coeffs_.col(0);
      double power = 1.0;
      for (Index c = 1; c < coeffs_.cols(); ++c) {
        power *= t;
        out += coeffs_.col(c) * power;
      }
      return out;
    }
    for (Index k = 0; k < offset_dim_; ++k) {
      out(k) = amplitudes_(k) * std::sin(frequencies_.row(k).dot(key) + phases_(k));
    }
    return out;
  }

 private:
  SectionMode mode_;
  Index offset_dim_;
  Mat coeffs_;
  Vec amplitudes_;
  Mat frequencies_;
  Vec phases_;
};

// count points: scaled standard basis vectors first (the domain is spanned by
// construction), gaussian points after.
std::vector<Vec> make_grid(Index dim, Index count, SplitMix64& rng) {
  std::vector<Vec> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    if (i < dim) {
      Vec v = Vec::Zero(dim);
      v(i) = rng.next_uniform(1.0, 2.0);
      grid.push_back(std::move(v));
    } else {
      grid.push_back(gaussian_vector(dim, rng));
    }
  }
  return grid;
}

}  // namespace

double SplitMix64::next_gaussian() {
  const double u1 = 1.0 - next_double();  // (0, 1]: keeps the log finite
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

const char* to_string(PairingMode mode) {
  switch (mode) {
    case PairingMode::kStandard: return "standard";
    case PairingMode::kRandomSpd: return "random-spd";
    case PairingMode::kRandomInvertible: return "random-invertible";
  }
  return "unknown";
}

const char* to_string(SectionMode mode) {
  switch (mode) {
    case SectionMode::kZero: return "zero";
    case SectionMode::kPolynomial: return "polynomial";
    case SectionMode::kTrigonometric: return "trigonometric";
  }
  return "unknown";
}

std::optional<PairingMode> parse_pairing_mode(std::string_view name) {
  if (name == "standard") return PairingMode::kStandard;
  if (name == "random-spd") return PairingMode::kRandomSpd;
  if (name == "random-invertible") return PairingMode::kRandomInvertible;
  return std::nullopt;
}

std::optional<SectionMode> parse_section_mode(std::string_view name) {
  if (name == "zero") return SectionMode::kZero;
  if (name == "polynomial") return SectionMode::kPolynomial;
  if (name == "trigonometric") return SectionMode::kTrigonometric;
  return std::nullopt;
}

void validate(const GenConfig& config) {
  if (config.domain_dim < 1) {
    throw ValidationError("generator domain dimension must be at least 1");
  }
  if (config.codomain_dim < config.domain_dim) {
    throw ValidationError("generator codomain dimension must be at least the domain dimension");
  }
  if (config.degenerate_rank < 0) {
    throw ValidationError("generator degenerate rank must be nonnegative");
  }
  if (config.span_rank != config.degenerate_rank + config.domain_dim) {
    std::ostringstream msg;
    msg << "span rank " << config.span_rank << " must equal degenerate rank "
        << config.degenerate_rank << " plus domain dimension " << config.domain_dim;
    throw ValidationError(msg.str());
  }
  if (config.span_rank > config.codomain_dim) {
    throw ValidationError("generator span rank exceeds the codomain dimension");
  }
  if (config.section_mode == SectionMode::kZero && config.degenerate_rank != 0) {
    throw ValidationError(
        "zero sections cannot realise a positive degenerate rank: "
        "an identically zero offset manifests no extra span directions");
  }
  if (config.grid_size != 0 && config.grid_size < config.domain_dim) {
    throw ValidationError("generator grid size must be at least the domain dimension");
  }
}

Index effective_grid_size(const GenConfig& config) {
  if (config.grid_size > 0) return config.grid_size;
  return std::max<Index>(2 * config.domain_dim,
                         config.domain_dim + config.degenerate_rank + 3);
}

GeneratedCase gen_case(const GenConfig& config) {
  validate(config);
  const Index n = config.domain_dim;
  const Index m = config.codomain_dim;
  const Index span_rank = config.span_rank;
  const Index degenerate_rank = config.degenerate_rank;
  const Index grid = effective_grid_size(config);

  SplitMix64 rng(config.seed);
  const Pairing e_pairing = random_pairing(n, config.pairing_mode, rng);
  const Pairing f_pairing = random_pairing(m, config.pairing_mode, rng);
  const Eigen::PartialPivLU<Mat> f_gram_solver(f_pairing.gram());

  // Random draws are almost surely generic; the loop retries the rare
  // degenerate draw, consuming fresh randomness from the same stream so the
  // result remains a pure function of the seed.
  for (int attempt = 0; attempt < 32; ++attempt) {
    const Subspace span = orthonormal_span(m, gaussian_matrix(m, span_rank, rng));
    if (span.rank() != span_rank) continue;
    const Subspace degenerate_coords =
        orthonormal_span(span_rank, gaussian_matrix(span_rank, degenerate_rank, rng));
    if (degenerate_coords.rank() != degenerate_rank) continue;
    const Subspace degenerate =
        orthonormal_span(m, Mat(span.basis() * degenerate_coords.basis()));

    // Invertible core with singular values in [0.5, 2]: condition at most 4.
    const Mat core_matrix = random_orthogonal(n, rng) *
                            uniform_vector(n, 0.5, 2.0, rng).asDiagonal() *
                            random_orthogonal(n, rng).transpose();
    const LinearOperator core(core_matrix, e_pairing, Pairing::standard(n));

    std::vector<Vec> x_grid = make_grid(n, grid, rng);
    std::vector<Vec> alpha_grid = make_grid(n, grid, rng);

    OffsetModel forward_offset(config.section_mode, n, degenerate_rank, rng);
    OffsetModel dual_offset(config.section_mode, span_rank, m - span_rank, rng);

    // Assemble the certificate skeleton first: section keys must go through
    // exactly the code paths synthesis uses, so lookups later agree bitwise.
    Decomposition dec{e_pairing,
                      f_pairing,
                      span,
                      degenerate,
                      core,
                      PointMap(n, m, {}),
                      PointMap(span_rank, m, {})};
    const Subspace reps = quotient_representatives(dec);
    const Mat key_matrix = dual_key_matrix(dec);
    const Subspace restriction_kernel = annihilator(span, f_pairing);

    std::vector<Sample> phi_samples;
    phi_samples.reserve(x_grid.size());
    Mat forward_outputs(m, static_cast<Index>(x_grid.size()));
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      const Vec key = dec.core.apply(x_grid[i]);
      const Vec out =
          reps.basis() * key + degenerate.basis() * forward_offset(key);
      forward_outputs.col(static_cast<Index>(i)) = out;
      phi_samples.push_back(Sample{key, out});
    }
    // Faithfulness: the forward outputs must reach every span direction,
    // otherwise the configured ranks are not recoverable from the data.
    if (rank_report(forward_outputs).rank != span_rank) continue;

    std::vector<Sample> psi_samples;
    psi_samples.reserve(alpha_grid.size());
    for (const Vec& alpha : alpha_grid) {
      const Vec key = key_matrix * alpha;
      // Particular dual vector with the required value rows, plus an offset
      // invisible to the span.
      const Vec out = f_gram_solver.solve(span.basis() * key) +
                      restriction_kernel.basis() * dual_offset(key);
      psi_samples.push_back(Sample{key, out});
    }

    dec.projection_section = PointMap(n, m, std::move(phi_samples));
    dec.restriction_section = PointMap(span_rank, m, std::move(psi_samples));
    try {
      validate(dec);
    } catch (const ValidationError&) {
      continue;
    }
    return GeneratedCase{std::move(dec), std::move(x_grid), std::move(alpha_grid)};
  }
  std::ostringstream msg;
  msg << "generator gave up after 32 attempts on seed " << config.seed
      << "; the configuration is likely unrealisable with grid size " << grid;
  throw ValidationError(msg.str());
}

Decomposition gen_decomposition(const GenConfig& config) {
  return gen_case(config).decomposition;
}

Instance gen_instance(const GenConfig& config) {
  const GeneratedCase generated = gen_case(config);
  return synthesize(generated.decomposition, generated.x_grid, generated.alpha_grid);
}

}  // namespace oeq
