#include "oeq/equation.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace oeq {

PointMap::PointMap(Index domain_dim, Index codomain_dim, std::vector<Sample> samples)
    : domain_dim_(domain_dim), codomain_dim_(codomain_dim), samples_(std::move(samples)) {
  if (domain_dim_ < 0 || codomain_dim_ < 0) {
    throw ValidationError("point map dimensions must be nonnegative");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (s.in.size() != domain_dim_ || s.out.size() != codomain_dim_) {
      std::ostringstream msg;
      msg << "sample " << i << " has shape (" << s.in.size() << " -> "
          << s.out.size() << "), expected (" << domain_dim_ << " -> "
          << codomain_dim_ << ")";
      throw ValidationError(msg.str());
    }
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    for (std::size_t j = i + 1; j < samples_.size(); ++j) {
      if ((samples_[i].in - samples_[j].in).norm() <= kDuplicateInputTol &&
          (samples_[i].out - samples_[j].out).norm() > kDuplicateOutputTol) {
        std::ostringstream msg;
        msg << "samples " << i << " and " << j
            << " share an input but disagree on the output";
        throw ValidationError(msg.str());
      }
    }
  }
}

Mat PointMap::inputs() const {
  Mat cols(domain_dim_, static_cast<Index>(samples_.size()));
  for (Index j = 0; j < cols.cols(); ++j) {
    cols.col(j) = samples_[static_cast<std::size_t>(j)].in;
  }
  return cols;
}

Mat PointMap::outputs() const {
  Mat cols(codomain_dim_, static_cast<Index>(samples_.size()));
  for (Index j = 0; j < cols.cols(); ++j) {
    cols.col(j) = samples_[static_cast<std::size_t>(j)].out;
  }
  return cols;
}

std::optional<Vec> PointMap::lookup(const Vec& key, double tol) const {
  if (key.size() != domain_dim_) {
    throw ValidationError("lookup key has wrong length");
  }
  std::optional<Vec> found;
  double best = tol;
  for (const Sample& s : samples_) {
    const double dist = (s.in - key).norm();
    if (dist <= best && (!found || dist < best)) {
      best = dist;
      found = s.out;
    }
  }
  return found;
}

Instance::Instance(Pairing e_pairing_in, Pairing f_pairing_in, PointMap f_map_in,
                   PointMap g_map_in)
    : e_pairing(std::move(e_pairing_in)),
      f_pairing(std::move(f_pairing_in)),
      f_map(std::move(f_map_in)),
      g_map(std::move(g_map_in)) {
  if (f_map.domain_dim() != e_pairing.dim() || g_map.domain_dim() != e_pairing.dim()) {
    throw ValidationError("sample maps do not match the domain pairing dimension");
  }
  if (f_map.codomain_dim() != f_pairing.dim() || g_map.codomain_dim() != f_pairing.dim()) {
    throw ValidationError("sample maps do not match the codomain pairing dimension");
  }
}

ResidualReport residual(const Instance& instance) {
  if (instance.f_map.size() == 0 || instance.g_map.size() == 0) {
    throw ValidationError("empty instance: residual needs at least one sample on each side");
  }
  // <f(x_i), g(a_j)>_F - <x_i, a_j>_E for every pair, as one matrix.
  const Mat lhs = instance.f_map.outputs().transpose() * instance.f_pairing.gram() *
                  instance.g_map.outputs();
  const Mat rhs = instance.f_map.inputs().transpose() * instance.e_pairing.gram() *
                  instance.g_map.inputs();
  const Mat gap = lhs - rhs;

  ResidualReport report;
  report.pair_count = instance.f_map.size() * instance.g_map.size();
  for (Index i = 0; i < gap.rows(); ++i) {
    for (Index j = 0; j < gap.cols(); ++j) {
      const double r = std::abs(gap(i, j));
      if (r > report.max_abs_residual) {
        report.max_abs_residual = r;
        report.worst_f_index = static_cast<std::size_t>(i);
        report.worst_g_index = static_cast<std::size_t>(j);
      }
    }
  }
  return report;
}

double pairing_scale(const Instance& instance) {
  if (instance.f_map.size() == 0 || instance.g_map.size() == 0) {
    throw ValidationError("empty instance: pairing scale needs at least one sample on each side");
  }
  const Mat rhs = instance.f_map.inputs().transpose() * instance.e_pairing.gram() *
                  instance.g_map.inputs();
  return 1.0 + rhs.cwiseAbs().maxCoeff();
}

LinearOperator fit_linear(const PointMap& samples, double rel_tol) {
  if (samples.size() == 0) {
    throw ValidationError("fit_linear needs at least one sample");
  }
  const Mat inputs = samples.inputs();
  const Mat outputs = samples.outputs();

  // Minimal-Frobenius-norm least squares via the pseudoinverse of the input
  // matrix: S = outputs * pinv(inputs).
  Mat fitted = Mat::Zero(samples.codomain_dim(), samples.domain_dim());
  if (inputs.rows() > 0) {
    Eigen::JacobiSVD<Mat> svd(inputs, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() > 0 && sv(0) > 0.0) {
      const double cutoff = kRankTol * sv(0);
      Vec inverted = Vec::Zero(sv.size());
      for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) inverted(i) = 1.0 / sv(i);
      }
      fitted = outputs * svd.matrixV() * inverted.asDiagonal() *
               svd.matrixU().transpose();
    }
  }

  double worst = 0.0;
  double largest_output = 0.0;
  for (Index j = 0; j < inputs.cols(); ++j) {
    worst = std::max(worst, (fitted * inputs.col(j) - outputs.col(j)).norm());
    largest_output = std::max(largest_output, outputs.col(j).norm());
  }
  const double threshold = rel_tol * (1.0 + largest_output);
  if (worst > threshold) {
    std::ostringstream msg;
    msg << "samples are not linear: max fit residual " << worst
        << " exceeds threshold " << threshold;
    throw NotLinearError(msg.str(), worst, threshold);
  }
  return LinearOperator::plain(std::move(fitted));
}

}  // namespace oeq
