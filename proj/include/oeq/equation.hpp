#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "oeq/linalg.hpp"

namespace oeq {

// Inputs closer than this are treated as the same sample point.
inline constexpr double kDuplicateInputTol = 1e-12;
// Outputs of coincident inputs may differ by at most this.
inline constexpr double kDuplicateOutputTol = 1e-10;
// Lookup radius used when reading a map back at one of its sample points.
inline constexpr double kLookupTol = 1e-9;

// One evaluation of a sampled map.
struct Sample {
  Vec in;
  Vec out;
};

// A map known only through finitely many evaluations.  Construction checks
// every sample against the declared dimensions and rejects tables where two
// coincident inputs disagree on the output.
class PointMap {
 public:
  PointMap(Index domain_dim, Index codomain_dim, std::vector<Sample> samples);

  Index domain_dim() const { return domain_dim_; }
  Index codomain_dim() const { return codomain_dim_; }
  std::size_t size() const { return samples_.size(); }
  const std::vector<Sample>& samples() const { return samples_; }

  // All inputs / outputs as columns (domain_dim x size / codomain_dim x size).
  Mat inputs() const;
  Mat outputs() const;

  // Output recorded at the sample input nearest to key, if that distance is
  // within tol.  Ties resolve to the earliest sample.
  std::optional<Vec> lookup(const Vec& key, double tol = kLookupTol) const;

 private:
  Index domain_dim_;
  Index codomain_dim_;
  std::vector<Sample> samples_;
};

// A candidate solution pair of the orthogonality equation: forward samples
// f: E -> F, dual samples g: E^dual -> F^dual, and the two pairings the
// equation is read under.
struct Instance {
  Pairing e_pairing;
  Pairing f_pairing;
  PointMap f_map;
  PointMap g_map;

  Instance(Pairing e_pairing, Pairing f_pairing, PointMap f_map, PointMap g_map);

  Index domain_dim() const { return e_pairing.dim(); }
  Index codomain_dim() const { return f_pairing.dim(); }
};

// Worst violation of <f(x), g(a)>_F = <x, a>_E over all sample pairs.
struct ResidualReport {
  double max_abs_residual = 0.0;
  std::size_t worst_f_index = 0;  // f sample achieving the maximum
  std::size_t worst_g_index = 0;  // g sample achieving the maximum
  std::size_t pair_count = 0;
};

ResidualReport residual(const Instance& instance);

// 1 + max |<x, a>_E| over all sample pairs: the size the equation's values
// actually reach, used to make residual thresholds relative.
double pairing_scale(const Instance& instance);

// Least-squares linear fit S of the samples (minimal Frobenius norm among
// minimisers).  Accepted iff max_i |S in_i - out_i| <= rel_tol * (1 + max_i
// |out_i|); otherwise throws NotLinearError with the achieved residual.
// The returned operator carries standard pairings; callers re-attach.
LinearOperator fit_linear(const PointMap& samples, double rel_tol);

}  // namespace oeq
