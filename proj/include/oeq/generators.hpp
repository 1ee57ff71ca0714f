#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "oeq/decomposition.hpp"

namespace oeq {

// Deterministic 64-bit PRNG (SplitMix64: Steele, Lea & Flood's split-mix
// finaliser).  Chosen over std::mt19937 so the byte-level stream is pinned by
// this header rather than by a library implementation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 significant bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Standard normal via the basic Box-Muller transform (cosine branch; one
  // fresh pair of uniforms per call, no caching).
  double next_gaussian();

 private:
  std::uint64_t state_;
};

enum class PairingMode {
  kStandard,          // identity gram
  kRandomSpd,         // random symmetric positive definite, spectrum in [1, 2]
  kRandomInvertible,  // random invertible, singular values in [1, 2]
};

enum class SectionMode {
  kZero,           // sections without offsets: the pair is linear
  kPolynomial,     // polynomial offsets (powers of the key's squared norm)
  kTrigonometric,  // sinusoidal offsets
};

const char* to_string(PairingMode mode);
const char* to_string(SectionMode mode);
std::optional<PairingMode> parse_pairing_mode(std::string_view name);
std::optional<SectionMode> parse_section_mode(std::string_view name);

// Recipe for a random solution pair.  Constraints (checked by validate):
// 1 <= domain_dim <= codomain_dim, span_rank = degenerate_rank + domain_dim,
// span_rank <= codomain_dim, zero sections require degenerate_rank 0 (an
// offset that is identically zero cannot manifest extra span directions),
// grid_size is 0 (use the default) or at least domain_dim.
struct GenConfig {
  Index domain_dim = 1;
  Index codomain_dim = 1;
  Index span_rank = 1;
  Index degenerate_rank = 0;
  PairingMode pairing_mode = PairingMode::kStandard;
  SectionMode section_mode = SectionMode::kPolynomial;
  std::uint64_t seed = 0;
  Index grid_size = 0;
};

void validate(const GenConfig& config);

// Grid size actually used: the configured one, or
// max(2 * domain_dim, domain_dim + degenerate_rank + 3) when unset.
Index effective_grid_size(const GenConfig& config);

struct GeneratedCase {
  Decomposition decomposition;
  std::vector<Vec> x_grid;      // spans the domain by construction
  std::vector<Vec> alpha_grid;  // spans the domain dual by construction
};

// Deterministic in the seed: the same config always produces bitwise
// identical output.  The generated certificate is faithful: evaluating it on
// the grids yields an instance whose extraction recovers the configured
// span and degenerate ranks.
GeneratedCase gen_case(const GenConfig& config);

Decomposition gen_decomposition(const GenConfig& config);

// synthesize(gen_case(config)) in one step.
Instance gen_instance(const GenConfig& config);

}  // namespace oeq
