#pragma once

#include <stdexcept>
#include <string>

namespace oeq {

// Malformed value: bad dimensions, non-orthonormal basis, singular pairing,
// inconsistent sample table, violated configuration constraint, ...
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by fit_linear when no linear operator reproduces the samples at the
// requested tolerance.  Carries the achieved residual and the threshold it
// was compared against.
class NotLinearError : public std::runtime_error {
 public:
  NotLinearError(const std::string& what, double residual, double threshold)
      : std::runtime_error(what), residual_(residual), threshold_(threshold) {}

  double residual() const { return residual_; }
  double threshold() const { return threshold_; }

 private:
  double residual_;
  double threshold_;
};

// Stages of the extraction pipeline, in execution order.  The names returned
// by to_string() are part of the CLI contract.
enum class ExtractStage {
  kPrecondition,    // input residual or sample-spanning check
  kSpan,            // f-range basis construction
  kDualFit,         // fitting the restricted dual map
  kAnnihilator,     // degenerate-subspace construction / quotient bookkeeping
  kQuotientFit,     // fitting the quotient-composed forward map
  kInvertibility,   // conditioning of the extracted core
  kIdentityCheck,   // adjoint identity between the two fitted maps
};

const char* to_string(ExtractStage stage);

// Extraction pipeline failure, tagged with the stage that detected it.
class ExtractError : public std::runtime_error {
 public:
  ExtractError(ExtractStage stage, const std::string& what)
      : std::runtime_error(what), stage_(stage) {}

  ExtractStage stage() const { return stage_; }

 private:
  ExtractStage stage_;
};

// Raised by the inner-product-space decomposition when its extra
// requirements (beyond plain extraction) do not hold.
class NotHilbertError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the file layer: syntax errors, missing or unknown fields,
// wrong shapes.  Message carries a location diagnostic where available.
class FileFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oeq
