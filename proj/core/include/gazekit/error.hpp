#pragma once

#include <stdexcept>
#include <string>

namespace gazekit {

/// Category of a library failure. Tests and the CLI dispatch on this
/// instead of matching message text.
enum class Errc {
  FormatError,           // malformed input file / missing column
  OrderingError,         // timestamps not strictly increasing
  InsufficientData,      // operation needs more samples than provided
  UndefinedDispersion,   // dispersion window contains no valid sample
  UpsamplingUnsupported, // requested rate above the native rate
  EmptyClass,            // a state/class has no assigned samples
  InvalidParameter,      // out-of-range scalar parameter
  UndefinedScore,        // behavioral score denominator is empty
  UnsupportedStimulus,   // stimulus track is not a step-ramp design
  InvalidSpec,           // malformed stimulus/generator specification
  NoFeasibleThreshold,   // every grid cell was infeasible
  Internal,              // broken internal invariant
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::FormatError: return "format-error";
    case Errc::OrderingError: return "ordering-error";
    case Errc::InsufficientData: return "insufficient-data";
    case Errc::UndefinedDispersion: return "undefined-dispersion";
    case Errc::UpsamplingUnsupported: return "upsampling-unsupported";
    case Errc::EmptyClass: return "empty-class";
    case Errc::InvalidParameter: return "invalid-parameter";
    case Errc::UndefinedScore: return "undefined-score";
    case Errc::UnsupportedStimulus: return "unsupported-stimulus";
    case Errc::InvalidSpec: return "invalid-spec";
    case Errc::NoFeasibleThreshold: return "no-feasible-threshold";
    case Errc::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace gazekit
