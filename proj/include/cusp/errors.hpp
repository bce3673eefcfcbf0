#pragma once

#include <stdexcept>
#include <string>

namespace cusp {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// geometry
struct OutOfModuli : Error { using Error::Error; };
struct DegenerateAlpha : Error { using Error::Error; };
struct NotMonotone : Error { using Error::Error; };
struct MonotonicityFailure : Error { using Error::Error; };

// modespace
struct GridMismatch : Error { using Error::Error; };
struct ModeOutOfRange : Error { using Error::Error; };
struct BetaNotOnGrid : Error { using Error::Error; };

// forms
struct StepTooSmall : Error { using Error::Error; };
struct SolverNoConvergence : Error { using Error::Error; };

// model
struct BracketFailure : Error { using Error::Error; };
struct TurningPointInWindow : Error { using Error::Error; };

// branches
struct BranchLost : Error { using Error::Error; };
struct WindowEmpty : Error { using Error::Error; };
struct SingularAtilde : Error { using Error::Error; };
struct GreenNormalizationSmall : Error { using Error::Error; };
struct NoSignChange : Error { using Error::Error; };
struct AmbiguousTracking : Error { using Error::Error; };
struct NotNearCrossing : Error { using Error::Error; };

// cli
struct ConfigInvalid : Error { using Error::Error; };

}  // namespace cusp
