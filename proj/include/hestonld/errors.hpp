#pragma once

#include <stdexcept>

namespace hestonld {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter validation.
struct NonPositiveParameter : Error { using Error::Error; };
struct CorrelationOutOfRange : Error { using Error::Error; };
struct StandingAssumptionViolated : Error { using Error::Error; };

// Cgf construction and evaluation.
struct OutsideDomainInterior : Error { using Error::Error; };
struct EmptyDomain : Error { using Error::Error; };
struct DomainExcludesZero : Error { using Error::Error; };
struct InvalidComposition : Error { using Error::Error; };

// Rate function / limits.
struct EmptyInterval : Error { using Error::Error; };
struct OutOfTheoremRange : Error { using Error::Error; };

// Monte Carlo.
struct BudgetExceeded : Error { using Error::Error; };

// CLI and file input.
struct ConfigError : Error { using Error::Error; };

}  // namespace hestonld
