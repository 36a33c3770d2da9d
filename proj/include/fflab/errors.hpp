#pragma once

#include <stdexcept>
#include <string>

namespace fflab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Field / set construction
struct NotPrime : Error { using Error::Error; };
struct ZeroInverse : Error { using Error::Error; };
struct SizeOutOfRange : Error { using Error::Error; };
struct FieldMismatch : Error { using Error::Error; };

// Set algebra
struct EmptyDivisor : Error { using Error::Error; };
struct ZeroDilation : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// Graph extraction / pipelines
struct HypothesisFailed : Error { using Error::Error; };
struct TooSmall : Error { using Error::Error; };
struct NoCollisionInBudget : Error { using Error::Error; };

// Linear algebra / incidence
struct SingularMatrix : Error { using Error::Error; };
struct MassTooSmall : Error { using Error::Error; };

// Distance geometry
struct DegenerateField : Error { using Error::Error; };
struct EqualPoints : Error { using Error::Error; };

// 3-space geometry
struct MissingDirection : Error { using Error::Error; };
struct NotDisjoint : Error { using Error::Error; };
struct NotSkew : Error { using Error::Error; };
struct NoNonzeroSolution : Error { using Error::Error; };
struct ExcludedNotMeetingStem : Error { using Error::Error; };
struct BadConfiguration : Error { using Error::Error; };
struct DegenerateIntersection : Error { using Error::Error; };
struct DegenerateLine : Error { using Error::Error; };

// Experiment driver
struct MissingResults : Error { using Error::Error; };
struct BadConfig : Error { using Error::Error; };

}  // namespace fflab
