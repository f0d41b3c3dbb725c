#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace histq {

// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct NonOrthonormalInput : Error { using Error::Error; };
struct NonIsometricPairs : Error { using Error::Error; };
struct InvariantViolation : Error { using Error::Error; };

struct UnknownLabel : Error { using Error::Error; };
struct UnknownFactor : Error { using Error::Error; };
struct WrongArity : Error { using Error::Error; };
struct SpaceMismatch : Error { using Error::Error; };

struct UnknownTime : Error { using Error::Error; };
struct DuplicateStep : Error { using Error::Error; };
struct NonUnitaryStep : Error { using Error::Error; };

struct UnknownIndex : Error { using Error::Error; };
struct FamilyMismatch : Error { using Error::Error; };
struct ConditionOnNull : Error { using Error::Error; };

// Raised when a probability is requested on a family whose decoherence
// functional has a non-vanishing off-diagonal entry. Carries the offending
// pair of atomic histories (projector names, one per family time) and the
// magnitude of the interference term.
class InconsistentFamily : public Error {
public:
  InconsistentFamily(std::string family, std::vector<std::string> alpha,
                     std::vector<std::string> beta, double magnitude);

  const std::string& family() const { return family_; }
  const std::vector<std::string>& alpha() const { return alpha_; }
  const std::vector<std::string>& beta() const { return beta_; }
  double magnitude() const { return magnitude_; }

private:
  std::string family_;
  std::vector<std::string> alpha_;
  std::vector<std::string> beta_;
  double magnitude_;
};

// Scenario-text errors carry the source position that triggered them.
class ParseError : public Error {
public:
  ParseError(std::string message, int line, int col)
      : Error("line " + std::to_string(line) + ", col " + std::to_string(col) +
              ": " + message),
        line_(line), col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_;
  int col_;
};

struct SyntaxError : ParseError { using ParseError::ParseError; };
struct UnknownReference : ParseError { using ParseError::ParseError; };

}  // namespace histq
