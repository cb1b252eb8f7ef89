#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weil {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse failure; offset is a byte position into the input text.
struct SyntaxError : Error {
  SyntaxError(std::size_t offset, const std::string& expected)
      : Error("syntax error at offset " + std::to_string(offset) +
              ": expected " + expected),
        offset(offset),
        expected(expected) {}
  std::size_t offset;
  std::string expected;
};

struct DomainError : Error {
  using Error::Error;
};

// Division request where the denominator is not a unit (zero real part).
struct DivisionByNonUnit : Error {
  using Error::Error;
};

struct ZeroRealPart : DivisionByNonUnit {
  using DivisionByNonUnit::DivisionByNonUnit;
};

struct AlgebraMismatch : Error {
  using Error::Error;
};

struct InputError : Error {
  using Error::Error;
};

struct UnsampleablePoint : Error {
  using Error::Error;
};

struct PatchMismatch : Error {
  using Error::Error;
};

struct DegenerateMetric : Error {
  using Error::Error;
};

struct NotProjectable : Error {
  using Error::Error;
};

struct NonAffineSection : Error {
  using Error::Error;
};

struct OddDimensionRequired : Error {
  using Error::Error;
};

struct MatchingImpossible : Error {
  using Error::Error;
};

struct SingularJacobian : Error {
  using Error::Error;
};

}  // namespace weil
