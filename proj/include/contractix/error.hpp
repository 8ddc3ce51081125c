#pragma once

#include <stdexcept>
#include <string>

namespace contractix {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Points of different variant or dimension, or a map applied to the wrong shape.
struct ComparabilityError : Error {
  using Error::Error;
};

// Input outside the set on which a map is defined (CubicMK off [0,1]).
struct DomainError : Error {
  using Error::Error;
};

struct InvalidFactorError : Error {
  using Error::Error;
};

struct OutOfRangeError : Error {
  using Error::Error;
};

struct ScheduleTooShortError : Error {
  using Error::Error;
};

struct NonContractionError : Error {
  using Error::Error;
};

struct InvalidFixedPointError : Error {
  using Error::Error;
};

struct SamplingExhaustedError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct UnsupportedError : Error {
  using Error::Error;
};

}  // namespace contractix
