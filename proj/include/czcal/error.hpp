#pragma once

#include <stdexcept>
#include <string>

namespace czcal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Post-selection left no shots in the two-outcome subspace.
class AllShotsDiscarded : public Error {
 public:
  AllShotsDiscarded() : Error("all shots discarded") {}
};

class DegenerateAngle : public Error {
 public:
  DegenerateAngle() : Error("degenerate angle: arctan2(0, 0)") {}
};

class InvalidCircuit : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace czcal
