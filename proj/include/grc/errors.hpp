#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace grc {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates one of its documented invariants (rejected input).
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Two values that must live over the same state space do not.
class SpaceMismatchError : public Error {
 public:
  using Error::Error;
};

// Classification that is only defined for deterministic operations was
// requested on a stochastic one.
class NondeterministicError : public Error {
 public:
  using Error::Error;
};

// A witness context was requested for an operation that never merges states.
class NoWitnessError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a closed-form quantity.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A state space is too large for the requested dense analysis.
class SpaceCapError : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed the configured cap.  Carries the exact count when
// it fits in 64 bits; `count_overflowed` reports saturation otherwise.
class EnumerationCapError : public Error {
 public:
  EnumerationCapError(const std::string& what, std::uint64_t exact_count,
                      bool overflowed)
      : Error(what), exact_count_(exact_count), overflowed_(overflowed) {}

  std::uint64_t exact_count() const noexcept { return exact_count_; }
  bool count_overflowed() const noexcept { return overflowed_; }

 private:
  std::uint64_t exact_count_;
  bool overflowed_;
};

// Switch-level simulation: two drivers at different levels became connected,
// or an undriven merge left a floating component at conflicting levels.
class DriveFightError : public Error {
 public:
  using Error::Error;
};

// Switch-level simulation: a dual-rail signal left the valid encoding when
// its value was needed or at a step boundary.
class EncodingError : public Error {
 public:
  using Error::Error;
};

}  // namespace grc
