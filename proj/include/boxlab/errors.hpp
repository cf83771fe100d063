#pragma once

#include <stdexcept>
#include <string>

namespace boxlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: length mismatches, arrays that are not permutations,
/// unparsable rationals. Distinct from a well-formed object that breaks an
/// invariant.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A well-formed object violates a documented invariant (for example a
/// transform that does not preserve the measure).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// A sparse construction would exceed the configured support cap.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t cap)
      : Error(what), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

/// An operation was called outside its stated precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace boxlab
