#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cantordim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor or factory received parameters outside the family's domain.
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

/// A sequence failed the standing hypotheses (positive, non-increasing, summable).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedTailError : public Error {
 public:
  using Error::Error;
};

/// The requested construction does not fit the memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A gauge was evaluated outside (0, A], or a probed scale left that domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// The target gauge does not generate a legal gap sequence.
class SynthesisInfeasibleError : public Error {
 public:
  SynthesisInfeasibleError(const std::string& what, std::uint64_t first_bad_index)
      : Error(what), index_(first_bad_index) {}
  std::uint64_t first_bad_index() const noexcept { return index_; }

 private:
  std::uint64_t index_;
};

/// Malformed sequence or gauge spec text.
class SpecParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cantordim
