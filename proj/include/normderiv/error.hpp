#ifndef NORMDERIV_ERROR_HPP
#define NORMDERIV_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace normderiv {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed norm expression. `offset()` is the byte offset of the offending token.
class syntax_error : public error {
public:
  syntax_error(const std::string& what, std::size_t offset)
      : error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// A parameter outside its admissible range (p <= 1, nonpositive weight, bad alpha/beta, ...).
class domain_error : public error {
public:
  using error::error;
};

/// Mismatched vector/norm/matrix dimensions.
class dimension_error : public error {
public:
  using error::error;
};

/// Semi-inner product or semi-orthogonality requested at a non-smooth point.
class nonsmooth_error : public error {
public:
  using error::error;
};

/// An operation that needs a nonzero vector (or matrix) received zero.
class zero_vector_error : public error {
public:
  using error::error;
};

}  // namespace normderiv

#endif
