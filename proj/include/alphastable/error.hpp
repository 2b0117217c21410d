#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace alphastable {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or argument outside its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// All Monte Carlo weights for one observation vanished. Recoverable: retry
/// with a fresh stream or a larger grid.
class DegenerateWeights : public Error {
 public:
  explicit DegenerateWeights(std::size_t index)
      : Error("degenerate Monte Carlo weights at observation " + std::to_string(index)),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace alphastable
