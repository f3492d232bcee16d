#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsga {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGraph : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(const std::string& label)
      : Error("unknown label '" + label + "'"), label_(label) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

// s(w) != r(v) when forming wv; models L_e xi_w = 0.
class InadmissiblePath : public Error {
 public:
  using Error::Error;
};

class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SupportViolation : public Error {
 public:
  using Error::Error;
};

class NotInAlgebra : public Error {
 public:
  explicit NotInAlgebra(double residual)
      : Error("operator is not in the algebra (commutant residual " +
              std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NotPartialIsometry : public Error {
 public:
  using Error::Error;
};

class NotUnitary : public Error {
 public:
  using Error::Error;
};

class InvalidEigenPoint : public Error {
 public:
  using Error::Error;
};

class NonInvariantSubspace : public Error {
 public:
  explicit NonInvariantSubspace(double residual)
      : Error("subspace is not invariant (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class LevelTooSmall : public Error {
 public:
  LevelTooSmall(std::size_t have, std::size_t required)
      : Error("truncation level " + std::to_string(have) + " too small, need at least " +
              std::to_string(required)),
        required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class FixtureMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace fsga
