#ifndef SEQMD_ERROR_H_
#define SEQMD_ERROR_H_

#include <stdexcept>
#include <string>

namespace seqmd {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A forward value became NaN or infinite.
class NonFiniteError : public Error {
 public:
  NonFiniteError(std::string op, const std::string& detail)
      : Error("non-finite value produced by op '" + op + "': " + detail),
        op_(std::move(op)) {}
  const std::string& op() const { return op_; }

 private:
  std::string op_;
};

// Invalid configuration or arguments supplied by the caller.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent data/checkpoint file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace seqmd

#endif  // SEQMD_ERROR_H_
