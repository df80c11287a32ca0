#pragma once

#include <stdexcept>
#include <string>

namespace qaoace {

// Problem too large for exhaustive treatment (item count, qubit count).
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The only optimal packing is empty, which the unary slack cannot encode.
class UnrepresentableOptimum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qaoace
