#pragma once

#include <stdexcept>
#include <string>

namespace amqlab {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// A filter cannot absorb the requested number of further inserts.
struct CapacityExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CounterSaturation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnderflowRemoval : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact evaluation refused; the caller should use the floating variant.
struct InfeasibleExact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnumerationTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed serialized bytes.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace amqlab
