#pragma once

#include <stdexcept>
#include <string>

namespace qra {

// Invalid sizes, probabilities or experiment parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Qubit index out of range or repeated where distinct indices are required.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Operation not defined for the state representation (e.g. a channel on a statevector).
class ModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed numeric input: length mismatches, non-finite values, out-of-range observables.
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Object used in the wrong lifecycle state (e.g. decrypting with an unfrozen decoder).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qra
