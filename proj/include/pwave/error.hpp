#pragma once

#include <stdexcept>
#include <string>

namespace pwave {

// Bad arguments or inconsistent data (exit code 2 at the CLI).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Grid too coarse for the requested band limit.
class AliasingError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Unknown names or out-of-domain parameters in a run configuration.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Energy guard tripped or non-finite state (exit code 3).
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Duhamel iteration failed to contract.
class IntervalTooLong : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem and parse failures (exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pwave
