#pragma once

#include <stdexcept>
#include <string>

namespace finrogue {

/// Rejected input: bad parameters, malformed configuration, violated
/// preconditions. The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that was set up correctly but could not finish: blow-up,
/// a vanishing denominator, a growth fit without a usable window. The CLI
/// maps these to exit code 2.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An output destination could not be written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace finrogue
