#pragma once

#include <stdexcept>
#include <string>

namespace wse {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures: non-convergence, rank deficiency, bad conditioning.
struct NumericError : Error {
  using Error::Error;
};

struct NonConvergenceError : NumericError {
  using NumericError::NumericError;
};

struct IoError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace wse
