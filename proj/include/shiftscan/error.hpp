#pragma once

#include <stdexcept>
#include <string>

namespace shiftscan {

/// Error caused by bad input data or files; the CLI maps these to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace shiftscan
