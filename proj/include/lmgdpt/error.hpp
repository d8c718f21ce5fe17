// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef LMGDPT_ERROR_HPP
#define LMGDPT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lmgdpt {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: out-of-range parameters, malformed configuration,
/// mismatched dimensions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to deliver a trustworthy result. `measure`
/// carries the diagnostic quantity (residual norm, measured normalization,
/// ...) that tripped the check.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double measure)
      : Error(what), measure_(measure) {}

  double measure() const noexcept { return measure_; }

 private:
  double measure_;
};

// Emits a warning line. Goes to stderr unless a sink was installed.
void log_warning(const std::string& message);

using WarningSink = void (*)(const char* message, void* user_data);
void set_warning_sink(WarningSink sink, void* user_data);

}  // namespace lmgdpt

#endif  // LMGDPT_ERROR_HPP
