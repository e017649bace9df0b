// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace qhd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A configuration violates the hard-disk constraint.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class InvalidScenario : public Error {
 public:
  using Error::Error;
};

/// A basis, fragment or matrix would exceed its configured size cap.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, double estimated_size)
      : Error(what), estimated_size_(estimated_size) {}

  /// Estimated (or lower-bound) size of the object that was refused.
  double estimated_size() const noexcept { return estimated_size_; }

 private:
  double estimated_size_;
};

/// Non-finite values or a failed dense solve.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Observable undefined for the given input (e.g. Q at eta = 0 or 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace qhd
