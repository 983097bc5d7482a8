// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace peepkit {

/// Base class for all peepkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad files, broken invariants, bad arguments.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The evidence at hand cannot support a decision. `channel()` names what is missing.
class InsufficientEvidence : public Error {
 public:
  explicit InsufficientEvidence(std::string channel)
      : Error("insufficient evidence: missing " + channel), channel_(std::move(channel)) {}

  const std::string& channel() const noexcept { return channel_; }

 private:
  std::string channel_;
};

}  // namespace peepkit
