// Copyright 2026 The tpl-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace tplbench {

// Base class for all recoverable toolkit failures. The CLI maps these to
// exit code 1; usage errors are handled by the argument parser (exit 2).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// File could not be opened or read/written.
class IoError : public Error {
public:
  using Error::Error;
};

// Input file exists but its content does not form a valid corpus/matrix.
class FormatError : public Error {
public:
  using Error::Error;
};

// Inconsistent or out-of-range configuration (flags, matrix entries,
// strategy parameters).
class ConfigError : public Error {
public:
  using Error::Error;
};

// Argument outside an operation's mathematical domain.
class DomainError : public Error {
public:
  using Error::Error;
};

// Evaluation could not be carried out (empty ground truth, disjoint ids).
class EvalError : public Error {
public:
  using Error::Error;
};

// Remote completion failed after exhausting retries, or the reply was
// malformed. `status()` carries the last HTTP status, 0 for transport-level
// failures.
class BackendError : public Error {
public:
  explicit BackendError(const std::string& what, int status = 0)
      : Error(what), status_(status) {}

  int status() const { return status_; }

private:
  int status_;
};

}  // namespace tplbench
