// Copyright 2026 The qobs Authors
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

namespace qobs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument, index or configuration value.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// A requested register or matrix exceeds a configured size cap.
class ResourceError : public Error {
  public:
    using Error::Error;
};

/// Two objects that must agree in size do not.
class SizeMismatch : public Error {
  public:
    using Error::Error;
};

/// Malformed operator, matrix or config text.
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Post-selection onto a branch with (numerically) zero weight.
class DegeneratePostSelection : public Error {
  public:
    using Error::Error;
};

} // namespace qobs
