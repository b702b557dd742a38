// Copyright 2026 The svqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVQC_ERROR_HPP
#define SVQC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace svqc {

// Error categories surfaced through the C API as status codes.
enum class ErrorKind {
    InvalidInput = 1,   // non-finite angle, out-of-range action, bad shot count
    Config = 2,         // dimension mismatch, malformed config or checkpoint
    Bridge = 3,         // subprocess launch, timeout, protocol violation
    Usage = 4,          // step after done and similar call-order mistakes
    State = 5,          // backward before forward
    Numeric = 6,        // non-positive probability ratio, empty buffer
    Io = 7,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

struct InvalidInputError : Error {
    explicit InvalidInputError(const std::string &w) : Error(ErrorKind::InvalidInput, w) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string &w) : Error(ErrorKind::Config, w) {}
};
struct BridgeError : Error {
    explicit BridgeError(const std::string &w) : Error(ErrorKind::Bridge, w) {}
};
struct UsageError : Error {
    explicit UsageError(const std::string &w) : Error(ErrorKind::Usage, w) {}
};
struct StateError : Error {
    explicit StateError(const std::string &w) : Error(ErrorKind::State, w) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string &w) : Error(ErrorKind::Numeric, w) {}
};
struct IoError : Error {
    explicit IoError(const std::string &w) : Error(ErrorKind::Io, w) {}
};

} // namespace svqc

#endif
