// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace biokey {

// Numeric values double as CLI exit codes and C API status codes.
enum class ErrorCode : int {
    Io = 2,
    InvalidParameter = 3,
    InvalidInput = 3,
    Stage = 4,
    Internal = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(ErrorCode::InvalidInput, what) {}
};

class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& what)
        : Error(ErrorCode::InvalidParameter, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

// Raised by extraction stages that legitimately fail on a given input
// (no circle found, no minutiae, ...).
class StageError : public Error {
public:
    explicit StageError(const std::string& what) : Error(ErrorCode::Stage, what) {}
};

}  // namespace biokey
