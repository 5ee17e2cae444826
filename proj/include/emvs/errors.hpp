// SPDX-License-Identifier: Apache-2.0
//
// emvs-parafac: angle and polarization estimation for bistatic EMVS-MIMO radar
// Copyright (C) 2026 The emvs-parafac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef EMVS_ERRORS_HPP
#define EMVS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace emvs
{

enum class ErrorCode
{
    argument,        // invalid scalar argument (mode, count, option)
    dimension,       // shape mismatch between operands
    identifiability, // K outside the uniqueness / rotation-invariance bounds
    numerical,       // NaN residual, non-finite data
    degenerate,      // geometry or response that carries no information
    io,              // file read/write failure or malformed dataset
    config           // malformed configuration document
};

const char *to_string(ErrorCode code);

/// Single exception type for the library; the C API maps `code()` onto status values.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what, std::string stage = {})
        : std::runtime_error(stage.empty() ? what : stage + ": " + what),
          code_(code), stage_(std::move(stage)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string &stage() const noexcept { return stage_; }

private:
    ErrorCode code_;
    std::string stage_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what)
{
    throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const char *what)
{
    if (!condition)
        throw Error(code, what);
}

} // namespace emvs

#endif
