/*
 Copyright 2026 The PLAID-cpp Authors
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plaid {

enum class ErrorCode {
    // mesh tree
    DuplicateName,
    DimensionMismatch,
    IndexOutOfRange,
    InvalidValue,
    InvalidLink,
    MissingLinkTarget,
    NotStructured,
    // sample queries
    NoSuchTime,
    AmbiguousDefault,
    AmbiguousQuery,
    FieldNotFound,
    NotFound,
    // dataset store
    IoFailure,
    InvalidDataset,
    FormatError,
    VersionMismatch,
    NoSuchSplit,
    IdOutOfRange,
    // metrics
    ShapeMismatch,
    DegenerateReference,
    MissingOutput,
    NoPartition,
    // morphing / transfer
    InvalidMesh,
    NotDiskTopology,
    SolveFailure,
    PointOutsideDomain,
    // surrogate
    RankDeficient,
    SingularKernel,
    DegenerateInputs,
    ConfigInvalid,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Malformed on-disk content. Carries the offending file and the byte offset
/// at which reading went wrong (0 when the whole file is rejected).
class FormatError : public Error {
public:
    FormatError(std::string path, std::uint64_t offset, const std::string& what)
        : Error(ErrorCode::FormatError,
                path + " (byte " + std::to_string(offset) + "): " + what),
          path_(std::move(path)), offset_(offset) {}

    const std::string& path() const noexcept { return path_; }
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::string path_;
    std::uint64_t offset_;
};

}  // namespace plaid
