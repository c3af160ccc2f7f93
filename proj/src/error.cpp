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

#include "plaid/error.hpp"

namespace plaid {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateName: return "DuplicateName";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::InvalidValue: return "InvalidValue";
        case ErrorCode::InvalidLink: return "InvalidLink";
        case ErrorCode::MissingLinkTarget: return "MissingLinkTarget";
        case ErrorCode::NotStructured: return "NotStructured";
        case ErrorCode::NoSuchTime: return "NoSuchTime";
        case ErrorCode::AmbiguousDefault: return "AmbiguousDefault";
        case ErrorCode::AmbiguousQuery: return "AmbiguousQuery";
        case ErrorCode::FieldNotFound: return "FieldNotFound";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::InvalidDataset: return "InvalidDataset";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::NoSuchSplit: return "NoSuchSplit";
        case ErrorCode::IdOutOfRange: return "IdOutOfRange";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::DegenerateReference: return "DegenerateReference";
        case ErrorCode::MissingOutput: return "MissingOutput";
        case ErrorCode::NoPartition: return "NoPartition";
        case ErrorCode::InvalidMesh: return "InvalidMesh";
        case ErrorCode::NotDiskTopology: return "NotDiskTopology";
        case ErrorCode::SolveFailure: return "SolveFailure";
        case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::SingularKernel: return "SingularKernel";
        case ErrorCode::DegenerateInputs: return "DegenerateInputs";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

}  // namespace plaid
