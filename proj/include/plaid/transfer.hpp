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

#include <array>
#include <cstdint>
#include <vector>

#include "plaid/mesh_tree.hpp"

namespace plaid {

/// Default out-of-domain tolerance, relative to the source bounding-box diagonal.
inline constexpr double kDefaultSnapTolerance = 1e-8;

/// P1 interpolation stencil of one target point.
struct TransferEntry {
    std::int64_t element = 0;
    std::array<std::int64_t, 3> nodes{};
    std::array<double, 3> weights{};
    bool snapped = false;  // located outside every triangle, within tolerance
};

struct TransferOperator {
    std::vector<TransferEntry> entries;
    std::int64_t source_vertex_count = 0;
};

/// Locates every target in the source triangulation through a uniform grid.
/// Points outside all triangles by at most snap_tolerance * bbox diagonal
/// take the barycentrics of their closest point on the nearest triangle;
/// anything farther raises PointOutsideDomain. Weights are non-negative and
/// sum to one.
TransferOperator build_transfer(const RealMatrix& source_positions, const IndexMatrix& triangles,
                                const RealMatrix& targets, double snap_tolerance = kDefaultSnapTolerance);

/// Target values as weighted sums of the source vertex values.
RealVector apply_transfer(const TransferOperator& op, const RealVector& field);

}  // namespace plaid
