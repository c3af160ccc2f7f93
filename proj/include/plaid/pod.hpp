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

#include <Eigen/Core>

#include "plaid/mesh_tree.hpp"

namespace plaid {

/// Snapshot POD: mean plus orthonormal modes of the centred snapshots.
struct PodBasis {
    RealVector mean;            // length N
    Eigen::MatrixXd modes;      // N x k, orthonormal columns
    RealVector singular_values; // k, non-increasing
    /// Sum of squared singular values left out of the basis.
    double discarded_energy = 0.0;

    Eigen::Index size() const { return modes.cols(); }
};

/// Relative singular value below which a direction counts as numerically null.
inline constexpr double kRankTolerance = 1e-12;

/// Top-k POD of an s x N snapshot matrix (one snapshot per row). Works on the
/// s x s Gram matrix when N > s and on the N x N covariance otherwise. Each
/// mode is signed so that its largest-magnitude entry is positive.
/// Throws RankDeficient when k exceeds the numerical rank.
PodBasis pod_fit(const Eigen::MatrixXd& snapshots, Eigen::Index k);

/// As pod_fit, but keeps min(k, numerical rank) modes (possibly none).
PodBasis pod_fit_up_to(const Eigen::MatrixXd& snapshots, Eigen::Index k);

RealVector pod_project(const PodBasis& basis, const RealVector& field);
RealVector pod_reconstruct(const PodBasis& basis, const RealVector& coefficients);

}  // namespace plaid
