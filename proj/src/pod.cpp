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

#include "plaid/pod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace plaid {

namespace {


PodBasis fit(const Eigen::MatrixXd& snapshots, Eigen::Index k, bool clamp) {
    const auto s = snapshots.rows();
    const auto n = snapshots.cols();
    if (s < 1 || n < 1) throw Error(ErrorCode::ShapeMismatch, "empty snapshot matrix");
    if (k < 0 || (!clamp && k < 1) || k > std::min(s, n)) {
        if (!clamp) {
            throw Error(ErrorCode::ConfigInvalid, "mode count " + std::to_string(k) + " outside [1, " +
                                                      std::to_string(std::min(s, n)) + "]");
        }
        k = std::clamp<Eigen::Index>(k, 0, std::min(s, n));
    }
    if (!snapshots.allFinite()) throw Error(ErrorCode::InvalidValue, "non-finite snapshot entry");

    PodBasis basis;
    basis.mean = snapshots.colwise().mean().transpose();
    const Eigen::MatrixXd centred = snapshots.rowwise() - basis.mean.transpose();

    const auto m = std::min(s, n);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw Error(ErrorCode::SolveFailure, "snapshot SVD failed");
    const RealVector sigma = svd.singularValues();
    Eigen::MatrixXd modes = svd.matrixV();

    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * basis.mean.norm() * std::sqrt(double(s));
    const double threshold = std::max(kRankTolerance * (m > 0 ? sigma[0] : 0.0), roundoff);
    Eigen::Index rank = 0;
    while (rank < m && sigma[rank] > threshold && sigma[rank] > 0.0) ++rank;
    if (k > rank) {
        if (!clamp) {
            throw Error(ErrorCode::RankDeficient, "requested " + std::to_string(k) + " modes but numerical rank is " +
                                                      std::to_string(rank));
        }
        k = rank;
    }

    for (Eigen::Index i = 0; i < k; ++i) {
        Eigen::Index arg = 0;
        modes.col(i).cwiseAbs().maxCoeff(&arg);
        if (modes(arg, i) < 0.0) modes.col(i) = -modes.col(i);
    }

    basis.modes = modes.leftCols(k);
    basis.singular_values = sigma.head(k);
    basis.discarded_energy = sigma.tail(m - k).squaredNorm();
    return basis;
}

}  // namespace

PodBasis pod_fit(const Eigen::MatrixXd& snapshots, Eigen::Index k) { return fit(snapshots, k, false); }

PodBasis pod_fit_up_to(const Eigen::MatrixXd& snapshots, Eigen::Index k) { return fit(snapshots, k, true); }

RealVector pod_project(const PodBasis& basis, const RealVector& field) {
    if (field.size() != basis.mean.size()) {
        throw Error(ErrorCode::ShapeMismatch, "field length " + std::to_string(field.size()) + " differs from basis length " +
                                                  std::to_string(basis.mean.size()));
    }
    return basis.modes.transpose() * (field - basis.mean);
}

RealVector pod_reconstruct(const PodBasis& basis, const RealVector& coefficients) {
    if (coefficients.size() != basis.size()) {
        throw Error(ErrorCode::ShapeMismatch, std::to_string(coefficients.size()) + " coefficients for " +
                                                  std::to_string(basis.size()) + " modes");
    }
    return basis.mean + basis.modes * coefficients;
}

}  // namespace plaid
