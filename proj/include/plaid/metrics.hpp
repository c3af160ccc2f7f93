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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plaid/dataset.hpp"

namespace plaid {

/// Below this sup-norm (fields) or magnitude (scalars) a reference is
/// rejected instead of silently skipped.
inline constexpr double kDegenerateReference = 1e-30;

struct SamplePrediction {
    std::map<std::string, RealVector> fields;
    std::map<std::string, double> scalars;

    friend bool operator==(const SamplePrediction& a, const SamplePrediction& b);
};

/// Predicted outputs keyed by sample id.
using PredictionBundle = std::map<std::int64_t, SamplePrediction>;

enum class OutputKind { Field, Scalar };

struct OutputScore {
    std::string name;
    OutputKind kind = OutputKind::Field;
    double rrmse = 0.0;
};

struct ScoreReport {
    /// Field outputs first, then scalar outputs; names sorted within each.
    std::vector<OutputScore> outputs;
    double total_error = 0.0;
    std::size_t n_samples = 0;
};

/// Relative RMSE of a field output over n samples:
///   sqrt( (1/n) sum_i (1/N_i) ||ref_i - pred_i||_2^2 / ||ref_i||_inf^2 )
/// with ||.||_inf the largest absolute component.
double rrmse_field(std::span<const RealVector> refs, std::span<const RealVector> preds);

/// sqrt( (1/n) sum_i (ref_i - pred_i)^2 / ref_i^2 )
double rrmse_scalar(std::span<const double> refs, std::span<const double> preds);

/// Sum in fixed pairwise order; identical results regardless of threading.
double pairwise_sum(std::span<const double> values);

/// One RRMSE per output name of the problem over `ids`; total_error is their
/// unweighted mean.
ScoreReport score_subset(const ProblemDefinition& problem, const Dataset& reference,
                         const PredictionBundle& bundle, const IndexList& ids);

/// score_subset over the problem's "test" split.
ScoreReport total_error(const ProblemDefinition& problem, const Dataset& reference, const PredictionBundle& bundle);

/// Public and private reports, each restricted to its side of the hidden partition.
std::pair<ScoreReport, ScoreReport> score_hidden(const ProblemDefinition& problem, const Dataset& reference,
                                                 const PredictionBundle& bundle);

/// Reference values of a field output for one sample: the unique field of that
/// name in the default-time, link-resolved tree, at whichever location it lives.
RealVector reference_field(const Sample& sample, const std::string& name);

void save_bundle(const PredictionBundle& bundle, const std::filesystem::path& dir);
PredictionBundle load_bundle(const std::filesystem::path& dir);

}  // namespace plaid
