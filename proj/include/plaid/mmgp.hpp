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
#include <string>
#include <string_view>
#include <vector>

#include "plaid/dataset.hpp"
#include "plaid/gp.hpp"
#include "plaid/metrics.hpp"
#include "plaid/morph.hpp"
#include "plaid/pod.hpp"
#include "plaid/transfer.hpp"

namespace plaid {

/// Pipeline settings. Text form: one `key = value` per line, `#` comments.
///
///   morphing          = true | false
///   shape_modes       = 8
///   field_modes       = 8
///   kernel            = matern52 | rbf
///   jitter            = 1e-10
///   snap_tolerance    = 0.05     (relative to the source bounding-box diagonal)
///   common_mesh_rings = 24       (unit-disk common mesh, morphing only)
///   train_split       = train
///   gp_rounds         = 10
struct MmgpConfig {
    bool morphing = true;
    std::int64_t shape_modes = 8;
    std::int64_t field_modes = 8;
    KernelKind kernel = KernelKind::Matern52;
    double jitter = 1e-10;
    double snap_tolerance = 0.05;
    int common_mesh_rings = 24;
    std::string train_split = "train";
    int gp_rounds = 10;

    friend bool operator==(const MmgpConfig&, const MmgpConfig&) = default;
};

/// Throws ConfigInvalid on unknown keys, malformed values or out-of-range settings.
MmgpConfig parse_mmgp_config(std::string_view text);
MmgpConfig load_mmgp_config(const std::filesystem::path& path);
std::string format_mmgp_config(const MmgpConfig& config);

/// Regressor for one POD coefficient or output scalar: a GP, or a constant
/// when the training targets do not vary.
struct CoefficientRegressor {
    std::optional<GpModel> gp;
    double constant = 0.0;

    /// Posterior means for the rows of `inputs`.
    RealVector predict(const Eigen::MatrixXd& inputs) const;
};

struct MmgpFieldModel {
    std::string name;
    PodBasis pod;  // on the common mesh vertices
    std::vector<CoefficientRegressor> regressors;  // one per retained mode
};

struct MmgpModel {
    MmgpConfig config;
    std::vector<std::string> in_scalars_names;
    std::vector<std::string> out_scalars_names;
    std::vector<std::string> out_fields_names;
    /// Unit disk when morphing, otherwise the first training sample's mesh.
    SurfaceMesh2D common_mesh;
    /// Over the stacked (x, y) coordinate fields on the common mesh.
    PodBasis shape_pod;
    std::vector<MmgpFieldModel> fields;
    std::map<std::string, CoefficientRegressor> scalars;

    /// Shape modes plus input scalars.
    Eigen::Index input_dimension() const;
    /// Number of fitted Gaussian processes (constants excluded).
    std::size_t gp_count() const;
};

/// A sample as seen from the common mesh.
struct SampleEmbedding {
    /// Sample vertices in the common frame (morphed, or as is).
    RealMatrix frame_positions;
    IndexMatrix triangles;
    /// Sample vertices to common vertices; empty when morphing is off.
    std::optional<TransferOperator> to_common;
    /// Stacked (x, y) coordinates on the common mesh.
    RealVector shape_snapshot;
};

/// Mesh of the sample's unique 2D zone at its default time, links resolved.
SurfaceMesh2D sample_surface_mesh(const Sample& sample);

SampleEmbedding embed_sample(const MmgpConfig& config, const SurfaceMesh2D& common_mesh, const Sample& sample);

/// Common-mesh view of a vertex field of an embedded sample.
RealVector field_on_common(const SampleEmbedding& embedding, const RealVector& field);

/// Fits the pipeline on the dataset's training split (config.train_split):
/// morphing and transfer to the common mesh, POD of the coordinates, POD of
/// every output field, and one regressor per retained coefficient and per
/// output scalar, on inputs (shape coefficients, input scalars).
MmgpModel mmgp_fit(const Dataset& dataset, const MmgpConfig& config);

struct CommonPrediction {
    RealVector inputs;  // GP input row
    std::map<std::string, RealVector> coefficients;
    std::map<std::string, RealVector> fields;  // on the common mesh
    std::map<std::string, double> scalars;
};

CommonPrediction mmgp_predict_common(const MmgpModel& model, const Sample& sample);

/// Output scalars, and output fields on the sample's own vertices.
SamplePrediction mmgp_predict(const MmgpModel& model, const Sample& sample);

/// Predictions for every sample of a split. The dataset's problem names must
/// match the model's (ConfigInvalid otherwise).
PredictionBundle mmgp_predict_split(const MmgpModel& model, const Dataset& dataset, const std::string& split);

/// Model directory: model.manifest plus blobs. The directory must be absent or empty.
void save_mmgp_model(const MmgpModel& model, const std::filesystem::path& dir);
MmgpModel load_mmgp_model(const std::filesystem::path& dir);

}  // namespace plaid
