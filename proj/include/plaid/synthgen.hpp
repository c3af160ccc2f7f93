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
#include <optional>
#include <string>

#include "plaid/dataset.hpp"

namespace plaid {

enum class SynthCase { Plate2d };

std::optional<SynthCase> parse_synth_case(std::string_view text);

struct SynthConfig {
    SynthCase case_kind = SynthCase::Plate2d;
    std::int64_t n_samples = 20;
    std::uint64_t seed = 0;
    /// Nodes per side, drawn uniformly from [resolution_min, resolution_max].
    int resolution_min = 8;
    int resolution_max = 16;
    double amplitude_min = 0.0;
    double amplitude_max = 0.3;
    double load_min = 0.5;
    double load_max = 2.0;
    /// Training split size; 80% of n_samples (rounded down) when unset.
    std::optional<std::int64_t> n_train;
};

/// Parameters of one plate2d sample.
struct PlateParameters {
    double amplitude = 0.0;  // a
    double load = 1.0;       // p
    int resolution = 8;
};

/// Draws sample `id`'s parameters from the counter-based stream keyed by (seed, id).
PlateParameters plate_parameters(const SynthConfig& config, std::int64_t id);

/// u(x, y) = p (1 + a y) sin(pi x) sin(pi y / (1 + a))
double plate_u(double a, double p, double x, double y);
/// du/dx = p (1 + a y) pi cos(pi x) sin(pi y / (1 + a))
double plate_du_dx(double a, double p, double x, double y);

/// One plate2d sample: unit square with top edge y = 1 + a sin(pi x), a
/// structured grid of resolution^2 nodes split into TRI_3 cells, vertex
/// fields u and du_dx, scalars a, p, u_max and nodal tags Bottom, Right,
/// Top, Left.
Sample plate_sample(const PlateParameters& params);

/// Full dataset with splits train / test, nested train_<k> for k in
/// {n_train/4, n_train/2, n_train} and a public/private alternation of the
/// test ids when the test split holds at least two samples.
/// Throws ConfigInvalid.
Dataset generate(const SynthConfig& config);

}  // namespace plaid
