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

#include "plaid/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plaid/parallel.hpp"

namespace plaid {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) for draw `counter` of sample `id`.
double uniform(std::uint64_t seed, std::int64_t id, std::uint64_t counter) {
    const std::uint64_t key = mix64(seed + kGolden * (static_cast<std::uint64_t>(id) + 1));
    const std::uint64_t bits = mix64(key + kGolden * (counter + 1));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

void check(const SynthConfig& c) {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::ConfigInvalid, m); };
    if (c.n_samples < 2) fail("n_samples must be at least 2");
    if (c.resolution_min < 2 || c.resolution_max < c.resolution_min) fail("resolution range must satisfy 2 <= min <= max");
    if (!(c.amplitude_min >= 0.0) || !(c.amplitude_max >= c.amplitude_min) || !(c.amplitude_max < 1.0)) {
        fail("amplitude range must satisfy 0 <= min <= max < 1");
    }
    if (!(c.load_min > 0.0) || !(c.load_max >= c.load_min) || !std::isfinite(c.load_max)) {
        fail("load range must satisfy 0 < min <= max");
    }
    if (c.n_train && (*c.n_train < 1 || *c.n_train >= c.n_samples)) fail("n_train must lie in [1, n_samples - 1]");
}

IndexList iota_ids(std::int64_t begin, std::int64_t end) {
    IndexList ids;
    for (auto i = begin; i < end; ++i) ids.push_back(i);
    return ids;
}

}  // namespace

std::optional<SynthCase> parse_synth_case(std::string_view text) {
    if (text == "plate2d") return SynthCase::Plate2d;
    return std::nullopt;
}

PlateParameters plate_parameters(const SynthConfig& config, std::int64_t id) {
    PlateParameters p;
    p.amplitude = config.amplitude_min + (config.amplitude_max - config.amplitude_min) * uniform(config.seed, id, 0);
    p.load = config.load_min + (config.load_max - config.load_min) * uniform(config.seed, id, 1);
    const int span = config.resolution_max - config.resolution_min + 1;
    p.resolution = config.resolution_min + std::min(span - 1, static_cast<int>(uniform(config.seed, id, 2) * span));
    return p;
}

double plate_u(double a, double p, double x, double y) {
    using std::numbers::pi;
    return p * (1.0 + a * y) * std::sin(pi * x) * std::sin(pi * y / (1.0 + a));
}

double plate_du_dx(double a, double p, double x, double y) {
    using std::numbers::pi;
    return p * (1.0 + a * y) * pi * std::cos(pi * x) * std::sin(pi * y / (1.0 + a));
}

Sample plate_sample(const PlateParameters& params) {
    using std::numbers::pi;
    const int r = params.resolution;
    const double a = params.amplitude;
    const double p = params.load;
    const std::int64_t n = static_cast<std::int64_t>(r) * r;
    auto node = [r](int i, int j) { return static_cast<std::int64_t>(j) * r + i; };

    Zone zone;
    zone.name = "Zone";
    zone.type = ZoneType::Unstructured;
    zone.n_vertices = n;
    zone.coordinates.resize(n, 2);
    for (int j = 0; j < r; ++j) {
        const double t = static_cast<double>(j) / (r - 1);
        for (int i = 0; i < r; ++i) {
            const double x = static_cast<double>(i) / (r - 1);
            zone.coordinates(node(i, j), 0) = x;
            zone.coordinates(node(i, j), 1) = t * (1.0 + a * std::sin(pi * x));
        }
    }

    ElementBlock block;
    block.type = ElementType::Tri3;
    block.connectivity.resize(2 * static_cast<Eigen::Index>(r - 1) * (r - 1), 3);
    Eigen::Index e = 0;
    for (int j = 0; j + 1 < r; ++j) {
        for (int i = 0; i + 1 < r; ++i) {
            const auto n0 = node(i, j), n1 = node(i + 1, j), n2 = node(i + 1, j + 1), n3 = node(i, j + 1);
            block.connectivity.row(e++) << n0, n1, n2;
            block.connectivity.row(e++) << n0, n2, n3;
        }
    }
    block.range_begin = 0;
    block.range_end = block.connectivity.rows();
    zone.element_blocks.push_back(std::move(block));

    RealVector u(n), du(n);
    for (std::int64_t v = 0; v < n; ++v) {
        const double x = zone.coordinates(v, 0), y = zone.coordinates(v, 1);
        u[v] = plate_u(a, p, x, y);
        du[v] = plate_du_dx(a, p, x, y);
    }
    const double u_max = u.maxCoeff();
    zone.fields.push_back({"u", Location::Vertex, std::move(u)});
    zone.fields.push_back({"du_dx", Location::Vertex, std::move(du)});

    IndexList bottom, right, top, left;
    for (int k = 0; k < r; ++k) {
        bottom.push_back(node(k, 0));
        top.push_back(node(k, r - 1));
        left.push_back(node(0, k));
        right.push_back(node(r - 1, k));
    }
    zone.tags.push_back({"Bottom", TagKind::Nodal, std::move(bottom)});
    zone.tags.push_back({"Right", TagKind::Nodal, std::move(right)});
    zone.tags.push_back({"Top", TagKind::Nodal, std::move(top)});
    zone.tags.push_back({"Left", TagKind::Nodal, std::move(left)});

    Base base;
    base.name = "Base_2_2";
    base.cell_dim = 2;
    base.phys_dim = 2;
    base.zones.push_back(std::move(zone));

    Sample sample;
    std::vector<Base> bases;
    bases.push_back(std::move(base));
    sample.add_tree(build_tree(std::move(bases), 0.0));
    sample.set_scalar("a", a);
    sample.set_scalar("p", p);
    sample.set_scalar("u_max", u_max);
    return sample;
}

Dataset generate(const SynthConfig& config) {
    check(config);
    const auto n = config.n_samples;
    std::vector<Sample> samples(static_cast<std::size_t>(n));
    parallel_for(samples.size(), [&](std::size_t i) {
        samples[i] = plate_sample(plate_parameters(config, static_cast<std::int64_t>(i)));
    });

    Dataset dataset;
    for (auto& s : samples) dataset.add_sample(std::move(s));

    const std::int64_t n_train = config.n_train.value_or(std::clamp<std::int64_t>(n * 4 / 5, 1, n - 1));
    auto& problem = dataset.problem();
    problem.task = TaskKind::Regression;
    problem.in_scalars_names = {"a", "p"};
    problem.out_scalars_names = {"u_max"};
    problem.in_fields_names = {};
    problem.out_fields_names = {"du_dx", "u"};
    problem.constant_topology = config.resolution_min == config.resolution_max;
    problem.splits["train"] = iota_ids(0, n_train);
    problem.splits["test"] = iota_ids(n_train, n);
    for (const auto k : {n_train / 4, n_train / 2, n_train}) {
        if (k > 0) problem.splits["train_" + std::to_string(k)] = iota_ids(0, k);
    }
    if (n - n_train >= 2) {
        std::map<std::int64_t, Subset> partition;
        for (auto id = n_train; id < n; ++id) partition[id] = (id - n_train) % 2 == 0 ? Subset::Public : Subset::Private;
        problem.hidden_partition = std::move(partition);
    }

    auto& infos = dataset.infos();
    infos["format_version"] = std::to_string(kFormatVersion);
    infos["case"] = "plate2d";
    infos["seed"] = std::to_string(config.seed);
    infos["n_samples"] = std::to_string(n);
    infos["description"] = "Synthetic plate with a sinusoidal top edge and closed-form outputs";
    return dataset;
}

}  // namespace plaid
