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

#include <cmath>

#include "check_code.hpp"
#include "plaid/mmgp.hpp"
#include "plaid/parallel.hpp"
#include "plaid/synthgen.hpp"
#include "test_support.hpp"

using namespace plaid;

namespace {

Dataset plate(std::int64_t n, std::int64_t n_train, int res_min, int res_max, std::uint64_t seed = 17) {
    SynthConfig c;
    c.n_samples = n;
    c.n_train = n_train;
    c.seed = seed;
    c.resolution_min = res_min;
    c.resolution_max = res_max;
    return generate(c);
}

MmgpConfig quick(bool morphing, int modes = 8) {
    MmgpConfig c;
    c.morphing = morphing;
    c.shape_modes = modes;
    c.field_modes = modes;
    c.common_mesh_rings = 10;
    c.gp_rounds = 4;
    return c;
}

/// Rebuilds every sample with an extra vertex field computed from the node coordinates.
template <class F>
Dataset with_field(const Dataset& d, const std::string& name, F value) {
    Dataset out;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(d.size()); ++i) {
        const auto& s = d.sample_at(i);
        auto bases = s.get_mesh()->bases();
        auto& zone = bases[0].zones[0];
        RealVector f(zone.n_vertices);
        for (Eigen::Index v = 0; v < f.size(); ++v) f[v] = value(s, zone.coordinates(v, 0), zone.coordinates(v, 1));
        zone.fields.push_back({name, Location::Vertex, f});
        Sample copy;
        copy.add_tree(build_tree(std::move(bases), 0.0));
        for (const auto& [k, v] : s.scalars()) copy.set_scalar(k, v);
        out.add_sample(std::move(copy));
    }
    out.problem() = d.problem();
    out.problem().out_fields_names.push_back(name);
    std::sort(out.problem().out_fields_names.begin(), out.problem().out_fields_names.end());
    out.infos() = d.infos();
    return out;
}

}  // namespace

TEST_CASE("config text parsing") {
    const auto c = parse_mmgp_config("# tensile-like row\nshape_modes = 8\nfield_modes = 8\nkernel = matern52\n");
    CHECK(c.shape_modes == 8);
    CHECK(c.field_modes == 8);
    CHECK(c.kernel == KernelKind::Matern52);
    CHECK(c.morphing);
    CHECK(parse_mmgp_config(format_mmgp_config(c)) == c);
    const auto r = parse_mmgp_config("morphing = false\nkernel = rbf   # trailing\njitter = 1e-9\ntrain_split = train_8\n");
    CHECK_FALSE(r.morphing);
    CHECK(r.kernel == KernelKind::RBF);
    CHECK(r.jitter == 1e-9);
    CHECK(r.train_split == "train_8");
    PLAID_CHECK_CODE(parse_mmgp_config("colour = blue\n"), ErrorCode::ConfigInvalid);
    PLAID_CHECK_CODE(parse_mmgp_config("shape_modes = eight\n"), ErrorCode::ConfigInvalid);
    PLAID_CHECK_CODE(parse_mmgp_config("shape_modes = 0\n"), ErrorCode::ConfigInvalid);
    PLAID_CHECK_CODE(parse_mmgp_config("shape_modes\n"), ErrorCode::ConfigInvalid);
    PLAID_CHECK_CODE(parse_mmgp_config("kernel = rbf\nkernel = rbf\n"), ErrorCode::ConfigInvalid);
}

TEST_CASE("morphing fit on variable meshes creates one GP per mode and scalar") {
    const auto d = plate(24, 20, 5, 8);
    const auto model = mmgp_fit(d, quick(true));
    CHECK(model.gp_count() == 8 * 2 + 1);
    CHECK(model.input_dimension() == 8 + 2);
    CHECK(model.common_mesh.vertex_count() == 1 + 3 * 10 * 11);
    const auto pred = mmgp_predict(model, d.sample_at(21));
    CHECK(pred.fields.at("u").size() == d.sample_at(21).get_nodes().rows());
    CHECK(pred.scalars.count("u_max") == 1);
}

TEST_CASE("training samples are reproduced up to the truncation error") {
    const auto d = plate(24, 20, 5, 8);
    const auto config = quick(true);
    const auto model = mmgp_fit(d, config);
    for (const auto& fm : model.fields) {
        for (const std::int64_t id : {0, 7, 19}) {
            const auto& s = d.sample_at(id);
            const auto embedding = embed_sample(config, model.common_mesh, s);
            QuerySelector q;
            q.name = fm.name;
            const RealVector truth = field_on_common(embedding, s.get_field(q));
            const RealVector predicted = mmgp_predict_common(model, s).fields.at(fm.name);
            const double relative = (predicted - truth).norm() / truth.norm();
            const double truncation = std::sqrt(fm.pod.discarded_energy) / truth.norm();
            CHECK(relative <= truncation + 1e-4);
        }
    }
}

TEST_CASE("no-morphing fit requires matching vertex counts") {
    const auto d = plate(12, 10, 6, 6);
    const auto model = mmgp_fit(d, quick(false, 4));
    CHECK(model.common_mesh.vertex_count() == 36);
    const auto p = mmgp_predict(model, d.sample_at(11));
    CHECK(p.fields.at("u").size() == 36);
    const auto other = plate(3, 2, 7, 7);
    PLAID_CHECK_CODE(mmgp_predict(model, other.sample_at(0)), ErrorCode::ShapeMismatch);
}

TEST_CASE("constant output field is predicted constant") {
    const auto d = with_field(plate(16, 12, 5, 7), "c", [](const Sample&, double, double) { return 3.5; });
    const auto model = mmgp_fit(d, quick(true, 4));
    const auto it = std::find_if(model.fields.begin(), model.fields.end(), [](const auto& f) { return f.name == "c"; });
    REQUIRE(it != model.fields.end());
    CHECK(it->pod.size() == 0);
    for (const std::int64_t id : {3, 13, 15}) {
        const auto p = mmgp_predict(model, d.sample_at(id));
        CHECK((p.fields.at("c").array() - 3.5).abs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("affine outputs of shape and scalars are learned almost exactly") {
    auto d = with_field(plate(48, 40, 6, 6), "g", [](const Sample& s, double x, double y) {
        return s.get_scalar("p") * x + y + 2.0;
    });
    // Replace u_max by an affine scalar of the inputs.
    Dataset e;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(d.size()); ++i) {
        Sample s = d.sample_at(i);
        s.set_scalar("u_max", 1.0 + 2.0 * s.get_scalar("a") + 3.0 * s.get_scalar("p"));
        e.add_sample(std::move(s));
    }
    e.problem() = d.problem();
    e.problem().out_fields_names = {"g"};
    const auto model = mmgp_fit(e, quick(false, 4));
    const auto report = total_error(e.problem(), e, mmgp_predict_split(model, e, "test"));
    CHECK(report.total_error <= 1e-3);
}

TEST_CASE("fits are deterministic across runs and thread counts") {
    const auto d = plate(14, 10, 5, 7);
    set_thread_count(1);
    const auto a = mmgp_predict_split(mmgp_fit(d, quick(true, 4)), d, "test");
    set_thread_count(3);
    const auto b = mmgp_predict_split(mmgp_fit(d, quick(true, 4)), d, "test");
    const auto c = mmgp_predict_split(mmgp_fit(d, quick(true, 4)), d, "test");
    CHECK(a == b);
    CHECK(b == c);
}

TEST_CASE("saved models predict identically") {
    plaid::testing::TempDir dir;
    const auto d = plate(14, 10, 5, 7);
    const auto model = mmgp_fit(d, quick(true, 4));
    save_mmgp_model(model, dir / "model");
    const auto back = load_mmgp_model(dir / "model");
    CHECK(back.config == model.config);
    CHECK(back.gp_count() == model.gp_count());
    CHECK(mmgp_predict_split(back, d, "test") == mmgp_predict_split(model, d, "test"));
    PLAID_CHECK_CODE(save_mmgp_model(model, dir / "model"), ErrorCode::IoFailure);
}

TEST_CASE("prediction rejects a dataset with other problem names") {
    const auto d = plate(14, 10, 5, 7);
    const auto model = mmgp_fit(d, quick(true, 4));
    auto other = plate(14, 10, 5, 7);
    other.problem().out_scalars_names = {"something_else"};
    PLAID_CHECK_CODE(mmgp_predict_split(model, other, "test"), ErrorCode::ConfigInvalid);
}

TEST_CASE("empty or unknown training split") {
    auto d = plate(6, 4, 5, 5);
    auto c = quick(true, 2);
    c.train_split = "nope";
    PLAID_CHECK_CODE(mmgp_fit(d, c), ErrorCode::NoSuchSplit);
    d.problem().splits["empty"] = {};
    c.train_split = "empty";
    PLAID_CHECK_CODE(mmgp_fit(d, c), ErrorCode::ConfigInvalid);
}
