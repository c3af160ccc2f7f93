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
#include <numbers>

#include "check_code.hpp"
#include "plaid/parallel.hpp"
#include "plaid/synthgen.hpp"

using namespace plaid;

namespace {

SynthConfig config(std::int64_t n, std::uint64_t seed = 1) {
    SynthConfig c;
    c.n_samples = n;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("flat plate has zero u on the top and bottom edges") {
    const auto s = plate_sample(PlateParameters{0.0, 1.3, 7});
    QuerySelector q;
    q.name = "u";
    const auto u = s.get_field(q);
    const auto tags = s.get_nodal_tags();
    for (const auto* edge : {"Bottom", "Top"}) {
        for (const auto v : tags.at(edge)) CHECK(std::abs(u[v]) <= 1e-15);
    }
    const auto nodes = s.get_nodes();
    CHECK(nodes.col(1).maxCoeff() == 1.0);
}

TEST_CASE("fields equal the closed form at every node") {
    const auto d = generate(config(6, 9));
    for (std::int64_t i = 0; i < 6; ++i) {
        const auto& s = d.sample_at(i);
        const double a = s.get_scalar("a"), p = s.get_scalar("p");
        const auto nodes = s.get_nodes();
        QuerySelector qu, qd;
        qu.name = "u";
        qd.name = "du_dx";
        const auto u = s.get_field(qu), du = s.get_field(qd);
        double u_max = -1e300;
        for (Eigen::Index v = 0; v < nodes.rows(); ++v) {
            const double x = nodes(v, 0), y = nodes(v, 1);
            const double pi = std::numbers::pi;
            CHECK(std::abs(u[v] - p * (1 + a * y) * std::sin(pi * x) * std::sin(pi * y / (1 + a))) <= 1e-14);
            CHECK(std::abs(du[v] - p * (1 + a * y) * pi * std::cos(pi * x) * std::sin(pi * y / (1 + a))) <= 1e-14);
            u_max = std::max(u_max, u[v]);
        }
        CHECK(s.get_scalar("u_max") == u_max);
        const auto tags = s.get_nodal_tags();
        for (const auto v : tags.at("Top")) {
            CHECK(std::abs(nodes(v, 1) - (1 + a * std::sin(std::numbers::pi * nodes(v, 0)))) <= 1e-15);
        }
        for (const auto v : tags.at("Bottom")) CHECK(nodes(v, 1) == 0.0);
        CHECK(a >= 0.0);
        CHECK(a <= 0.3);
        CHECK(p >= 0.5);
        CHECK(p <= 2.0);
    }
}

TEST_CASE("splits of a ten-sample set") {
    const auto d = generate(config(10));
    CHECK(d.get_split("train").size() == 8);
    CHECK(d.get_split("test").size() == 2);
    CHECK(d.get_split("train_2") == IndexList{0, 1});
    CHECK(d.get_split("train_4") == IndexList{0, 1, 2, 3});
    CHECK(d.get_split("train_8") == d.get_split("train"));
    CHECK(d.problem().hidden_subset(Subset::Public) == IndexList{8});
    CHECK(d.problem().hidden_subset(Subset::Private) == IndexList{9});
    CHECK(validate_dataset(d).issues.empty());
}

TEST_CASE("generated datasets validate clean") {
    for (const std::int64_t n : {2, 3, 5, 17, 40}) CHECK(validate_dataset(generate(config(n, 100 + n))).issues.empty());
    SynthConfig fixed = config(6);
    fixed.resolution_min = fixed.resolution_max = 5;
    const auto d = generate(fixed);
    CHECK(d.problem().constant_topology == true);
    CHECK(validate_dataset(d).issues.empty());
}

TEST_CASE("same seed gives identical datasets; samples regenerate alone") {
    const auto a = generate(config(12, 77));
    set_thread_count(1);
    const auto b = generate(config(12, 77));
    set_thread_count(4);
    CHECK(structurally_equal(a, b));
    CHECK(a.sample_at(9) == plate_sample(plate_parameters(config(3, 77), 9)));
    CHECK_FALSE(a.sample_at(1) == generate(config(12, 78)).sample_at(1));
}

TEST_CASE("invalid configurations") {
    PLAID_CHECK_CODE(generate(config(1)), ErrorCode::ConfigInvalid);
    auto c = config(5);
    c.resolution_min = 9;
    c.resolution_max = 8;
    PLAID_CHECK_CODE(generate(c), ErrorCode::ConfigInvalid);
    c = config(5);
    c.load_min = 0.0;
    PLAID_CHECK_CODE(generate(c), ErrorCode::ConfigInvalid);
    c = config(5);
    c.n_train = 5;
    PLAID_CHECK_CODE(generate(c), ErrorCode::ConfigInvalid);
    c = config(5);
    c.amplitude_max = -0.1;
    PLAID_CHECK_CODE(generate(c), ErrorCode::ConfigInvalid);
}
