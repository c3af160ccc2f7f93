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
#include <random>

#include "check_code.hpp"
#include "plaid/metrics.hpp"
#include "plaid/synthgen.hpp"
#include "test_support.hpp"

using namespace plaid;
using plaid::testing::oracle_rrmse_field;
using plaid::testing::oracle_rrmse_scalar;

namespace {

RealVector vec(std::initializer_list<double> v) {
    RealVector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

Dataset plate(std::int64_t n) {
    SynthConfig c;
    c.n_samples = n;
    c.seed = 21;
    c.resolution_min = 4;
    c.resolution_max = 5;
    return generate(c);
}

PredictionBundle perfect(const Dataset& d, const IndexList& ids) {
    PredictionBundle b;
    for (const auto id : ids) {
        const auto& s = d.sample_at(id);
        for (const auto& f : d.problem().out_fields_names) b[id].fields[f] = reference_field(s, f);
        for (const auto& n : d.problem().out_scalars_names) b[id].scalars[n] = s.get_scalar(n);
    }
    return b;
}

}  // namespace

TEST_CASE("field RRMSE closed cases") {
    const std::vector<RealVector> same{vec({1, -2, 3}), vec({0.5})};
    CHECK(rrmse_field(same, same) == 0.0);
    const std::vector<RealVector> r1{vec({2})}, p1{vec({1})};
    CHECK(rrmse_field(r1, p1) == doctest::Approx(0.5).epsilon(1e-15));
    const std::vector<RealVector> r2{vec({1, 1}), vec({2})}, p2{vec({1, 0}), vec({0})};
    CHECK(std::abs(rrmse_field(r2, p2) - oracle_rrmse_field({{1, 1}, {2}}, {{1, 0}, {0}})) < 1e-15);
}

TEST_CASE("field RRMSE errors") {
    const std::vector<RealVector> r{vec({1, 2})}, p{vec({1})};
    PLAID_CHECK_CODE(rrmse_field(r, p), ErrorCode::ShapeMismatch);
    const std::vector<RealVector> zero{vec({0, 1e-31})};
    PLAID_CHECK_CODE(rrmse_field(zero, zero), ErrorCode::DegenerateReference);
    const std::vector<RealVector> two{vec({1}), vec({1})};
    PLAID_CHECK_CODE(rrmse_field(two, r), ErrorCode::ShapeMismatch);
}

TEST_CASE("scalar RRMSE closed cases") {
    const std::vector<double> r{2}, p{3};
    CHECK(rrmse_scalar(r, p) == doctest::Approx(0.5).epsilon(1e-15));
    const std::vector<double> r2{1, 4}, p2{2, 2};
    CHECK(std::abs(rrmse_scalar(r2, p2) - std::sqrt((1.0 + 0.25) / 2.0)) < 1e-15);
    CHECK(rrmse_scalar(r2, r2) == 0.0);
    const std::vector<double> z{0.0};
    PLAID_CHECK_CODE(rrmse_scalar(z, z), ErrorCode::DegenerateReference);
}

TEST_CASE("RRMSE matches the direct formula on random cases") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> n_samples(1, 10), length(1, 50);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = n_samples(rng);
        std::vector<std::vector<double>> rv, pv;
        std::vector<RealVector> re, pe;
        std::vector<double> rs, ps;
        for (int i = 0; i < n; ++i) {
            const int len = length(rng);
            std::vector<double> a(len), b(len);
            for (int j = 0; j < len; ++j) {
                a[j] = g(rng);
                b[j] = a[j] + 0.1 * g(rng);
            }
            rv.push_back(a);
            pv.push_back(b);
            re.push_back(Eigen::Map<RealVector>(a.data(), len));
            pe.push_back(Eigen::Map<RealVector>(b.data(), len));
            rs.push_back(g(rng) + 3.0);
            ps.push_back(rs.back() + g(rng));
        }
        const double f = oracle_rrmse_field(rv, pv), s = oracle_rrmse_scalar(rs, ps);
        CHECK(std::abs(rrmse_field(re, pe) - f) <= 1e-12 * f);
        CHECK(std::abs(rrmse_scalar(rs, ps) - s) <= 1e-12 * s);
    }
}

TEST_CASE("field RRMSE is invariant under joint scaling") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<RealVector> r, p, rc, pc;
    for (int i = 0; i < 5; ++i) {
        RealVector a = RealVector::NullaryExpr(7, [&] { return g(rng); });
        RealVector b = a + 0.3 * RealVector::NullaryExpr(7, [&] { return g(rng); });
        r.push_back(a);
        p.push_back(b);
        rc.push_back(-3.5 * a);
        pc.push_back(-3.5 * b);
    }
    CHECK(rrmse_field(rc, pc) == doctest::Approx(rrmse_field(r, p)).epsilon(1e-13));
    CHECK(rrmse_field(r, p) > 0.0);
}

TEST_CASE("pairwise sum is exact on integers and order-fixed") {
    std::vector<double> v(1000);
    for (int i = 0; i < 1000; ++i) v[i] = i;
    CHECK(pairwise_sum(v) == 499500.0);
    CHECK(pairwise_sum({}) == 0.0);
}

TEST_CASE("total_error averages per-output RRMSEs") {
    const auto d = plate(10);
    const auto& test = d.get_split("test");
    auto b = perfect(d, test);
    auto report = total_error(d.problem(), d, b);
    CHECK(report.total_error == 0.0);
    REQUIRE(report.outputs.size() == 3);
    CHECK(report.outputs[0].name == "du_dx");
    CHECK(report.outputs[2].kind == OutputKind::Scalar);
    CHECK(report.n_samples == 2);

    for (const auto id : test) b[id].scalars["u_max"] *= 1.2;
    report = total_error(d.problem(), d, b);
    CHECK(report.outputs[2].rrmse == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(report.total_error == doctest::Approx(0.2 / 3.0).epsilon(1e-12));

    b[test[1]].scalars.erase("u_max");
    PLAID_CHECK_CODE(total_error(d.problem(), d, b), ErrorCode::MissingOutput);
}

TEST_CASE("hidden scoring restricts to each subset") {
    const auto d = plate(14);
    const auto& test = d.get_split("test");
    auto b = perfect(d, test);
    auto [pub, priv] = score_hidden(d.problem(), d, b);
    CHECK(pub.total_error == 0.0);
    CHECK(priv.total_error == 0.0);
    for (const auto id : d.problem().hidden_subset(Subset::Private)) b[id].fields["u"] *= 1.1;
    std::tie(pub, priv) = score_hidden(d.problem(), d, b);
    CHECK(pub.total_error == 0.0);
    CHECK(priv.total_error > 0.0);
    CHECK(pub.n_samples + priv.n_samples == test.size());

    auto no_partition = d.problem();
    no_partition.hidden_partition.reset();
    PLAID_CHECK_CODE(score_hidden(no_partition, d, b), ErrorCode::NoPartition);
}

TEST_CASE("bundles round trip bitwise") {
    plaid::testing::TempDir dir;
    const auto d = plate(10);
    auto b = perfect(d, d.get_split("test"));
    b[8].scalars["u_max"] = 0.1 + 0.2;
    save_bundle(b, dir / "bundle");
    const auto back = load_bundle(dir / "bundle");
    CHECK(back == b);
}
