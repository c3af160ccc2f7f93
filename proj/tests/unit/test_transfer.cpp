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
#include "plaid/morph.hpp"
#include "plaid/transfer.hpp"
#include "test_support.hpp"

using namespace plaid;

namespace {

SurfaceMesh2D four_triangles() {
    RealMatrix nodes(5, 2);
    nodes << 0, 0, 1, 0, 1, 1, 0, 1, 0.4, 0.55;
    IndexMatrix tris(4, 3);
    tris << 0, 1, 4, 1, 2, 4, 2, 3, 4, 3, 0, 4;
    return make_surface_mesh(nodes, tris);
}

// Brute force: scan every triangle, take the first with all barycentrics >= -1e-14.
double brute_force_value(const SurfaceMesh2D& m, const RealVector& f, double x, double y) {
    for (Eigen::Index t = 0; t < m.triangles.rows(); ++t) {
        const auto a = m.triangles(t, 0), b = m.triangles(t, 1), c = m.triangles(t, 2);
        const double x1 = m.nodes(a, 0), y1 = m.nodes(a, 1), x2 = m.nodes(b, 0), y2 = m.nodes(b, 1);
        const double x3 = m.nodes(c, 0), y3 = m.nodes(c, 1);
        const double det = (y2 - y3) * (x1 - x3) + (x3 - x2) * (y1 - y3);
        const double l1 = ((y2 - y3) * (x - x3) + (x3 - x2) * (y - y3)) / det;
        const double l2 = ((y3 - y1) * (x - x3) + (x1 - x3) * (y - y3)) / det;
        const double l3 = 1.0 - l1 - l2;
        if (l1 >= -1e-14 && l2 >= -1e-14 && l3 >= -1e-14) return l1 * f[a] + l2 * f[b] + l3 * f[c];
    }
    return std::nan("");
}

}  // namespace

TEST_CASE("vertex and centroid targets") {
    const auto m = four_triangles();
    RealMatrix targets(2, 2);
    targets << 1, 1, (0 + 1 + 0.4) / 3.0, (0 + 0 + 0.55) / 3.0;
    const auto op = build_transfer(m.nodes, m.triangles, targets);
    RealVector unit = RealVector::Zero(5);
    unit[2] = 1.0;
    CHECK(apply_transfer(op, unit)[0] == doctest::Approx(1.0).epsilon(1e-15));
    const auto& e = op.entries[1];
    CHECK(e.element == 0);
    for (const double w : e.weights) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("targets outside the tolerance are rejected") {
    const auto m = four_triangles();
    RealMatrix far(1, 2);
    far << 1.0 + 0.1 * std::sqrt(2.0), 0.5;
    PLAID_CHECK_CODE(build_transfer(m.nodes, m.triangles, far, 1e-8), ErrorCode::PointOutsideDomain);
    RealMatrix near(1, 2);
    near << 1.0 + 1e-10, 0.5;
    const auto op = build_transfer(m.nodes, m.triangles, near, 1e-8);
    CHECK(op.entries[0].snapped);
    double sum = 0.0;
    for (const double w : op.entries[0].weights) {
        CHECK(w >= 0.0);
        sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("affine fields are reproduced exactly") {
    std::mt19937_64 rng(9);
    const auto src = plaid::testing::jittered_square(rng, 9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RealMatrix targets(200, 2);
    for (Eigen::Index i = 0; i < 200; ++i) targets.row(i) << u(rng), u(rng);
    const RealVector f = (1.0 + 2.0 * src.nodes.col(0).array() - src.nodes.col(1).array()).matrix();
    const auto out = apply_transfer(build_transfer(src.nodes, src.triangles, targets), f);
    for (Eigen::Index i = 0; i < 200; ++i) CHECK(std::abs(out[i] - (1.0 + 2.0 * targets(i, 0) - targets(i, 1))) <= 1e-12);
    const auto constant = apply_transfer(build_transfer(src.nodes, src.triangles, targets), RealVector::Constant(81, 4.25));
    CHECK((constant.array() - 4.25).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("random field at probe points matches a brute-force scan") {
    const auto m = four_triangles();
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    const RealVector f = RealVector::NullaryExpr(5, [&] { return g(rng); });
    RealMatrix probes(3, 2);
    probes << 0.2, 0.1, 0.9, 0.6, 0.35, 0.8;
    const auto out = apply_transfer(build_transfer(m.nodes, m.triangles, probes), f);
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(out[i] - brute_force_value(m, f, probes(i, 0), probes(i, 1))) <= 1e-14);
}

TEST_CASE("transfer is linear and identity on source vertices") {
    std::mt19937_64 rng(10);
    const auto src = plaid::testing::jittered_square(rng, 7);
    const auto op = build_transfer(src.nodes, src.triangles, src.nodes);
    CHECK((apply_transfer(op, src.nodes.col(0)) - src.nodes.col(0)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((apply_transfer(op, src.nodes.col(1)) - src.nodes.col(1)).cwiseAbs().maxCoeff() <= 1e-12);

    const auto dst = plaid::testing::jittered_square(rng, 11);
    const auto t = build_transfer(src.nodes, src.triangles, dst.nodes);
    std::normal_distribution<double> g;
    const RealVector f = RealVector::NullaryExpr(49, [&] { return g(rng); });
    const RealVector h = RealVector::NullaryExpr(49, [&] { return g(rng); });
    const RealVector lhs = apply_transfer(t, 2.5 * f - 0.75 * h);
    const RealVector rhs = 2.5 * apply_transfer(t, f) - 0.75 * apply_transfer(t, h);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("field length must match the source") {
    const auto m = four_triangles();
    const auto op = build_transfer(m.nodes, m.triangles, m.nodes);
    PLAID_CHECK_CODE(apply_transfer(op, RealVector::Zero(4)), ErrorCode::ShapeMismatch);
}

TEST_CASE("disk to disk transfer through morphed meshes") {
    const auto disk = unit_disk_mesh(6);
    std::mt19937_64 rng(12);
    const auto other = plaid::testing::random_disk_mesh(rng, 200);
    const auto morphed = tutte_embed(other);
    // Common-mesh boundary nodes sit on the circle, outside the inscribed
    // morphed polygon by at most its sagitta; a loose tolerance absorbs that.
    const auto op = build_transfer(morphed.positions, morphed.triangles, disk.nodes, 0.05);
    const RealVector f = (0.5 - morphed.positions.col(0).array() + 3.0 * morphed.positions.col(1).array()).matrix();
    const auto out = apply_transfer(op, f);
    for (Eigen::Index i = 0; i < disk.vertex_count(); ++i) {
        if (op.entries[static_cast<std::size_t>(i)].snapped) continue;
        CHECK(std::abs(out[i] - (0.5 - disk.nodes(i, 0) + 3.0 * disk.nodes(i, 1))) <= 1e-12);
    }
}
