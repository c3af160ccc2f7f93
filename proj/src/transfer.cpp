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

#include "plaid/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plaid/parallel.hpp"

namespace plaid {

namespace {

using Point = Eigen::Vector2d;

constexpr double kInsideTolerance = 1e-12;

struct Triangle {
    Point a, b, c;
};

std::array<double, 3> barycentric(const Triangle& t, const Point& p) {
    const Point ab = t.b - t.a, ac = t.c - t.a, ap = p - t.a;
    const double det = ab.x() * ac.y() - ab.y() * ac.x();
    const double wb = (ap.x() * ac.y() - ap.y() * ac.x()) / det;
    const double wc = (ab.x() * ap.y() - ab.y() * ap.x()) / det;
    return {1.0 - wb - wc, wb, wc};
}

/// Closest point on segment [p, q] to x, as the parameter along the segment.
double segment_parameter(const Point& p, const Point& q, const Point& x) {
    const Point d = q - p;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return 0.0;
    return std::clamp((x - p).dot(d) / len2, 0.0, 1.0);
}

/// Barycentric weights of the point of triangle t closest to x, and the distance.
std::pair<std::array<double, 3>, double> closest_point(const Triangle& t, const Point& x) {
    const auto inside = barycentric(t, x);
    if (inside[0] >= 0.0 && inside[1] >= 0.0 && inside[2] >= 0.0) return {inside, 0.0};
    std::array<double, 3> best{};
    double best_distance = std::numeric_limits<double>::infinity();
    const Point* corners[3] = {&t.a, &t.b, &t.c};
    for (int k = 0; k < 3; ++k) {
        const Point& p = *corners[k];
        const Point& q = *corners[(k + 1) % 3];
        const double s = segment_parameter(p, q, x);
        const double distance = (p + s * (q - p) - x).norm();
        if (distance < best_distance) {
            best_distance = distance;
            best = {0.0, 0.0, 0.0};
            best[static_cast<std::size_t>(k)] = 1.0 - s;
            best[static_cast<std::size_t>((k + 1) % 3)] = s;
        }
    }
    return {best, best_distance};
}

std::array<double, 3> clamp_weights(std::array<double, 3> w) {
    double sum = 0.0;
    for (auto& v : w) {
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    for (auto& v : w) v /= sum;
    return w;
}

class TriangleGrid {
public:
    TriangleGrid(const RealMatrix& positions, const IndexMatrix& triangles) {
        lo_ = positions.colwise().minCoeff().transpose();
        hi_ = positions.colwise().maxCoeff().transpose();
        const auto m = std::max<Eigen::Index>(triangles.rows(), 1);
        cells_ = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(std::sqrt(static_cast<double>(m)))));
        const Point extent = (hi_ - lo_).cwiseMax(Point::Constant(1e-300));
        cell_size_ = extent / static_cast<double>(cells_);
        buckets_.resize(static_cast<std::size_t>(cells_ * cells_));
        for (Eigen::Index t = 0; t < triangles.rows(); ++t) {
            Point tlo = positions.row(triangles(t, 0)).transpose();
            Point thi = tlo;
            for (int k = 1; k < 3; ++k) {
                const Point v = positions.row(triangles(t, k)).transpose();
                tlo = tlo.cwiseMin(v);
                thi = thi.cwiseMax(v);
            }
            const auto [i0, j0] = cell_of(tlo);
            const auto [i1, j1] = cell_of(thi);
            for (auto j = j0; j <= j1; ++j) {
                for (auto i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j * cells_ + i)].push_back(t);
            }
        }
    }

    std::pair<Eigen::Index, Eigen::Index> cell_of(const Point& p) const {
        auto index = [&](int axis) {
            const double f = std::floor((p[axis] - lo_[axis]) / cell_size_[axis]);
            return static_cast<Eigen::Index>(std::clamp(f, 0.0, static_cast<double>(cells_ - 1)));
        };
        return {index(0), index(1)};
    }

    const std::vector<Eigen::Index>& bucket(Eigen::Index i, Eigen::Index j) const {
        return buckets_[static_cast<std::size_t>(j * cells_ + i)];
    }

    double diagonal() const { return (hi_ - lo_).norm(); }
    const Point& lo() const { return lo_; }
    const Point& hi() const { return hi_; }

private:
    Point lo_, hi_, cell_size_;
    Eigen::Index cells_ = 1;
    std::vector<std::vector<Eigen::Index>> buckets_;
};

}  // namespace

TransferOperator build_transfer(const RealMatrix& source_positions, const IndexMatrix& triangles,
                                const RealMatrix& targets, double snap_tolerance) {
    if (source_positions.cols() != 2 || targets.cols() != 2) {
        throw Error(ErrorCode::ShapeMismatch, "transfer works on planar (x, y) positions");
    }
    if (triangles.rows() == 0 || triangles.cols() != 3) throw Error(ErrorCode::InvalidMesh, "source has no triangles");
    if (!source_positions.allFinite() || !targets.allFinite()) {
        throw Error(ErrorCode::InvalidValue, "non-finite positions");
    }
    if (triangles.minCoeff() < 0 || triangles.maxCoeff() >= source_positions.rows()) {
        throw Error(ErrorCode::InvalidMesh, "triangle index out of range");
    }

    const TriangleGrid grid(source_positions, triangles);
    const double radius = snap_tolerance * grid.diagonal();
    auto triangle = [&](Eigen::Index t) {
        return Triangle{source_positions.row(triangles(t, 0)).transpose(),
                        source_positions.row(triangles(t, 1)).transpose(),
                        source_positions.row(triangles(t, 2)).transpose()};
    };

    TransferOperator op;
    op.source_vertex_count = source_positions.rows();
    op.entries.resize(static_cast<std::size_t>(targets.rows()));

    parallel_for(static_cast<std::size_t>(targets.rows()), [&](std::size_t k) {
        const Point x = targets.row(static_cast<Eigen::Index>(k)).transpose();
        auto& entry = op.entries[k];

        Eigen::Index best = -1;
        double best_min = -std::numeric_limits<double>::infinity();
        std::array<double, 3> best_w{};
        const bool in_box = (x.array() >= grid.lo().array()).all() && (x.array() <= grid.hi().array()).all();
        if (in_box) {
            const auto [i, j] = grid.cell_of(x);
            for (auto t : grid.bucket(i, j)) {
                const auto w = barycentric(triangle(t), x);
                const double lowest = std::min({w[0], w[1], w[2]});
                if (lowest > best_min || (lowest == best_min && t < best)) {
                    best = t;
                    best_min = lowest;
                    best_w = w;
                }
            }
        }

        if (best >= 0 && best_min >= -kInsideTolerance) {
            entry.weights = clamp_weights(best_w);
        } else {
            const auto [i0, j0] = grid.cell_of(x - Point::Constant(radius));
            const auto [i1, j1] = grid.cell_of(x + Point::Constant(radius));
            best = -1;
            double best_distance = std::numeric_limits<double>::infinity();
            for (auto j = j0; j <= j1; ++j) {
                for (auto i = i0; i <= i1; ++i) {
                    for (auto t : grid.bucket(i, j)) {
                        const auto [w, distance] = closest_point(triangle(t), x);
                        if (distance < best_distance || (distance == best_distance && t < best)) {
                            best = t;
                            best_distance = distance;
                            best_w = w;
                        }
                    }
                }
            }
            if (best < 0 || best_distance > radius) {
                throw Error(ErrorCode::PointOutsideDomain,
                            "target " + std::to_string(k) + " lies outside the source mesh beyond tolerance");
            }
            entry.weights = clamp_weights(best_w);
            entry.snapped = true;
        }
        entry.element = best;
        for (int v = 0; v < 3; ++v) entry.nodes[static_cast<std::size_t>(v)] = triangles(best, v);
    });
    return op;
}

RealVector apply_transfer(const TransferOperator& op, const RealVector& field) {
    if (field.size() != op.source_vertex_count) {
        throw Error(ErrorCode::ShapeMismatch, "field length " + std::to_string(field.size()) + " differs from " +
                                                  std::to_string(op.source_vertex_count) + " source vertices");
    }
    RealVector out(static_cast<Eigen::Index>(op.entries.size()));
    for (std::size_t k = 0; k < op.entries.size(); ++k) {
        const auto& e = op.entries[k];
        out[static_cast<Eigen::Index>(k)] =
            e.weights[0] * field[e.nodes[0]] + e.weights[1] * field[e.nodes[1]] + e.weights[2] * field[e.nodes[2]];
    }
    return out;
}

}  // namespace plaid
