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

#include "plaid/morph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace plaid {

double signed_area(const RealMatrix& p, const IndexMatrix& tri, Eigen::Index t) {
    const auto a = tri(t, 0), b = tri(t, 1), c = tri(t, 2);
    return 0.5 * ((p(b, 0) - p(a, 0)) * (p(c, 1) - p(a, 1)) - (p(b, 1) - p(a, 1)) * (p(c, 0) - p(a, 0)));
}

SurfaceMesh2D make_surface_mesh(RealMatrix nodes, IndexMatrix triangles) {
    if (nodes.cols() != 2) throw Error(ErrorCode::InvalidMesh, "nodes must have 2 columns");
    if (triangles.cols() != 3 && triangles.rows() > 0) throw Error(ErrorCode::InvalidMesh, "triangles must have 3 columns");
    if (!nodes.allFinite()) throw Error(ErrorCode::InvalidMesh, "non-finite node position");
    if (triangles.size() > 0 && (triangles.minCoeff() < 0 || triangles.maxCoeff() >= nodes.rows())) {
        throw Error(ErrorCode::InvalidMesh, "triangle index out of range");
    }
    for (Eigen::Index t = 0; t < triangles.rows(); ++t) {
        if (!(signed_area(nodes, triangles, t) > 0.0)) {
            throw Error(ErrorCode::InvalidMesh, "triangle " + std::to_string(t) + " is not positively oriented");
        }
    }
    return {std::move(nodes), std::move(triangles)};
}

SurfaceMesh2D surface_mesh_from_zone(const Zone& zone) {
    if (zone.coordinates.cols() < 2) throw Error(ErrorCode::InvalidMesh, "zone " + zone.name + " is not planar");
    RealMatrix nodes = zone.coordinates.leftCols(2);
    const auto blocks = zone.type == ZoneType::Structured ? implicit_connectivity(zone) : zone.element_blocks;
    std::vector<std::array<std::int64_t, 3>> tris;
    for (const auto& block : blocks) {
        for (Eigen::Index e = 0; e < block.connectivity.rows(); ++e) {
            const auto row = block.connectivity.row(e);
            if (block.type == ElementType::Tri3) {
                tris.push_back({row(0), row(1), row(2)});
            } else if (block.type == ElementType::Quad4) {
                tris.push_back({row(0), row(1), row(2)});
                tris.push_back({row(0), row(2), row(3)});
            } else if (element_dimension(block.type) == 2) {
                throw Error(ErrorCode::InvalidMesh, "unsupported surface element");
            }
        }
    }
    IndexMatrix triangles(static_cast<Eigen::Index>(tris.size()), 3);
    for (std::size_t t = 0; t < tris.size(); ++t) {
        triangles.row(static_cast<Eigen::Index>(t)) << tris[t][0], tris[t][1], tris[t][2];
    }
    if (triangles.size() > 0 && (triangles.minCoeff() < 0 || triangles.maxCoeff() >= nodes.rows())) {
        throw Error(ErrorCode::InvalidMesh, "connectivity index out of range");
    }
    for (Eigen::Index t = 0; t < triangles.rows(); ++t) {
        if (signed_area(nodes, triangles, t) < 0.0) std::swap(triangles(t, 1), triangles(t, 2));
    }
    return make_surface_mesh(std::move(nodes), std::move(triangles));
}

IndexList extract_boundary_loop(const SurfaceMesh2D& mesh) {
    const auto& tri = mesh.triangles;
    std::map<std::pair<std::int64_t, std::int64_t>, int> edge_count;
    std::set<std::int64_t> used;
    for (Eigen::Index t = 0; t < tri.rows(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const auto a = tri(t, k), b = tri(t, (k + 1) % 3);
            ++edge_count[std::minmax(a, b)];
            used.insert(a);
        }
    }
    std::map<std::int64_t, std::int64_t> next;
    std::size_t boundary_edges = 0;
    for (Eigen::Index t = 0; t < tri.rows(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const auto a = tri(t, k), b = tri(t, (k + 1) % 3);
            const int count = edge_count[std::minmax(a, b)];
            if (count > 2) throw Error(ErrorCode::NotDiskTopology, "non-manifold edge");
            if (count == 1) {
                if (!next.emplace(a, b).second) throw Error(ErrorCode::NotDiskTopology, "non-manifold boundary vertex");
                ++boundary_edges;
            }
        }
    }
    if (boundary_edges == 0) throw Error(ErrorCode::NotDiskTopology, "mesh has no boundary");

    const auto start = next.begin()->first;
    IndexList loop{start};
    for (auto v = next.at(start); v != start; v = next.at(v)) {
        loop.push_back(v);
        if (loop.size() > boundary_edges || !next.count(v)) {
            throw Error(ErrorCode::NotDiskTopology, "boundary does not close");
        }
    }
    if (loop.size() != boundary_edges) throw Error(ErrorCode::NotDiskTopology, "several boundary loops");

    const auto euler = static_cast<std::int64_t>(used.size()) - static_cast<std::int64_t>(edge_count.size()) +
                       static_cast<std::int64_t>(tri.rows());
    if (euler != 1) throw Error(ErrorCode::NotDiskTopology, "Euler characteristic " + std::to_string(euler));
    if (static_cast<std::int64_t>(used.size()) != mesh.vertex_count()) {
        throw Error(ErrorCode::NotDiskTopology, "mesh has vertices outside every triangle");
    }
    return loop;
}

MorphedMesh tutte_embed(const SurfaceMesh2D& mesh, const TutteOptions& options) {
    const auto loop = extract_boundary_loop(mesh);
    const auto n = mesh.vertex_count();
    const auto& p = mesh.nodes;

    MorphedMesh out;
    out.triangles = mesh.triangles;
    out.boundary_loop = loop;
    out.positions = RealMatrix::Zero(n, 2);

    std::vector<double> cumulative(loop.size() + 1, 0.0);
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const auto a = loop[k], b = loop[(k + 1) % loop.size()];
        cumulative[k + 1] = cumulative[k] + std::hypot(p(b, 0) - p(a, 0), p(b, 1) - p(a, 1));
    }
    const double perimeter = cumulative.back();
    if (!(perimeter > 0.0)) throw Error(ErrorCode::InvalidMesh, "degenerate boundary");

    std::vector<std::int64_t> interior_index(static_cast<std::size_t>(n), -1);
    std::vector<bool> on_boundary(static_cast<std::size_t>(n), false);
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const double angle = 2.0 * std::numbers::pi * cumulative[k] / perimeter;
        out.positions(loop[k], 0) = std::cos(angle);
        out.positions(loop[k], 1) = std::sin(angle);
        on_boundary[static_cast<std::size_t>(loop[k])] = true;
    }
    std::int64_t n_interior = 0;
    for (std::int64_t v = 0; v < n; ++v) {
        if (!on_boundary[static_cast<std::size_t>(v)]) interior_index[static_cast<std::size_t>(v)] = n_interior++;
    }
    if (n_interior == 0) return out;

    std::vector<std::set<std::int64_t>> neighbours(static_cast<std::size_t>(n));
    for (Eigen::Index t = 0; t < mesh.triangles.rows(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const auto a = mesh.triangles(t, k), b = mesh.triangles(t, (k + 1) % 3);
            neighbours[static_cast<std::size_t>(a)].insert(b);
            neighbours[static_cast<std::size_t>(b)].insert(a);
        }
    }

    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_interior, 2);
    for (std::int64_t v = 0; v < n; ++v) {
        const auto row = interior_index[static_cast<std::size_t>(v)];
        if (row < 0) continue;
        const auto& adjacent = neighbours[static_cast<std::size_t>(v)];
        triplets.emplace_back(row, row, static_cast<double>(adjacent.size()));
        for (auto w : adjacent) {
            const auto col = interior_index[static_cast<std::size_t>(w)];
            if (col >= 0) {
                triplets.emplace_back(row, col, -1.0);
            } else {
                rhs(row, 0) += out.positions(w, 0);
                rhs(row, 1) += out.positions(w, 1);
            }
        }
    }
    Eigen::SparseMatrix<double> laplacian(n_interior, n_interior);
    laplacian.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::MatrixXd solution;
    if (n_interior <= options.direct_solve_limit) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(laplacian);
        if (solver.info() != Eigen::Success) throw Error(ErrorCode::SolveFailure, "Tutte system factorization failed");
        solution = solver.solve(rhs);
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>
            solver;
        solver.setTolerance(options.cg_tolerance);
        solver.setMaxIterations(std::max<Eigen::Index>(1000, 10 * n_interior));
        solver.compute(laplacian);
        solution.resize(n_interior, 2);
        for (int c = 0; c < 2; ++c) {
            solution.col(c) = solver.solve(rhs.col(c));
            if (solver.info() != Eigen::Success) {
                throw Error(ErrorCode::SolveFailure,
                            "conjugate gradients stopped at relative residual " + std::to_string(solver.error()));
            }
        }
    }
    if (!solution.allFinite()) throw Error(ErrorCode::SolveFailure, "non-finite Tutte solution");

    for (std::int64_t v = 0; v < n; ++v) {
        const auto row = interior_index[static_cast<std::size_t>(v)];
        if (row >= 0) out.positions.row(v) << solution(row, 0), solution(row, 1);
    }
    for (Eigen::Index t = 0; t < out.triangles.rows(); ++t) {
        if (!(signed_area(out.positions, out.triangles, t) > 0.0)) {
            throw Error(ErrorCode::SolveFailure, "embedding inverted triangle " + std::to_string(t));
        }
    }
    return out;
}

SurfaceMesh2D unit_disk_mesh(int rings) {
    if (rings < 1) throw Error(ErrorCode::InvalidValue, "unit disk mesh needs at least one ring");
    const auto ring_size = [](int r) -> std::int64_t { return r == 0 ? 1 : 6 * r; };
    std::vector<std::int64_t> ring_start(static_cast<std::size_t>(rings) + 1, 0);
    std::int64_t n = 1;
    for (int r = 1; r <= rings; ++r) {
        ring_start[static_cast<std::size_t>(r)] = n;
        n += ring_size(r);
    }

    RealMatrix nodes(n, 2);
    nodes.row(0) << 0.0, 0.0;
    for (int r = 1; r <= rings; ++r) {
        const double radius = r == rings ? 1.0 : static_cast<double>(r) / rings;
        for (std::int64_t k = 0; k < ring_size(r); ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(ring_size(r));
            nodes.row(ring_start[static_cast<std::size_t>(r)] + k) << radius * std::cos(angle), radius * std::sin(angle);
        }
    }

    std::vector<std::array<std::int64_t, 3>> tris;
    for (int r = 1; r <= rings; ++r) {
        const auto n_in = ring_size(r - 1), n_out = ring_size(r);
        const auto in0 = ring_start[static_cast<std::size_t>(r - 1)], out0 = ring_start[static_cast<std::size_t>(r)];
        std::int64_t i = 0, j = 0;
        // Zip the two rings by angle; compare (j+1)/n_out against (i+1)/n_in exactly.
        while (i < n_in || j < n_out) {
            const bool advance_outer = j < n_out && (i >= n_in || (j + 1) * n_in <= (i + 1) * n_out || n_in == 1);
            if (advance_outer) {
                tris.push_back({in0 + i % n_in, out0 + j, out0 + (j + 1) % n_out});
                ++j;
            } else {
                tris.push_back({in0 + i, out0 + j % n_out, in0 + (i + 1) % n_in});
                ++i;
            }
            if (n_in == 1 && j == n_out) break;
        }
    }
    IndexMatrix triangles(static_cast<Eigen::Index>(tris.size()), 3);
    for (std::size_t t = 0; t < tris.size(); ++t) {
        triangles.row(static_cast<Eigen::Index>(t)) << tris[t][0], tris[t][1], tris[t][2];
    }
    for (Eigen::Index t = 0; t < triangles.rows(); ++t) {
        if (signed_area(nodes, triangles, t) < 0.0) std::swap(triangles(t, 1), triangles(t, 2));
    }
    return make_surface_mesh(std::move(nodes), std::move(triangles));
}

}  // namespace plaid
