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

#include "plaid/mesh_tree.hpp"

namespace plaid {

/// Planar triangulation: n x 2 node positions, m x 3 positively oriented
/// triangles (0-based).
struct SurfaceMesh2D {
    RealMatrix nodes;
    IndexMatrix triangles;

    std::int64_t vertex_count() const { return nodes.rows(); }
};

/// Checks shapes, index bounds and strictly positive triangle areas.
/// Throws InvalidMesh.
SurfaceMesh2D make_surface_mesh(RealMatrix nodes, IndexMatrix triangles);

/// Triangulation of a 2D zone: TRI_3 blocks as is, QUAD_4 cells split along
/// their 0-2 diagonal, structured zones through their implicit cells.
/// Clockwise cells are reoriented.
SurfaceMesh2D surface_mesh_from_zone(const Zone& zone);

/// Boundary of a disk-topology triangulation as a counter-clockwise node
/// cycle starting at the lowest boundary node id. Throws NotDiskTopology for
/// non-manifold edges or vertices, several loops, or a non-disk Euler
/// characteristic.
IndexList extract_boundary_loop(const SurfaceMesh2D& mesh);

struct MorphedMesh {
    RealMatrix positions;  // n x 2, inside the closed unit disk
    IndexMatrix triangles;
    IndexList boundary_loop;
};

struct TutteOptions {
    /// Interior systems up to this size are factorized directly; larger ones
    /// go through Jacobi-preconditioned conjugate gradients.
    std::int64_t direct_solve_limit = 20000;
    double cg_tolerance = 1e-10;
};

/// Tutte barycentric embedding onto the unit disk. The boundary loop is laid
/// on the unit circle with angles proportional to cumulative edge length
/// (first loop node at angle 0); every interior node sits at the average of
/// its neighbours.
MorphedMesh tutte_embed(const SurfaceMesh2D& mesh, const TutteOptions& options = {});

/// Concentric-ring triangulation of the unit disk: a centre node and `rings`
/// rings, ring r holding 6r nodes evenly spaced on radius r / rings.
SurfaceMesh2D unit_disk_mesh(int rings);

/// Signed area of triangle t of (positions, triangles).
double signed_area(const RealMatrix& positions, const IndexMatrix& triangles, Eigen::Index t);

}  // namespace plaid
