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
#include <cstring>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "plaid/error.hpp"

namespace plaid {

using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IndexMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = Eigen::VectorXd;
using IndexList = std::vector<std::int64_t>;

enum class ElementType { Node, Bar2, Tri3, Quad4, Tetra4, Hexa8 };
enum class ZoneType { Structured, Unstructured };
enum class Location { Vertex, CellCenter, FaceCenter };
enum class TagKind { Nodal, Element };

int nodes_per_element(ElementType type);
/// Topological dimension of the reference element (NODE = 0 ... HEXA_8 = 3).
int element_dimension(ElementType type);

std::string_view to_string(ElementType type);
std::string_view to_string(ZoneType type);
std::string_view to_string(Location location);
std::string_view to_string(TagKind kind);
std::optional<ElementType> parse_element_type(std::string_view text);
std::optional<ZoneType> parse_zone_type(std::string_view text);
std::optional<Location> parse_location(std::string_view text);
std::optional<TagKind> parse_tag_kind(std::string_view text);

struct ElementBlock {
    ElementType type = ElementType::Tri3;
    IndexMatrix connectivity;  // n_elements x nodes_per_element, 0-based
    std::int64_t range_begin = 0;
    std::int64_t range_end = 0;  // half-open global element id range

    std::int64_t size() const { return connectivity.rows(); }
};

struct FieldArray {
    std::string name;
    Location location = Location::Vertex;
    RealVector values;
};

struct TagSet {
    std::string name;
    TagKind kind = TagKind::Nodal;
    IndexList ids;  // sorted, unique
};

struct Zone {
    std::string name;
    ZoneType type = ZoneType::Unstructured;
    std::int64_t n_vertices = 0;
    RealMatrix coordinates;  // n_vertices x phys_dim; empty when linked
    std::vector<ElementBlock> element_blocks;
    std::vector<FieldArray> fields;
    std::vector<TagSet> tags;
    std::vector<std::int64_t> structured_dims;  // Structured only, 1 to 3 axes

    /// Number of cells: sum of block sizes, or the implicit grid cell count.
    std::int64_t element_count() const;
    const FieldArray* find_field(std::string_view field, Location location) const;
};

struct Base {
    std::string name;
    int cell_dim = 2;
    int phys_dim = 2;
    std::vector<Zone> zones;

    const Zone* find_zone(std::string_view zone) const;
};

/// Borrow of whole zone components from an earlier time step of the same
/// sample. Paths have the form "<base>/<zone>/<component>" where component is
/// one of GridCoordinates, Elements, Tags.
struct LinkSpec {
    double target_time = 0.0;
    std::vector<std::string> target_paths;
};

enum class LinkComponent { GridCoordinates, Elements, Tags };

struct LinkPath {
    std::string base;
    std::string zone;
    LinkComponent component = LinkComponent::GridCoordinates;
};

std::optional<LinkPath> parse_link_path(std::string_view path);
std::string format_link_path(const LinkPath& path);

struct ValidationIssue {
    std::string path;
    ErrorCode code = ErrorCode::InvalidValue;
    std::string message;
    /// Informational entry for content that cannot be checked (FaceCenter
    /// lengths, components borrowed through links). Not a violation.
    bool unchecked = false;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    std::size_t violation_count() const;
    bool conformant() const { return violation_count() == 0; }
    void add(std::string path, ErrorCode code, std::string message, bool unchecked = false);
    void merge(const ValidationReport& other, std::string_view prefix);
};

/// One physical configuration at one instant. Immutable once constructed;
/// share it through std::shared_ptr<const MeshTree>.
class MeshTree {
public:
    MeshTree() = default;

    /// Assembles a tree without checking invariants. Used by readers and
    /// tests that need to inspect non-conformant content with validate_tree.
    static MeshTree unchecked(std::vector<Base> bases, double time, std::vector<LinkSpec> links = {});

    const std::vector<Base>& bases() const { return bases_; }
    double time() const { return time_; }
    const std::vector<LinkSpec>& links() const { return links_; }
    bool has_links() const { return !links_.empty(); }

    const Base* find_base(std::string_view name) const;

    friend bool operator==(const MeshTree& a, const MeshTree& b);

private:
    std::vector<Base> bases_;
    double time_ = 0.0;
    std::vector<LinkSpec> links_;
};

/// Validating constructor. Throws the error code of the first violation.
MeshTree build_tree(std::vector<Base> bases, double time, std::vector<LinkSpec> links = {});

ValidationReport validate_tree(const MeshTree& tree);

/// Returns the tree stored at `time`, or nullptr.
using TreeProvider = std::function<const MeshTree*(double time)>;

/// Materializes every linked component by copying it from the provider's
/// tree (resolving that tree's own links first). The result carries no links.
MeshTree resolve_links(const MeshTree& tree, const TreeProvider& provider);

/// QUAD_4 (2 axes) or HEXA_8 (3 axes) cells of a structured zone, i-fastest.
/// A single axis yields BAR_2 cells.
std::vector<ElementBlock> implicit_connectivity(const Zone& zone);

bool operator==(const ElementBlock& a, const ElementBlock& b);
bool operator==(const FieldArray& a, const FieldArray& b);
bool operator==(const TagSet& a, const TagSet& b);
bool operator==(const Zone& a, const Zone& b);
bool operator==(const Base& a, const Base& b);
bool operator==(const LinkSpec& a, const LinkSpec& b);

/// Shape and byte-for-byte content equality (distinguishes -0.0 from 0.0).
template <typename A, typename B>
bool bitwise_equal(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b) {
    static_assert(std::is_same_v<typename A::Scalar, typename B::Scalar>);
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const auto x = a.derived()(i, j);
            const auto y = b.derived()(i, j);
            if (std::memcmp(&x, &y, sizeof(x)) != 0) return false;
        }
    }
    return true;
}

}  // namespace plaid
