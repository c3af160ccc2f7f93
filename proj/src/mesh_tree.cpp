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

#include "plaid/mesh_tree.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace plaid {

namespace {

struct NamePair {
    std::string_view text;
    int value;
};

constexpr NamePair kElementNames[] = {
    {"NODE", 0}, {"BAR_2", 1}, {"TRI_3", 2}, {"QUAD_4", 3}, {"TETRA_4", 4}, {"HEXA_8", 5},
};

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

int nodes_per_element(ElementType type) {
    switch (type) {
        case ElementType::Node: return 1;
        case ElementType::Bar2: return 2;
        case ElementType::Tri3: return 3;
        case ElementType::Quad4: return 4;
        case ElementType::Tetra4: return 4;
        case ElementType::Hexa8: return 8;
    }
    return 0;
}

int element_dimension(ElementType type) {
    switch (type) {
        case ElementType::Node: return 0;
        case ElementType::Bar2: return 1;
        case ElementType::Tri3:
        case ElementType::Quad4: return 2;
        case ElementType::Tetra4:
        case ElementType::Hexa8: return 3;
    }
    return 0;
}

std::string_view to_string(ElementType type) { return kElementNames[static_cast<int>(type)].text; }

std::string_view to_string(ZoneType type) {
    return type == ZoneType::Structured ? "Structured" : "Unstructured";
}

std::string_view to_string(Location location) {
    switch (location) {
        case Location::Vertex: return "Vertex";
        case Location::CellCenter: return "CellCenter";
        case Location::FaceCenter: return "FaceCenter";
    }
    return "Vertex";
}

std::string_view to_string(TagKind kind) { return kind == TagKind::Nodal ? "NodalTag" : "ElementTag"; }

std::optional<ElementType> parse_element_type(std::string_view text) {
    for (const auto& [name, value] : kElementNames) {
        if (name == text) return static_cast<ElementType>(value);
    }
    return std::nullopt;
}

std::optional<ZoneType> parse_zone_type(std::string_view text) {
    if (text == "Structured") return ZoneType::Structured;
    if (text == "Unstructured") return ZoneType::Unstructured;
    return std::nullopt;
}

std::optional<Location> parse_location(std::string_view text) {
    if (text == "Vertex") return Location::Vertex;
    if (text == "CellCenter") return Location::CellCenter;
    if (text == "FaceCenter") return Location::FaceCenter;
    return std::nullopt;
}

std::optional<TagKind> parse_tag_kind(std::string_view text) {
    if (text == "NodalTag") return TagKind::Nodal;
    if (text == "ElementTag") return TagKind::Element;
    return std::nullopt;
}

std::optional<LinkPath> parse_link_path(std::string_view path) {
    const auto first = path.find('/');
    if (first == std::string_view::npos) return std::nullopt;
    const auto second = path.find('/', first + 1);
    if (second == std::string_view::npos) return std::nullopt;
    LinkPath out;
    out.base = std::string(path.substr(0, first));
    out.zone = std::string(path.substr(first + 1, second - first - 1));
    const auto component = path.substr(second + 1);
    if (out.base.empty() || out.zone.empty()) return std::nullopt;
    if (component == "GridCoordinates") {
        out.component = LinkComponent::GridCoordinates;
    } else if (component == "Elements") {
        out.component = LinkComponent::Elements;
    } else if (component == "Tags") {
        out.component = LinkComponent::Tags;
    } else {
        return std::nullopt;
    }
    return out;
}

std::string format_link_path(const LinkPath& path) {
    std::string_view component = "GridCoordinates";
    if (path.component == LinkComponent::Elements) component = "Elements";
    if (path.component == LinkComponent::Tags) component = "Tags";
    return path.base + "/" + path.zone + "/" + std::string(component);
}

std::int64_t Zone::element_count() const {
    if (type == ZoneType::Structured) {
        if (structured_dims.empty()) return 0;
        std::int64_t count = 1;
        for (auto d : structured_dims) count *= std::max<std::int64_t>(d - 1, 0);
        return count;
    }
    std::int64_t count = 0;
    for (const auto& block : element_blocks) count += block.size();
    return count;
}

const FieldArray* Zone::find_field(std::string_view field, Location where) const {
    for (const auto& f : fields) {
        if (f.name == field && f.location == where) return &f;
    }
    return nullptr;
}

const Zone* Base::find_zone(std::string_view zone) const {
    for (const auto& z : zones) {
        if (z.name == zone) return &z;
    }
    return nullptr;
}

std::size_t ValidationReport::violation_count() const {
    return static_cast<std::size_t>(
        std::count_if(issues.begin(), issues.end(), [](const auto& i) { return !i.unchecked; }));
}

void ValidationReport::add(std::string path, ErrorCode code, std::string message, bool unchecked) {
    issues.push_back({std::move(path), code, std::move(message), unchecked});
}

void ValidationReport::merge(const ValidationReport& other, std::string_view prefix) {
    for (const auto& issue : other.issues) {
        auto copy = issue;
        copy.path = std::string(prefix) + copy.path;
        issues.push_back(std::move(copy));
    }
}

MeshTree MeshTree::unchecked(std::vector<Base> bases, double time, std::vector<LinkSpec> links) {
    MeshTree tree;
    tree.bases_ = std::move(bases);
    tree.time_ = time;
    tree.links_ = std::move(links);
    return tree;
}

const Base* MeshTree::find_base(std::string_view name) const {
    for (const auto& b : bases_) {
        if (b.name == name) return &b;
    }
    return nullptr;
}

MeshTree build_tree(std::vector<Base> bases, double time, std::vector<LinkSpec> links) {
    auto tree = MeshTree::unchecked(std::move(bases), time, std::move(links));
    const auto report = validate_tree(tree);
    for (const auto& issue : report.issues) {
        if (!issue.unchecked) throw Error(issue.code, issue.path + ": " + issue.message);
    }
    return tree;
}

namespace {

struct LinkedComponents {
    std::set<std::pair<std::string, std::string>> coordinates;
    std::set<std::pair<std::string, std::string>> elements;
    std::set<std::pair<std::string, std::string>> tags;

    bool has(const std::string& base, const std::string& zone, LinkComponent c) const {
        const auto key = std::make_pair(base, zone);
        switch (c) {
            case LinkComponent::GridCoordinates: return coordinates.count(key) > 0;
            case LinkComponent::Elements: return elements.count(key) > 0;
            case LinkComponent::Tags: return tags.count(key) > 0;
        }
        return false;
    }
};

LinkedComponents check_links(const MeshTree& tree, ValidationReport& report) {
    LinkedComponents linked;
    for (std::size_t l = 0; l < tree.links().size(); ++l) {
        const auto& link = tree.links()[l];
        const std::string where = "links[" + std::to_string(l) + "]";
        if (!(link.target_time >= 0.0) || !(link.target_time < tree.time())) {
            report.add(where, ErrorCode::InvalidLink,
                       "target time must be non-negative and earlier than the tree time");
        }
        for (const auto& text : link.target_paths) {
            const auto path = parse_link_path(text);
            if (!path) {
                report.add(where + "/" + text, ErrorCode::InvalidLink, "malformed link path");
                continue;
            }
            const Base* base = tree.find_base(path->base);
            const Zone* zone = base ? base->find_zone(path->zone) : nullptr;
            if (!zone) {
                report.add(text, ErrorCode::InvalidLink, "linked zone does not exist in this tree");
                continue;
            }
            if (linked.has(path->base, path->zone, path->component)) {
                report.add(text, ErrorCode::InvalidLink, "component linked twice");
                continue;
            }
            bool present = false;
            switch (path->component) {
                case LinkComponent::GridCoordinates:
                    present = zone->coordinates.size() > 0;
                    linked.coordinates.emplace(path->base, path->zone);
                    break;
                case LinkComponent::Elements:
                    present = !zone->element_blocks.empty();
                    linked.elements.emplace(path->base, path->zone);
                    break;
                case LinkComponent::Tags:
                    present = !zone->tags.empty();
                    linked.tags.emplace(path->base, path->zone);
                    break;
            }
            if (present) {
                report.add(text, ErrorCode::InvalidLink, "link would shadow materialized content");
            }
        }
    }
    return linked;
}

void check_elements(const Zone& zone, const std::string& path, ValidationReport& report) {
    std::int64_t expected_begin = 0;
    for (std::size_t b = 0; b < zone.element_blocks.size(); ++b) {
        const auto& block = zone.element_blocks[b];
        const std::string where = path + "/Elements[" + std::to_string(b) + "]";
        if (block.connectivity.cols() != nodes_per_element(block.type) && block.connectivity.rows() > 0) {
            report.add(where, ErrorCode::DimensionMismatch,
                       std::string(to_string(block.type)) + " expects " +
                           std::to_string(nodes_per_element(block.type)) + " nodes per element, got " +
                           std::to_string(block.connectivity.cols()));
        }
        if (block.range_end - block.range_begin != block.size()) {
            report.add(where, ErrorCode::DimensionMismatch, "global range length differs from element count");
        }
        if (block.range_begin != expected_begin) {
            report.add(where, ErrorCode::DimensionMismatch,
                       "global ranges must be contiguous from 0 (expected begin " +
                           std::to_string(expected_begin) + ")");
        }
        expected_begin = block.range_end;
        if (block.connectivity.size() > 0) {
            const auto lo = block.connectivity.minCoeff();
            const auto hi = block.connectivity.maxCoeff();
            if (lo < 0 || hi >= zone.n_vertices) {
                report.add(where, ErrorCode::IndexOutOfRange,
                           "connectivity index " + std::to_string(lo < 0 ? lo : hi) + " outside [0, " +
                               std::to_string(zone.n_vertices) + ")");
            }
        }
    }
}

void check_zone(const Base& base, const Zone& zone, const LinkedComponents& linked,
                ValidationReport& report) {
    const std::string path = base.name + "/" + zone.name;
    const bool coords_linked = linked.has(base.name, zone.name, LinkComponent::GridCoordinates);
    const bool elements_linked = linked.has(base.name, zone.name, LinkComponent::Elements);

    if (zone.n_vertices < 0) {
        report.add(path, ErrorCode::InvalidValue, "negative vertex count");
    }
    if (!coords_linked) {
        if (zone.coordinates.rows() != zone.n_vertices) {
            report.add(path + "/GridCoordinates", ErrorCode::DimensionMismatch,
                       "coordinate rows " + std::to_string(zone.coordinates.rows()) +
                           " differ from n_vertices " + std::to_string(zone.n_vertices));
        } else if (zone.n_vertices > 0 && zone.coordinates.cols() != base.phys_dim) {
            report.add(path + "/GridCoordinates", ErrorCode::DimensionMismatch,
                       "coordinate columns differ from the base physical dimension");
        }
    }

    if (zone.type == ZoneType::Structured) {
        if (zone.structured_dims.empty() || zone.structured_dims.size() > 3) {
            report.add(path, ErrorCode::DimensionMismatch, "structured zones need 1 to 3 grid axes");
        } else {
            std::int64_t product = 1;
            bool positive = true;
            for (auto d : zone.structured_dims) {
                positive = positive && d >= 1;
                product *= d;
            }
            if (!positive || product != zone.n_vertices) {
                report.add(path, ErrorCode::DimensionMismatch,
                           "product of structured dims " + std::to_string(product) +
                               " differs from n_vertices " + std::to_string(zone.n_vertices));
            }
        }
        if (!zone.element_blocks.empty()) {
            report.add(path + "/Elements", ErrorCode::DimensionMismatch,
                       "structured zones carry implicit connectivity only");
        }
        if (elements_linked) {
            report.add(path + "/Elements", ErrorCode::InvalidLink, "structured zones have no element blocks");
        }
    } else {
        if (!zone.structured_dims.empty()) {
            report.add(path, ErrorCode::DimensionMismatch, "structured dims on an unstructured zone");
        }
        check_elements(zone, path, report);
    }

    std::set<std::pair<std::string, Location>> field_keys;
    const auto n_cells = zone.element_count();
    for (const auto& field : zone.fields) {
        const std::string where =
            path + "/Fields/" + std::string(to_string(field.location)) + "/" + field.name;
        if (!field_keys.emplace(field.name, field.location).second) {
            report.add(where, ErrorCode::DuplicateName, "duplicate field name at this location");
        }
        const auto length = static_cast<std::int64_t>(field.values.size());
        switch (field.location) {
            case Location::Vertex:
                if (length != zone.n_vertices) {
                    report.add(where, ErrorCode::DimensionMismatch,
                               "Vertex field length " + std::to_string(length) + " differs from n_vertices " +
                                   std::to_string(zone.n_vertices));
                }
                break;
            case Location::CellCenter:
                if (elements_linked) {
                    report.add(where, ErrorCode::DimensionMismatch, "length unchecked: elements are linked", true);
                } else if (length != n_cells) {
                    report.add(where, ErrorCode::DimensionMismatch,
                               "CellCenter field length " + std::to_string(length) +
                                   " differs from element count " + std::to_string(n_cells));
                }
                break;
            case Location::FaceCenter:
                report.add(where, ErrorCode::DimensionMismatch, "FaceCenter length unchecked", true);
                break;
        }
    }

    std::set<std::string> tag_names;
    for (const auto& tag : zone.tags) {
        const std::string where = path + "/Tags/" + tag.name;
        if (!tag_names.insert(tag.name).second) {
            report.add(where, ErrorCode::DuplicateName, "duplicate tag name");
        }
        if (std::adjacent_find(tag.ids.begin(), tag.ids.end(), std::greater_equal<>()) != tag.ids.end()) {
            report.add(where, ErrorCode::InvalidValue, "tag ids must be sorted and unique");
        }
        if (tag.ids.empty()) continue;
        const auto [lo, hi] = std::minmax_element(tag.ids.begin(), tag.ids.end());
        if (tag.kind == TagKind::Element && elements_linked) {
            report.add(where, ErrorCode::IndexOutOfRange, "range unchecked: elements are linked", true);
            continue;
        }
        const auto limit = tag.kind == TagKind::Nodal ? zone.n_vertices : n_cells;
        if (*lo < 0 || *hi >= limit) {
            report.add(where, ErrorCode::IndexOutOfRange,
                       "tag id outside [0, " + std::to_string(limit) + ")");
        }
    }
}

}  // namespace

ValidationReport validate_tree(const MeshTree& tree) {
    ValidationReport report;
    if (!std::isfinite(tree.time()) || tree.time() < 0.0) {
        report.add("time", ErrorCode::InvalidValue, "time must be finite and non-negative");
    }
    std::set<std::string> base_names;
    for (const auto& base : tree.bases()) {
        if (!base_names.insert(base.name).second) {
            report.add(base.name, ErrorCode::DuplicateName, "duplicate base name");
        }
        if (base.cell_dim < 0 || base.cell_dim > 3 || base.phys_dim < 1 || base.phys_dim > 3 ||
            base.cell_dim > base.phys_dim) {
            report.add(base.name, ErrorCode::DimensionMismatch,
                       "invalid (cell_dim, phys_dim) = (" + std::to_string(base.cell_dim) + ", " +
                           std::to_string(base.phys_dim) + ")");
        }
        std::set<std::string> zone_names;
        for (const auto& zone : base.zones) {
            if (!zone_names.insert(zone.name).second) {
                report.add(base.name + "/" + zone.name, ErrorCode::DuplicateName, "duplicate zone name");
            }
        }
    }
    const auto linked = check_links(tree, report);
    for (const auto& base : tree.bases()) {
        for (const auto& zone : base.zones) check_zone(base, zone, linked, report);
    }
    return report;
}

MeshTree resolve_links(const MeshTree& tree, const TreeProvider& provider) {
    if (!tree.has_links()) return tree;
    auto bases = tree.bases();
    for (const auto& link : tree.links()) {
        const MeshTree* target = provider ? provider(link.target_time) : nullptr;
        if (!target) {
            throw Error(ErrorCode::MissingLinkTarget,
                        "no tree at time " + std::to_string(link.target_time));
        }
        if (!(link.target_time < tree.time())) {
            throw Error(ErrorCode::InvalidLink, "links must point to an earlier time");
        }
        std::optional<MeshTree> resolved_target;
        if (target->has_links()) {
            resolved_target = resolve_links(*target, provider);
            target = &*resolved_target;
        }
        for (const auto& text : link.target_paths) {
            const auto path = parse_link_path(text);
            if (!path) throw Error(ErrorCode::InvalidLink, "malformed link path " + text);
            const Base* source_base = target->find_base(path->base);
            const Zone* source = source_base ? source_base->find_zone(path->zone) : nullptr;
            if (!source) {
                throw Error(ErrorCode::MissingLinkTarget,
                            text + " absent at time " + std::to_string(link.target_time));
            }
            auto base_it = std::find_if(bases.begin(), bases.end(), [&](const Base& b) { return b.name == path->base; });
            if (base_it == bases.end()) throw Error(ErrorCode::InvalidLink, text + " names an unknown base");
            auto zone_it = std::find_if(base_it->zones.begin(), base_it->zones.end(),
                                        [&](const Zone& z) { return z.name == path->zone; });
            if (zone_it == base_it->zones.end()) throw Error(ErrorCode::InvalidLink, text + " names an unknown zone");
            switch (path->component) {
                case LinkComponent::GridCoordinates: zone_it->coordinates = source->coordinates; break;
                case LinkComponent::Elements: zone_it->element_blocks = source->element_blocks; break;
                case LinkComponent::Tags: zone_it->tags = source->tags; break;
            }
        }
    }
    return MeshTree::unchecked(std::move(bases), tree.time(), {});
}

std::vector<ElementBlock> implicit_connectivity(const Zone& zone) {
    if (zone.type != ZoneType::Structured) {
        throw Error(ErrorCode::NotStructured, "zone " + zone.name + " is unstructured");
    }
    const auto& dims = zone.structured_dims;
    if (dims.empty() || dims.size() > 3) {
        throw Error(ErrorCode::DimensionMismatch, "structured zones need 1 to 3 grid axes");
    }
    const std::int64_t count = zone.element_count();
    if (count == 0) return {};

    ElementBlock block;
    block.range_begin = 0;
    block.range_end = count;
    const std::int64_t nx = dims[0];
    if (dims.size() == 1) {
        block.type = ElementType::Bar2;
        block.connectivity.resize(count, 2);
        for (std::int64_t i = 0; i + 1 < nx; ++i) block.connectivity.row(i) << i, i + 1;
    } else if (dims.size() == 2) {
        block.type = ElementType::Quad4;
        block.connectivity.resize(count, 4);
        const std::int64_t ny = dims[1];
        std::int64_t e = 0;
        for (std::int64_t j = 0; j + 1 < ny; ++j) {
            for (std::int64_t i = 0; i + 1 < nx; ++i, ++e) {
                const auto v = i + nx * j;
                block.connectivity.row(e) << v, v + 1, v + 1 + nx, v + nx;
            }
        }
    } else {
        block.type = ElementType::Hexa8;
        block.connectivity.resize(count, 8);
        const std::int64_t ny = dims[1];
        const std::int64_t nz = dims[2];
        const std::int64_t layer = nx * ny;
        std::int64_t e = 0;
        for (std::int64_t k = 0; k + 1 < nz; ++k) {
            for (std::int64_t j = 0; j + 1 < ny; ++j) {
                for (std::int64_t i = 0; i + 1 < nx; ++i, ++e) {
                    const auto v = i + nx * (j + ny * k);
                    block.connectivity.row(e) << v, v + 1, v + 1 + nx, v + nx, v + layer, v + 1 + layer,
                        v + 1 + nx + layer, v + nx + layer;
                }
            }
        }
    }
    return {block};
}

bool operator==(const ElementBlock& a, const ElementBlock& b) {
    return a.type == b.type && a.range_begin == b.range_begin && a.range_end == b.range_end &&
           bitwise_equal(a.connectivity, b.connectivity);
}

bool operator==(const FieldArray& a, const FieldArray& b) {
    return a.name == b.name && a.location == b.location && bitwise_equal(a.values, b.values);
}

bool operator==(const TagSet& a, const TagSet& b) {
    return a.name == b.name && a.kind == b.kind && a.ids == b.ids;
}

bool operator==(const Zone& a, const Zone& b) {
    return a.name == b.name && a.type == b.type && a.n_vertices == b.n_vertices &&
           bitwise_equal(a.coordinates, b.coordinates) && a.element_blocks == b.element_blocks &&
           a.fields == b.fields && a.tags == b.tags && a.structured_dims == b.structured_dims;
}

bool operator==(const Base& a, const Base& b) {
    return a.name == b.name && a.cell_dim == b.cell_dim && a.phys_dim == b.phys_dim && a.zones == b.zones;
}

bool operator==(const LinkSpec& a, const LinkSpec& b) {
    return same_bits(a.target_time, b.target_time) && a.target_paths == b.target_paths;
}

bool operator==(const MeshTree& a, const MeshTree& b) {
    return same_bits(a.time_, b.time_) && a.bases_ == b.bases_ && a.links_ == b.links_;
}

}  // namespace plaid
