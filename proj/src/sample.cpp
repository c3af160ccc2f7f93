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

#include "plaid/sample.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

namespace plaid {

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

std::string describe(double time) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", time);
    return buf;
}

}  // namespace

void Sample::add_tree(MeshTree tree) { add_tree(std::make_shared<const MeshTree>(std::move(tree))); }

void Sample::add_tree(TreePtr tree) {
    const double t = tree->time();
    for (const auto& [stored, _] : trees_) {
        if (std::abs(stored - t) <= kTimeTolerance) {
            throw Error(ErrorCode::InvalidValue, "a tree is already stored at time " + describe(t));
        }
    }
    trees_.emplace(t, std::move(tree));
}

void Sample::set_scalar(const std::string& name, double value) { scalars_[name] = value; }

void Sample::set_time_series(const std::string& name, TimeSeries series) {
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (!(series[i].first > series[i - 1].first)) {
            throw Error(ErrorCode::InvalidValue, "time series " + name + " is not strictly increasing in time");
        }
    }
    time_series_[name] = std::move(series);
}

std::vector<double> Sample::get_all_mesh_times() const {
    std::vector<double> times;
    times.reserve(trees_.size());
    for (const auto& [t, _] : trees_) times.push_back(t);
    return times;
}

double Sample::resolve_time(std::optional<double> time) const {
    if (trees_.empty()) throw Error(ErrorCode::NoSuchTime, "sample stores no mesh");
    if (time) {
        for (const auto& [stored, _] : trees_) {
            if (std::abs(stored - *time) <= kTimeTolerance) return stored;
        }
        throw Error(ErrorCode::NoSuchTime, "no mesh at time " + describe(*time));
    }
    const double first = trees_.begin()->first;
    if (trees_.size() == 1 || std::abs(first) <= kTimeTolerance) return first;
    throw Error(ErrorCode::AmbiguousDefault,
                "several mesh times and none at 0; pass the time explicitly");
}

TreePtr Sample::get_mesh(std::optional<double> time, bool apply_links) const {
    const auto& tree = trees_.at(resolve_time(time));
    if (!apply_links || !tree->has_links()) return tree;
    const TreeProvider provider = [this](double t) -> const MeshTree* {
        for (const auto& [stored, ptr] : trees_) {
            if (std::abs(stored - t) <= kTimeTolerance) return ptr.get();
        }
        return nullptr;
    };
    return std::make_shared<const MeshTree>(resolve_links(*tree, provider));
}

std::pair<const Base*, const Zone*> resolve_zone(const MeshTree& tree,
                                                 const std::optional<std::string>& base_name,
                                                 const std::optional<std::string>& zone_name,
                                                 ErrorCode missing) {
    const Base* base = nullptr;
    if (base_name) {
        base = tree.find_base(*base_name);
        if (!base) throw Error(missing, "no base named " + *base_name);
    } else {
        if (tree.bases().empty()) throw Error(missing, "tree has no base");
        if (tree.bases().size() > 1) {
            throw Error(ErrorCode::AmbiguousQuery,
                        std::to_string(tree.bases().size()) + " bases; pass base_name");
        }
        base = &tree.bases().front();
    }
    const Zone* zone = nullptr;
    if (zone_name) {
        zone = base->find_zone(*zone_name);
        if (!zone) throw Error(missing, "no zone named " + *zone_name + " in " + base->name);
    } else {
        if (base->zones.empty()) throw Error(missing, "base " + base->name + " has no zone");
        if (base->zones.size() > 1) {
            throw Error(ErrorCode::AmbiguousQuery,
                        base->name + " has " + std::to_string(base->zones.size()) + " zones; pass zone_name");
        }
        zone = &base->zones.front();
    }
    return {base, zone};
}

RealVector Sample::get_field(const QuerySelector& selector) const {
    const auto tree = get_mesh(selector.time, true);
    const auto [base, zone] = resolve_zone(*tree, selector.base_name, selector.zone_name, ErrorCode::FieldNotFound);
    const Location where = selector.location.value_or(Location::Vertex);
    const FieldArray* field = zone->find_field(selector.name, where);
    if (!field) {
        throw Error(ErrorCode::FieldNotFound, selector.name + " at " + std::string(to_string(where)) + " in " +
                                                  base->name + "/" + zone->name);
    }
    return field->values;
}

std::vector<std::string> Sample::get_field_names(std::optional<double> time,
                                                 const std::optional<std::string>& base_name,
                                                 const std::optional<std::string>& zone_name,
                                                 std::optional<Location> location) const {
    const auto tree = get_mesh(time, true);
    std::set<std::string> names;
    for (const auto& base : tree->bases()) {
        if (base_name && base.name != *base_name) continue;
        for (const auto& zone : base.zones) {
            if (zone_name && zone.name != *zone_name) continue;
            for (const auto& field : zone.fields) {
                if (location && field.location != *location) continue;
                names.insert(field.name);
            }
        }
    }
    return {names.begin(), names.end()};
}

double Sample::get_scalar(const std::string& name) const {
    const auto it = scalars_.find(name);
    if (it == scalars_.end()) throw Error(ErrorCode::NotFound, "no scalar named " + name);
    return it->second;
}

std::vector<std::string> Sample::get_scalar_names() const {
    std::vector<std::string> names;
    for (const auto& [name, _] : scalars_) names.push_back(name);
    return names;
}

const TimeSeries& Sample::get_time_series(const std::string& name) const {
    const auto it = time_series_.find(name);
    if (it == time_series_.end()) throw Error(ErrorCode::NotFound, "no time series named " + name);
    return it->second;
}

RealMatrix Sample::get_nodes(const std::optional<std::string>& base_name,
                             const std::optional<std::string>& zone_name, std::optional<double> time) const {
    const auto tree = get_mesh(time, true);
    return resolve_zone(*tree, base_name, zone_name).second->coordinates;
}

std::map<ElementType, IndexMatrix> Sample::get_elements(const std::optional<std::string>& base_name,
                                                        const std::optional<std::string>& zone_name,
                                                        std::optional<double> time) const {
    const auto tree = get_mesh(time, true);
    const Zone& zone = *resolve_zone(*tree, base_name, zone_name).second;
    auto blocks = zone.type == ZoneType::Structured ? implicit_connectivity(zone) : zone.element_blocks;
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const auto& a, const auto& b) { return a.range_begin < b.range_begin; });
    std::map<ElementType, IndexMatrix> out;
    for (const auto& block : blocks) {
        auto& target = out[block.type];
        if (target.size() == 0) {
            target = block.connectivity;
            continue;
        }
        IndexMatrix merged(target.rows() + block.connectivity.rows(), target.cols());
        merged << target, block.connectivity;
        target = std::move(merged);
    }
    return out;
}

std::map<std::string, IndexList> Sample::get_nodal_tags(const std::optional<std::string>& base_name,
                                                        const std::optional<std::string>& zone_name,
                                                        std::optional<double> time) const {
    const auto tree = get_mesh(time, true);
    const Zone& zone = *resolve_zone(*tree, base_name, zone_name).second;
    std::map<std::string, IndexList> out;
    for (const auto& tag : zone.tags) {
        if (tag.kind == TagKind::Nodal) out[tag.name] = tag.ids;
    }
    return out;
}

bool operator==(const Sample& a, const Sample& b) {
    if (a.trees_.size() != b.trees_.size()) return false;
    for (auto ia = a.trees_.begin(), ib = b.trees_.begin(); ia != a.trees_.end(); ++ia, ++ib) {
        if (!same_bits(ia->first, ib->first) || !(*ia->second == *ib->second)) return false;
    }
    if (a.scalars_.size() != b.scalars_.size()) return false;
    for (auto ia = a.scalars_.begin(), ib = b.scalars_.begin(); ia != a.scalars_.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !same_bits(ia->second, ib->second)) return false;
    }
    if (a.time_series_.size() != b.time_series_.size()) return false;
    for (auto ia = a.time_series_.begin(), ib = b.time_series_.begin(); ia != a.time_series_.end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second.size() != ib->second.size()) return false;
        for (std::size_t k = 0; k < ia->second.size(); ++k) {
            if (!same_bits(ia->second[k].first, ib->second[k].first) ||
                !same_bits(ia->second[k].second, ib->second[k].second)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace plaid
