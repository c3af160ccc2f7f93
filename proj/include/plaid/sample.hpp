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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plaid/mesh_tree.hpp"

namespace plaid {

/// Absolute tolerance used to match a requested time against stored times.
inline constexpr double kTimeTolerance = 1e-12;

struct QuerySelector {
    std::string name;
    std::optional<std::string> base_name;
    std::optional<std::string> zone_name;
    std::optional<Location> location;  // Vertex when omitted
    std::optional<double> time;        // default time when omitted
};

using TimeSeries = std::vector<std::pair<double, double>>;
using TreePtr = std::shared_ptr<const MeshTree>;

/// Time-indexed mesh trees plus named scalars and time series.
///
/// Queries resolve omitted arguments the same way everywhere: the default
/// time is the smallest stored time (allowed when there is a single time or
/// when t = 0 is stored), an omitted base or zone resolves only when it is the
/// unique candidate, and an omitted location means Vertex. Every getter works
/// on the link-resolved tree, so borrowed components are visible.
class Sample {
public:
    /// Stores a tree under its own time. Rejects a second tree at the same time.
    void add_tree(MeshTree tree);
    void add_tree(TreePtr tree);
    void set_scalar(const std::string& name, double value);
    /// Entries must be strictly increasing in time.
    void set_time_series(const std::string& name, TimeSeries series);

    const std::map<double, TreePtr>& trees() const { return trees_; }
    const std::map<std::string, double>& scalars() const { return scalars_; }
    const std::map<std::string, TimeSeries>& time_series() const { return time_series_; }

    std::vector<double> get_all_mesh_times() const;

    /// The stored (possibly link-bearing) tree, or the link-resolved tree when
    /// apply_links is set, using this sample's earlier trees as the provider.
    TreePtr get_mesh(std::optional<double> time = std::nullopt, bool apply_links = false) const;

    RealVector get_field(const QuerySelector& selector) const;
    std::vector<std::string> get_field_names(std::optional<double> time = std::nullopt,
                                             const std::optional<std::string>& base_name = std::nullopt,
                                             const std::optional<std::string>& zone_name = std::nullopt,
                                             std::optional<Location> location = std::nullopt) const;

    double get_scalar(const std::string& name) const;
    std::vector<std::string> get_scalar_names() const;
    const TimeSeries& get_time_series(const std::string& name) const;

    RealMatrix get_nodes(const std::optional<std::string>& base_name = std::nullopt,
                         const std::optional<std::string>& zone_name = std::nullopt,
                         std::optional<double> time = std::nullopt) const;
    /// Connectivity grouped by element type, blocks concatenated in global
    /// range order. Structured zones report their implicit cells.
    std::map<ElementType, IndexMatrix> get_elements(const std::optional<std::string>& base_name = std::nullopt,
                                                    const std::optional<std::string>& zone_name = std::nullopt,
                                                    std::optional<double> time = std::nullopt) const;
    std::map<std::string, IndexList> get_nodal_tags(const std::optional<std::string>& base_name = std::nullopt,
                                                    const std::optional<std::string>& zone_name = std::nullopt,
                                                    std::optional<double> time = std::nullopt) const;

    /// Key of the stored tree matching `time` (or the default time).
    double resolve_time(std::optional<double> time) const;

    friend bool operator==(const Sample& a, const Sample& b);

private:
    std::map<double, TreePtr> trees_;
    std::map<std::string, double> scalars_;
    std::map<std::string, TimeSeries> time_series_;
};

/// Picks the zone named by (base_name, zone_name), applying the unique
/// candidate rule to omitted names. `missing` is the error code raised when a
/// named base or zone does not exist.
std::pair<const Base*, const Zone*> resolve_zone(const MeshTree& tree,
                                                 const std::optional<std::string>& base_name,
                                                 const std::optional<std::string>& zone_name,
                                                 ErrorCode missing = ErrorCode::NotFound);

}  // namespace plaid
