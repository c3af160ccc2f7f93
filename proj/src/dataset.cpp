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

#include "plaid/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>
#include <set>

namespace plaid {

std::string_view to_string(Subset subset) { return subset == Subset::Public ? "Public" : "Private"; }

std::optional<Subset> parse_subset(std::string_view text) {
    if (text == "Public") return Subset::Public;
    if (text == "Private") return Subset::Private;
    return std::nullopt;
}

const IndexList& ProblemDefinition::get_split(const std::string& name) const {
    const auto it = splits.find(name);
    if (it == splits.end()) throw Error(ErrorCode::NoSuchSplit, "no split named " + name);
    return it->second;
}

IndexList ProblemDefinition::hidden_subset(Subset subset) const {
    if (!hidden_partition) throw Error(ErrorCode::NoPartition, "problem has no hidden partition");
    IndexList ids;
    for (const auto& [id, side] : *hidden_partition) {
        if (side == subset) ids.push_back(id);
    }
    return ids;
}

struct Dataset::Slot {
    std::once_flag once;
    std::optional<Sample> sample;
    Loader loader;
};

Dataset::Dataset() = default;
Dataset::Dataset(Dataset&&) noexcept = default;
Dataset& Dataset::operator=(Dataset&&) noexcept = default;
Dataset::~Dataset() = default;

std::int64_t Dataset::add_sample(Sample sample) {
    auto slot = std::make_unique<Slot>();
    std::call_once(slot->once, [&] { slot->sample = std::move(sample); });
    slots_.push_back(std::move(slot));
    return static_cast<std::int64_t>(slots_.size()) - 1;
}

std::int64_t Dataset::add_lazy_sample(Loader loader) {
    auto slot = std::make_unique<Slot>();
    slot->loader = std::move(loader);
    slots_.push_back(std::move(slot));
    return static_cast<std::int64_t>(slots_.size()) - 1;
}

const Sample& Dataset::sample_at(std::int64_t id) const {
    if (id < 0 || id >= static_cast<std::int64_t>(slots_.size())) {
        throw Error(ErrorCode::IdOutOfRange,
                    "sample id " + std::to_string(id) + " outside [0, " + std::to_string(slots_.size()) + ")");
    }
    Slot& slot = *slots_[static_cast<std::size_t>(id)];
    std::call_once(slot.once, [&] { slot.sample = slot.loader(); });
    return *slot.sample;
}

bool Dataset::is_loaded(std::int64_t id) const {
    if (id < 0 || id >= static_cast<std::int64_t>(slots_.size())) return false;
    // Only meaningful once no other thread is populating the slot.
    return slots_[static_cast<std::size_t>(id)]->sample.has_value();
}

SampleStream Dataset::iterate(IndexList ids) const {
    for (auto id : ids) {
        if (id < 0 || id >= static_cast<std::int64_t>(slots_.size())) {
            throw Error(ErrorCode::IdOutOfRange, "sample id " + std::to_string(id) + " out of range");
        }
    }
    return SampleStream(*this, std::move(ids));
}

const Sample& SampleStream::iterator::operator*() const { return dataset_->sample_at(*pos_); }

namespace {

std::string sample_prefix(std::int64_t id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "sample_%09lld/", static_cast<long long>(id));
    return buf;
}

void check_problem(const ProblemDefinition& problem, std::int64_t n_samples, ValidationReport& report) {
    static const std::regex kNested("^train_([0-9]+)$");
    std::vector<std::pair<std::int64_t, const IndexList*>> nested;
    for (const auto& [name, ids] : problem.splits) {
        const std::string where = "problem/splits/" + name;
        if (std::adjacent_find(ids.begin(), ids.end(), std::greater_equal<>()) != ids.end()) {
            report.add(where, ErrorCode::InvalidValue, "split ids must be sorted and unique");
        }
        for (auto id : ids) {
            if (id < 0 || id >= n_samples) {
                report.add(where, ErrorCode::IndexOutOfRange,
                           "id " + std::to_string(id) + " outside [0, " + std::to_string(n_samples) + ")");
                break;
            }
        }
        std::smatch match;
        if (std::regex_match(name, match, kNested)) {
            const auto k = std::stoll(match[1].str());
            if (k != static_cast<std::int64_t>(ids.size())) {
                report.add(where, ErrorCode::InvalidValue,
                           "nested split size " + std::to_string(ids.size()) + " differs from its suffix");
            }
            nested.emplace_back(k, &ids);
        }
    }
    std::sort(nested.begin(), nested.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < nested.size(); ++i) {
        const auto& small = *nested[i - 1].second;
        const auto& large = *nested[i].second;
        std::set<std::int64_t> larger(large.begin(), large.end());
        const bool subset = std::all_of(small.begin(), small.end(), [&](auto id) { return larger.count(id) > 0; });
        if (!subset) {
            report.add("problem/splits/train_" + std::to_string(nested[i].first), ErrorCode::InvalidValue,
                       "train_" + std::to_string(nested[i - 1].first) + " is not contained in it");
        }
    }

    if (problem.hidden_partition) {
        const auto& partition = *problem.hidden_partition;
        const auto test = problem.splits.find("test");
        if (test == problem.splits.end()) {
            report.add("problem/hidden_partition", ErrorCode::InvalidValue, "hidden partition without a test split");
        } else {
            IndexList keys;
            for (const auto& [id, _] : partition) keys.push_back(id);
            IndexList test_ids = test->second;
            std::sort(test_ids.begin(), test_ids.end());
            if (keys != test_ids) {
                report.add("problem/hidden_partition", ErrorCode::InvalidValue,
                           "hidden partition must cover exactly the test split");
            }
        }
        std::size_t n_public = 0;
        for (const auto& [_, side] : partition) n_public += side == Subset::Public ? 1 : 0;
        if (n_public == 0 || n_public == partition.size()) {
            report.add("problem/hidden_partition", ErrorCode::InvalidValue,
                       "both public and private subsets must be non-empty");
        }
    }
}

struct TopologySignature {
    std::vector<std::int64_t> vertex_counts;
    std::vector<std::map<ElementType, IndexMatrix>> elements;
};

TopologySignature topology_of(const MeshTree& tree) {
    TopologySignature sig;
    for (const auto& base : tree.bases()) {
        for (const auto& zone : base.zones) {
            sig.vertex_counts.push_back(zone.n_vertices);
            std::map<ElementType, IndexMatrix> by_type;
            const auto blocks = zone.type == ZoneType::Structured ? implicit_connectivity(zone) : zone.element_blocks;
            for (const auto& block : blocks) {
                auto& target = by_type[block.type];
                IndexMatrix merged(target.rows() + block.connectivity.rows(), block.connectivity.cols());
                if (target.rows() > 0) merged << target, block.connectivity;
                else merged = block.connectivity;
                target = std::move(merged);
            }
            sig.elements.push_back(std::move(by_type));
        }
    }
    return sig;
}

bool same_topology(const TopologySignature& a, const TopologySignature& b) {
    if (a.vertex_counts != b.vertex_counts || a.elements.size() != b.elements.size()) return false;
    for (std::size_t z = 0; z < a.elements.size(); ++z) {
        if (a.elements[z].size() != b.elements[z].size()) return false;
        for (auto ia = a.elements[z].begin(), ib = b.elements[z].begin(); ia != a.elements[z].end(); ++ia, ++ib) {
            if (ia->first != ib->first || !bitwise_equal(ia->second, ib->second)) return false;
        }
    }
    return true;
}

}  // namespace

ValidationReport validate_dataset(const Dataset& dataset) {
    ValidationReport report;
    const auto n = static_cast<std::int64_t>(dataset.size());
    const auto& problem = dataset.problem();
    check_problem(problem, n, report);

    std::set<std::string> seen_fields;
    std::set<std::string> seen_scalars;
    std::optional<TopologySignature> reference_topology;
    for (std::int64_t id = 0; id < n; ++id) {
        const Sample& sample = dataset.sample_at(id);
        const auto prefix = sample_prefix(id);
        for (const auto& [time, tree] : sample.trees()) {
            char stamp[48];
            std::snprintf(stamp, sizeof(stamp), "t=%.17g/", time);
            report.merge(validate_tree(*tree), prefix + stamp);
        }
        for (const auto& [name, _] : sample.scalars()) seen_scalars.insert(name);
        for (const auto& name : problem.in_scalars_names) {
            if (!sample.scalars().count(name)) {
                report.add(prefix + "scalars/" + name, ErrorCode::NotFound, "input scalar missing");
            }
        }
        try {
            for (double t : sample.get_all_mesh_times()) {
                for (const auto& name : sample.get_field_names(t)) seen_fields.insert(name);
            }
            if (problem.constant_topology.value_or(false) && !sample.trees().empty()) {
                auto sig = topology_of(*sample.get_mesh(std::nullopt, true));
                if (!reference_topology) {
                    reference_topology = std::move(sig);
                } else if (!same_topology(*reference_topology, sig)) {
                    report.add(prefix + "meshes", ErrorCode::DimensionMismatch,
                               "vertex count or connectivity differs from sample 0 in a constant-topology dataset");
                }
            }
        } catch (const Error& e) {
            report.add(prefix + "meshes", e.code(), e.what());
        }
    }
    for (const auto& name : problem.out_scalars_names) {
        if (!seen_scalars.count(name)) {
            report.add("problem/out_scalars/" + name, ErrorCode::NotFound, "output scalar absent from all samples");
        }
    }
    for (const auto* names : {&problem.in_fields_names, &problem.out_fields_names}) {
        for (const auto& name : *names) {
            if (!seen_fields.count(name)) {
                report.add("problem/fields/" + name, ErrorCode::FieldNotFound, "field absent from all samples");
            }
        }
    }
    return report;
}

bool structurally_equal(const Dataset& a, const Dataset& b) {
    if (a.size() != b.size() || a.infos() != b.infos() || !(a.problem() == b.problem())) return false;
    for (std::int64_t id = 0; id < static_cast<std::int64_t>(a.size()); ++id) {
        if (!(a.sample_at(id) == b.sample_at(id))) return false;
    }
    return true;
}

Dataset participant_export(const Dataset& dataset) {
    Dataset out;
    out.infos() = dataset.infos();
    out.problem() = dataset.problem();
    out.problem().hidden_partition.reset();

    std::set<std::int64_t> test_ids;
    if (const auto it = dataset.problem().splits.find("test"); it != dataset.problem().splits.end()) {
        test_ids.insert(it->second.begin(), it->second.end());
    }
    const std::set<std::string> out_fields(dataset.problem().out_fields_names.begin(),
                                           dataset.problem().out_fields_names.end());
    const std::set<std::string> out_scalars(dataset.problem().out_scalars_names.begin(),
                                            dataset.problem().out_scalars_names.end());

    for (std::int64_t id = 0; id < static_cast<std::int64_t>(dataset.size()); ++id) {
        const Sample& source = dataset.sample_at(id);
        if (!test_ids.count(id)) {
            out.add_sample(source);
            continue;
        }
        Sample stripped;
        for (const auto& [_, tree] : source.trees()) {
            auto bases = tree->bases();
            for (auto& base : bases) {
                for (auto& zone : base.zones) {
                    std::erase_if(zone.fields, [&](const FieldArray& f) { return out_fields.count(f.name) > 0; });
                }
            }
            stripped.add_tree(MeshTree::unchecked(std::move(bases), tree->time(), tree->links()));
        }
        for (const auto& [name, value] : source.scalars()) {
            if (!out_scalars.count(name)) stripped.set_scalar(name, value);
        }
        for (const auto& [name, series] : source.time_series()) stripped.set_time_series(name, series);
        out.add_sample(std::move(stripped));
    }
    return out;
}

}  // namespace plaid
