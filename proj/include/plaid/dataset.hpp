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
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "plaid/sample.hpp"

namespace plaid {

/// Current on-disk format major version; stored as infos["format_version"].
inline constexpr int kFormatVersion = 1;

enum class TaskKind { Regression };
enum class Subset { Public, Private };

std::string_view to_string(Subset subset);
std::optional<Subset> parse_subset(std::string_view text);

struct ProblemDefinition {
    TaskKind task = TaskKind::Regression;
    std::vector<std::string> in_scalars_names;
    std::vector<std::string> out_scalars_names;
    std::vector<std::string> in_fields_names;
    std::vector<std::string> out_fields_names;
    std::map<std::string, IndexList> splits;
    /// Public/private assignment of every test sample, when scored hidden.
    std::optional<std::map<std::int64_t, Subset>> hidden_partition;
    /// Declares that all samples share vertex count and connectivity.
    std::optional<bool> constant_topology;

    const IndexList& get_split(const std::string& name) const;
    /// Test ids assigned to one side of the hidden partition, ascending.
    IndexList hidden_subset(Subset subset) const;

    friend bool operator==(const ProblemDefinition&, const ProblemDefinition&) = default;
};

class Dataset;

/// Forward range over samples in a caller-given id order. Lazily-stored
/// samples are loaded when dereferenced.
class SampleStream {
public:
    class iterator {
    public:
        using value_type = Sample;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        iterator(const Dataset* dataset, IndexList::const_iterator pos) : dataset_(dataset), pos_(pos) {}
        const Sample& operator*() const;
        iterator& operator++() {
            ++pos_;
            return *this;
        }
        iterator operator++(int) {
            auto copy = *this;
            ++pos_;
            return copy;
        }
        std::int64_t id() const { return *pos_; }
        friend bool operator==(const iterator& a, const iterator& b) { return a.pos_ == b.pos_; }

    private:
        const Dataset* dataset_ = nullptr;
        IndexList::const_iterator pos_;
    };

    SampleStream(const Dataset& dataset, IndexList ids) : dataset_(&dataset), ids_(std::move(ids)) {}
    iterator begin() const { return {dataset_, ids_.begin()}; }
    iterator end() const { return {dataset_, ids_.end()}; }
    std::size_t size() const { return ids_.size(); }

private:
    const Dataset* dataset_;
    IndexList ids_;
};

/// Ordered samples, free-form metadata and the learning problem.
///
/// Samples may be stored eagerly or as loaders; a loader runs at most once
/// successfully, even under concurrent first access.
class Dataset {
public:
    using Loader = std::function<Sample()>;

    Dataset();
    Dataset(Dataset&&) noexcept;
    Dataset& operator=(Dataset&&) noexcept;
    ~Dataset();

    std::int64_t add_sample(Sample sample);
    std::int64_t add_lazy_sample(Loader loader);

    std::size_t size() const { return slots_.size(); }
    const Sample& sample_at(std::int64_t id) const;
    bool is_loaded(std::int64_t id) const;
    SampleStream iterate(IndexList ids) const;
    const IndexList& get_split(const std::string& name) const { return problem_.get_split(name); }

    std::map<std::string, std::string>& infos() { return infos_; }
    const std::map<std::string, std::string>& infos() const { return infos_; }
    ProblemDefinition& problem() { return problem_; }
    const ProblemDefinition& problem() const { return problem_; }

private:
    struct Slot;
    std::vector<std::unique_ptr<Slot>> slots_;
    std::map<std::string, std::string> infos_;
    ProblemDefinition problem_;
};

/// Problem-level checks plus every sample's tree report. Loads all samples.
ValidationReport validate_dataset(const Dataset& dataset);

/// Loads every sample and compares samples, infos and problem definitions.
bool structurally_equal(const Dataset& a, const Dataset& b);

struct SaveOptions {
    /// Write problem_definition/hidden_partition.csv when a partition exists.
    bool include_hidden_partition = true;
};

/// Writes the dataset layout under `root`, which must be absent or empty.
/// Refuses (InvalidDataset) when validate_dataset reports any violation.
void save_dataset(const Dataset& dataset, const std::filesystem::path& root, const SaveOptions& options = {});

/// Reads a dataset. Lazy mode parses metadata up front and defers each
/// sample's files until first access.
Dataset load_dataset(const std::filesystem::path& root, bool lazy = false);

/// Copy intended for benchmark participants: test samples lose their output
/// scalars and output fields, and the hidden partition is dropped.
Dataset participant_export(const Dataset& dataset);

}  // namespace plaid
