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

#include <algorithm>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "array_store.hpp"
#include "plaid/dataset.hpp"
#include "plaid/parallel.hpp"

namespace plaid {

namespace fs = std::filesystem;
using detail::Json;

namespace {

constexpr std::string_view kMeshFormat = "plaid-mesh";

// ---------------------------------------------------------------------------
// Mesh manifests
// ---------------------------------------------------------------------------

Json tree_to_manifest(const MeshTree& tree, detail::BlobWriter& blobs) {
    Json bases = Json::array();
    for (const auto& base : tree.bases()) {
        Json zones = Json::array();
        for (const auto& zone : base.zones) {
            Json z;
            z["name"] = zone.name;
            z["type"] = std::string(to_string(zone.type));
            z["n_vertices"] = zone.n_vertices;
            z["coordinates"] = zone.coordinates.size() > 0 ? blobs.write(zone.coordinates) : Json(nullptr);
            if (zone.type == ZoneType::Structured) z["structured_dims"] = zone.structured_dims;
            Json blocks = Json::array();
            for (const auto& block : zone.element_blocks) {
                blocks.push_back({{"type", std::string(to_string(block.type))},
                                  {"range", {block.range_begin, block.range_end}},
                                  {"connectivity", blobs.write(block.connectivity)}});
            }
            z["element_blocks"] = std::move(blocks);
            Json fields = Json::array();
            for (const auto& field : zone.fields) {
                fields.push_back({{"name", field.name},
                                  {"location", std::string(to_string(field.location))},
                                  {"values", blobs.write(field.values)}});
            }
            z["fields"] = std::move(fields);
            Json tags = Json::array();
            for (const auto& tag : zone.tags) {
                tags.push_back({{"name", tag.name}, {"kind", std::string(to_string(tag.kind))}, {"ids", blobs.write(tag.ids)}});
            }
            z["tags"] = std::move(tags);
            zones.push_back(std::move(z));
        }
        bases.push_back({{"name", base.name}, {"cell_dim", base.cell_dim}, {"phys_dim", base.phys_dim}, {"zones", std::move(zones)}});
    }
    Json links = Json::array();
    for (const auto& link : tree.links()) {
        links.push_back({{"target_time", link.target_time}, {"paths", link.target_paths}});
    }
    return Json{{"format", std::string(kMeshFormat)},
                {"format_version", kFormatVersion},
                {"index_base", 0},
                {"time", tree.time()},
                {"bases", std::move(bases)},
                {"links", std::move(links)}};
}

template <typename Parse>
auto parse_enum(const Json& value, Parse parse, const std::string& path, std::string_view what) {
    const auto parsed = parse(value.get<std::string>());
    if (!parsed) throw FormatError(path, 0, "unknown " + std::string(what) + " '" + value.get<std::string>() + "'");
    return *parsed;
}

MeshTree tree_from_manifest(const Json& doc, const detail::BlobReader& blobs) {
    const auto& path = blobs.manifest();
    if (doc.value("format", std::string()) != kMeshFormat) throw FormatError(path, 0, "not a plaid mesh manifest");
    if (doc.at("format_version").get<int>() != kFormatVersion) {
        throw Error(ErrorCode::VersionMismatch,
                    path + " has format_version " + std::to_string(doc.at("format_version").get<int>()));
    }
    const auto index_base = doc.at("index_base").get<std::int64_t>();
    if (index_base != 0 && index_base != 1) throw FormatError(path, 0, "index_base must be 0 or 1");

    std::vector<Base> bases;
    for (const auto& b : doc.at("bases")) {
        Base base;
        base.name = b.at("name").get<std::string>();
        base.cell_dim = b.at("cell_dim").get<int>();
        base.phys_dim = b.at("phys_dim").get<int>();
        for (const auto& z : b.at("zones")) {
            Zone zone;
            zone.name = z.at("name").get<std::string>();
            zone.type = parse_enum(z.at("type"), parse_zone_type, path, "zone type");
            zone.n_vertices = z.at("n_vertices").get<std::int64_t>();
            if (!z.at("coordinates").is_null()) zone.coordinates = blobs.real_matrix(z.at("coordinates"));
            if (z.contains("structured_dims")) zone.structured_dims = z.at("structured_dims").get<std::vector<std::int64_t>>();
            for (const auto& e : z.at("element_blocks")) {
                ElementBlock block;
                block.type = parse_enum(e.at("type"), parse_element_type, path, "element type");
                const auto range = e.at("range").get<std::vector<std::int64_t>>();
                if (range.size() != 2) throw FormatError(path, 0, "element range needs two bounds");
                block.range_begin = range[0];
                block.range_end = range[1];
                block.connectivity = blobs.index_matrix(e.at("connectivity"));
                if (index_base == 1) block.connectivity.array() -= 1;
                zone.element_blocks.push_back(std::move(block));
            }
            for (const auto& f : z.at("fields")) {
                zone.fields.push_back({f.at("name").get<std::string>(),
                                       parse_enum(f.at("location"), parse_location, path, "location"),
                                       blobs.real_vector(f.at("values"))});
            }
            for (const auto& t : z.at("tags")) {
                TagSet tag{t.at("name").get<std::string>(), parse_enum(t.at("kind"), parse_tag_kind, path, "tag kind"),
                           blobs.index_list(t.at("ids"))};
                if (index_base == 1) {
                    for (auto& id : tag.ids) --id;
                }
                zone.tags.push_back(std::move(tag));
            }
            base.zones.push_back(std::move(zone));
        }
        bases.push_back(std::move(base));
    }
    std::vector<LinkSpec> links;
    for (const auto& l : doc.at("links")) {
        links.push_back({l.at("target_time").get<double>(), l.at("paths").get<std::vector<std::string>>()});
    }
    return MeshTree::unchecked(std::move(bases), doc.at("time").get<double>(), std::move(links));
}

// ---------------------------------------------------------------------------
// Sample directories
// ---------------------------------------------------------------------------

void check_name(const std::string& name, std::string_view what) {
    if (name.empty() || name.find_first_of(",\n\r") != std::string::npos) {
        throw Error(ErrorCode::InvalidDataset, std::string(what) + " name '" + name + "' is empty or contains ',' or a newline");
    }
}

void save_sample(const Sample& sample, const fs::path& dir) {
    fs::create_directories(dir / "meshes");
    std::string header;
    std::string values;
    for (const auto& [name, value] : sample.scalars()) {
        check_name(name, "scalar");
        if (!header.empty()) {
            header += ',';
            values += ',';
        }
        header += name;
        values += detail::format_double(value);
    }
    detail::write_text_file(dir / "scalars.csv", header + "\n" + values + "\n");

    if (!sample.time_series().empty()) {
        std::string text = "name,time,value\n";
        for (const auto& [name, series] : sample.time_series()) {
            check_name(name, "time series");
            for (const auto& [t, v] : series) {
                text += name + "," + detail::format_double(t) + "," + detail::format_double(v) + "\n";
            }
        }
        detail::write_text_file(dir / "time_series.csv", text);
    }

    std::int64_t index = 0;
    for (const auto& [_, tree] : sample.trees()) {
        const std::string stem = "mesh_" + detail::padded_id(index++);
        detail::BlobWriter blobs(dir / "meshes", stem);
        detail::write_json_file(dir / "meshes" / (stem + ".manifest"), tree_to_manifest(*tree, blobs));
    }
}

Sample load_sample(const fs::path& dir) {
    Sample sample;
    {
        const auto path = dir / "scalars.csv";
        const auto text = detail::read_text_file(path);
        const auto lines = detail::split_lines(text);
        if (lines.size() != 2) throw FormatError(path.string(), 0, "scalars table needs a header and one value row");
        if (!lines[0].text.empty() || !lines[1].text.empty()) {
            const auto names = detail::split_commas(lines[0].text);
            const auto values = detail::split_commas(lines[1].text);
            if (names.size() != values.size()) {
                throw FormatError(path.string(), lines[1].offset, "value count differs from header");
            }
            std::uint64_t offset = lines[1].offset;
            for (std::size_t i = 0; i < names.size(); ++i) {
                sample.set_scalar(std::string(names[i]), detail::parse_double(values[i], path.string(), offset));
                offset += values[i].size() + 1;
            }
        }
    }

    if (const auto path = dir / "time_series.csv"; fs::exists(path)) {
        const auto text = detail::read_text_file(path);
        const auto lines = detail::split_lines(text);
        if (lines.empty() || lines[0].text != "name,time,value") {
            throw FormatError(path.string(), 0, "expected header name,time,value");
        }
        std::map<std::string, TimeSeries> series;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto parts = detail::split_commas(lines[i].text);
            if (parts.size() != 3) throw FormatError(path.string(), lines[i].offset, "expected 3 columns");
            series[std::string(parts[0])].emplace_back(detail::parse_double(parts[1], path.string(), lines[i].offset),
                                                       detail::parse_double(parts[2], path.string(), lines[i].offset));
        }
        for (auto& [name, entries] : series) {
            try {
                sample.set_time_series(name, std::move(entries));
            } catch (const Error& e) {
                throw FormatError(path.string(), 0, e.what());
            }
        }
    }

    const auto mesh_dir = dir / "meshes";
    std::vector<fs::path> manifests;
    if (fs::exists(mesh_dir)) {
        for (const auto& entry : fs::directory_iterator(mesh_dir)) {
            if (entry.path().extension() == ".manifest") manifests.push_back(entry.path());
        }
    }
    std::sort(manifests.begin(), manifests.end());
    for (std::size_t i = 0; i < manifests.size(); ++i) {
        const auto expected = "mesh_" + detail::padded_id(static_cast<std::int64_t>(i)) + ".manifest";
        if (manifests[i].filename() != expected) {
            throw FormatError(manifests[i].string(), 0, "mesh manifests must be numbered contiguously from 0");
        }
        const auto doc = detail::read_json_file(manifests[i]);
        detail::BlobReader blobs(mesh_dir, manifests[i].string());
        MeshTree tree;
        try {
            tree = tree_from_manifest(doc, blobs);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(manifests[i].string(), 0, e.what());
        }
        try {
            sample.add_tree(std::move(tree));
        } catch (const Error& e) {
            throw FormatError(manifests[i].string(), 0, e.what());
        }
    }
    return sample;
}

// ---------------------------------------------------------------------------
// Metadata files
// ---------------------------------------------------------------------------

std::string emit_yaml(const YAML::Emitter& out) { return std::string(out.c_str()) + "\n"; }

YAML::Node load_yaml(const fs::path& path) {
    const auto text = detail::read_text_file(path);
    try {
        return YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw FormatError(path.string(), e.mark.pos >= 0 ? static_cast<std::uint64_t>(e.mark.pos) : 0, e.what());
    }
}

void write_infos(const std::map<std::string, std::string>& infos, const fs::path& path) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "format_version" << YAML::Value << kFormatVersion;
    for (const auto& [key, value] : infos) {
        if (key == "format_version") continue;
        out << YAML::Key << key << YAML::Value << YAML::DoubleQuoted << value;
    }
    out << YAML::EndMap;
    detail::write_text_file(path, emit_yaml(out));
}

std::map<std::string, std::string> read_infos(const fs::path& path) {
    const auto node = load_yaml(path);
    if (!node.IsMap()) throw FormatError(path.string(), 0, "infos must be a mapping");
    std::map<std::string, std::string> infos;
    try {
        for (const auto& kv : node) infos[kv.first.as<std::string>()] = kv.second.as<std::string>();
    } catch (const YAML::Exception& e) {
        throw FormatError(path.string(), 0, e.what());
    }
    const auto it = infos.find("format_version");
    if (it == infos.end()) throw FormatError(path.string(), 0, "missing format_version");
    const auto version = detail::parse_int(it->second, path.string(), 0);
    if (version != kFormatVersion) {
        throw Error(ErrorCode::VersionMismatch, path.string() + ": format_version " + it->second +
                                                    " is not supported (reader handles " +
                                                    std::to_string(kFormatVersion) + ")");
    }
    return infos;
}

void emit_names(YAML::Emitter& out, std::string_view key, const std::vector<std::string>& names) {
    out << YAML::Key << std::string(key) << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& n : names) out << n;
    out << YAML::EndSeq;
}

void write_problem(const ProblemDefinition& problem, const fs::path& dir, bool with_partition) {
    fs::create_directories(dir);
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "task" << YAML::Value << "regression";
    emit_names(out, "input_scalars", problem.in_scalars_names);
    emit_names(out, "output_scalars", problem.out_scalars_names);
    emit_names(out, "input_fields", problem.in_fields_names);
    emit_names(out, "output_fields", problem.out_fields_names);
    if (problem.constant_topology) {
        out << YAML::Key << "constant_topology" << YAML::Value << *problem.constant_topology;
    }
    out << YAML::EndMap;
    detail::write_text_file(dir / "problem_infos.yaml", emit_yaml(out));

    std::string splits = "split_name,sample_id\n";
    for (const auto& [name, ids] : problem.splits) {
        check_name(name, "split");
        if (ids.empty()) splits += name + ",\n";
        for (auto id : ids) splits += name + "," + std::to_string(id) + "\n";
    }
    detail::write_text_file(dir / "split.csv", splits);

    if (with_partition && problem.hidden_partition) {
        std::string text = "sample_id,subset\n";
        for (const auto& [id, side] : *problem.hidden_partition) {
            text += std::to_string(id) + "," + std::string(to_string(side)) + "\n";
        }
        detail::write_text_file(dir / "hidden_partition.csv", text);
    }
}

std::vector<std::string> read_names(const YAML::Node& node, std::string_view key, const fs::path& path) {
    const auto entry = node[std::string(key)];
    if (!entry) return {};
    if (!entry.IsSequence()) throw FormatError(path.string(), 0, std::string(key) + " must be a list");
    return entry.as<std::vector<std::string>>();
}

ProblemDefinition read_problem(const fs::path& dir) {
    ProblemDefinition problem;
    const auto info_path = dir / "problem_infos.yaml";
    const auto node = load_yaml(info_path);
    try {
        if (node["task"] && node["task"].as<std::string>() != "regression") {
            throw FormatError(info_path.string(), 0, "unsupported task " + node["task"].as<std::string>());
        }
        problem.in_scalars_names = read_names(node, "input_scalars", info_path);
        problem.out_scalars_names = read_names(node, "output_scalars", info_path);
        problem.in_fields_names = read_names(node, "input_fields", info_path);
        problem.out_fields_names = read_names(node, "output_fields", info_path);
        if (node["constant_topology"]) problem.constant_topology = node["constant_topology"].as<bool>();
    } catch (const YAML::Exception& e) {
        throw FormatError(info_path.string(), 0, e.what());
    }

    const auto split_path = dir / "split.csv";
    const auto text = detail::read_text_file(split_path);
    const auto lines = detail::split_lines(text);
    if (lines.empty() || lines[0].text != "split_name,sample_id") {
        throw FormatError(split_path.string(), 0, "expected header split_name,sample_id");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto parts = detail::split_commas(lines[i].text);
        if (parts.size() != 2 || parts[0].empty()) {
            throw FormatError(split_path.string(), lines[i].offset, "expected split_name,sample_id");
        }
        auto& ids = problem.splits[std::string(parts[0])];
        if (!parts[1].empty()) {
            ids.push_back(detail::parse_int(parts[1], split_path.string(), lines[i].offset + parts[0].size() + 1));
        }
    }

    const auto partition_path = dir / "hidden_partition.csv";
    if (fs::exists(partition_path)) {
        const auto ptext = detail::read_text_file(partition_path);
        const auto plines = detail::split_lines(ptext);
        if (plines.empty() || plines[0].text != "sample_id,subset") {
            throw FormatError(partition_path.string(), 0, "expected header sample_id,subset");
        }
        std::map<std::int64_t, Subset> partition;
        for (std::size_t i = 1; i < plines.size(); ++i) {
            const auto parts = detail::split_commas(plines[i].text);
            const auto side = parts.size() == 2 ? parse_subset(parts[1]) : std::nullopt;
            if (!side) throw FormatError(partition_path.string(), plines[i].offset, "expected sample_id,Public|Private");
            partition[detail::parse_int(parts[0], partition_path.string(), plines[i].offset)] = *side;
        }
        problem.hidden_partition = std::move(partition);
    }
    return problem;
}

fs::path sample_dir(const fs::path& root, std::int64_t id) {
    return root / "dataset" / "samples" / ("sample_" + detail::padded_id(id));
}

}  // namespace

void save_dataset(const Dataset& dataset, const fs::path& root, const SaveOptions& options) {
    const auto report = validate_dataset(dataset);
    if (!report.conformant()) {
        for (const auto& issue : report.issues) {
            if (!issue.unchecked) {
                throw Error(ErrorCode::InvalidDataset, issue.path + ": " + issue.message + " (" +
                                                           std::to_string(report.violation_count()) + " violations)");
            }
        }
    }
    for (const auto& [key, _] : dataset.infos()) {
        if (key.empty()) throw Error(ErrorCode::InvalidDataset, "empty infos key");
    }
    detail::prepare_output_dir(root);
    write_infos(dataset.infos(), root / "infos.yaml");
    write_problem(dataset.problem(), root / "problem_definition", options.include_hidden_partition);
    fs::create_directories(root / "dataset" / "samples");
    parallel_for(dataset.size(), [&](std::size_t i) {
        const auto id = static_cast<std::int64_t>(i);
        save_sample(dataset.sample_at(id), sample_dir(root, id));
    });
}

Dataset load_dataset(const fs::path& root, bool lazy) {
    if (!fs::is_directory(root)) throw Error(ErrorCode::IoFailure, root.string() + " is not a directory");
    Dataset dataset;
    dataset.infos() = read_infos(root / "infos.yaml");
    dataset.problem() = read_problem(root / "problem_definition");

    const auto samples_root = root / "dataset" / "samples";
    std::vector<std::string> names;
    if (fs::exists(samples_root)) {
        for (const auto& entry : fs::directory_iterator(samples_root)) {
            if (entry.is_directory()) names.push_back(entry.path().filename().string());
        }
    }
    std::sort(names.begin(), names.end());
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] != "sample_" + detail::padded_id(static_cast<std::int64_t>(i))) {
            throw FormatError((samples_root / names[i]).string(), 0, "sample directories must be numbered contiguously from 0");
        }
    }

    const auto n = names.size();
    if (lazy) {
        for (std::size_t i = 0; i < n; ++i) {
            dataset.add_lazy_sample([dir = sample_dir(root, static_cast<std::int64_t>(i))] { return load_sample(dir); });
        }
        return dataset;
    }
    std::vector<std::optional<Sample>> loaded(n);
    parallel_for(n, [&](std::size_t i) { loaded[i] = load_sample(sample_dir(root, static_cast<std::int64_t>(i))); });
    for (auto& s : loaded) dataset.add_sample(std::move(*s));
    return dataset;
}

}  // namespace plaid
