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

// Internal helpers shared by the dataset, bundle and model writers: raw
// little-endian blob files described by JSON manifest entries, exact decimal
// formatting and LF-only text IO.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plaid/mesh_tree.hpp"

namespace plaid::detail {

using Json = nlohmann::json;

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);
/// Parses a full token; throws FormatError(path, offset) on anything else.
double parse_double(std::string_view text, const std::string& path, std::uint64_t offset);
std::int64_t parse_int(std::string_view text, const std::string& path, std::uint64_t offset);

/// Zero-padded 9-digit decimal, as used in sample and mesh file names.
std::string padded_id(std::int64_t id);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// Splits on '\n'. Each line carries the byte offset of its first character.
struct TextLine {
    std::string_view text;
    std::uint64_t offset;
};
std::vector<TextLine> split_lines(std::string_view content);
std::vector<std::string_view> split_commas(std::string_view line);

/// Writes numbered blob files "<stem>.<k>.blob" into a directory and returns
/// the manifest entry {"blob", "dtype", "shape"} for each.
class BlobWriter {
public:
    BlobWriter(std::filesystem::path dir, std::string stem) : dir_(std::move(dir)), stem_(std::move(stem)) {}

    Json write(const RealMatrix& values);
    Json write(const IndexMatrix& values);
    Json write(const RealVector& values);
    Json write(const IndexList& values);

private:
    Json write_raw(const void* data, std::size_t count, std::string_view dtype, std::vector<std::int64_t> shape);

    std::filesystem::path dir_;
    std::string stem_;
    int counter_ = 0;
};

/// Reads blobs referenced by manifest entries relative to a directory.
/// `manifest` names the file holding the entries, for error messages.
class BlobReader {
public:
    BlobReader(std::filesystem::path dir, std::string manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {}

    RealMatrix real_matrix(const Json& entry) const;
    IndexMatrix index_matrix(const Json& entry) const;
    RealVector real_vector(const Json& entry) const;
    IndexList index_list(const Json& entry) const;

    const std::string& manifest() const { return manifest_; }

private:
    std::vector<std::int64_t> shape_of(const Json& entry, std::string_view dtype, std::size_t rank) const;
    void read_raw(const Json& entry, void* data, std::size_t count) const;

    std::filesystem::path dir_;
    std::string manifest_;
};

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& value);

/// Creates `root` or accepts it when empty; anything else is IoFailure.
void prepare_output_dir(const std::filesystem::path& root);

}  // namespace plaid::detail
