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

#include "array_store.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace plaid::detail {

namespace fs = std::filesystem;

namespace {

template <typename T>
void to_little_endian(T* data, std::size_t count) {
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < count; ++i) {
            auto* bytes = reinterpret_cast<unsigned char*>(data + i);
            std::reverse(bytes, bytes + sizeof(T));
        }
    } else {
        (void)data;
        (void)count;
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

double parse_double(std::string_view text, const std::string& path, std::uint64_t offset) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto result = std::from_chars(text.data(), end, value);
    if (result.ec != std::errc() || result.ptr != end || text.empty()) {
        throw FormatError(path, offset, "expected a real number, got '" + std::string(text) + "'");
    }
    return value;
}

std::int64_t parse_int(std::string_view text, const std::string& path, std::uint64_t offset) {
    std::int64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto result = std::from_chars(text.data(), end, value);
    if (result.ec != std::errc() || result.ptr != end || text.empty()) {
        throw FormatError(path, offset, "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

std::string padded_id(std::int64_t id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%09lld", static_cast<long long>(id));
    return buf;
}

void write_text_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "write failed on " + path.string());
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path.string(), 0, "missing or unreadable file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<TextLine> split_lines(std::string_view content) {
    std::vector<TextLine> lines;
    std::size_t start = 0;
    while (start < content.size()) {
        const auto end = content.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back({content.substr(start), start});
            break;
        }
        lines.push_back({content.substr(start, end - start), start});
        start = end + 1;
    }
    return lines;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto end = line.find(',', start);
        if (end == std::string_view::npos) {
            parts.push_back(line.substr(start));
            return parts;
        }
        parts.push_back(line.substr(start, end - start));
        start = end + 1;
    }
}

Json BlobWriter::write_raw(const void* data, std::size_t count, std::string_view dtype,
                           std::vector<std::int64_t> shape) {
    const std::string name = stem_ + "." + std::to_string(counter_++) + ".blob";
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    if (count > 0) {
        if constexpr (std::endian::native == std::endian::little) {
            out.write(static_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
        } else {
            std::vector<unsigned char> copy(count * 8);
            std::memcpy(copy.data(), data, copy.size());
            to_little_endian(reinterpret_cast<std::uint64_t*>(copy.data()), count);
            out.write(reinterpret_cast<const char*>(copy.data()), static_cast<std::streamsize>(copy.size()));
        }
    }
    if (!out) throw Error(ErrorCode::IoFailure, "write failed on " + path.string());
    return Json{{"blob", name}, {"dtype", std::string(dtype)}, {"shape", shape}};
}

Json BlobWriter::write(const RealMatrix& values) {
    return write_raw(values.data(), static_cast<std::size_t>(values.size()), "float64", {values.rows(), values.cols()});
}

Json BlobWriter::write(const IndexMatrix& values) {
    return write_raw(values.data(), static_cast<std::size_t>(values.size()), "int64", {values.rows(), values.cols()});
}

Json BlobWriter::write(const RealVector& values) {
    return write_raw(values.data(), static_cast<std::size_t>(values.size()), "float64", {values.size()});
}

Json BlobWriter::write(const IndexList& values) {
    return write_raw(values.data(), values.size(), "int64", {static_cast<std::int64_t>(values.size())});
}

std::vector<std::int64_t> BlobReader::shape_of(const Json& entry, std::string_view dtype, std::size_t rank) const {
    if (!entry.is_object() || !entry.contains("blob") || !entry.contains("dtype") || !entry.contains("shape")) {
        throw FormatError(manifest_, 0, "array entry needs blob, dtype and shape");
    }
    if (entry.at("dtype").get<std::string>() != dtype) {
        throw FormatError(manifest_, 0,
                          "array " + entry.at("blob").get<std::string>() + " has dtype " +
                              entry.at("dtype").get<std::string>() + ", expected " + std::string(dtype));
    }
    auto shape = entry.at("shape").get<std::vector<std::int64_t>>();
    if (shape.size() != rank) throw FormatError(manifest_, 0, "array rank mismatch");
    for (auto s : shape) {
        if (s < 0) throw FormatError(manifest_, 0, "negative array extent");
    }
    return shape;
}

void BlobReader::read_raw(const Json& entry, void* data, std::size_t count) const {
    const auto name = entry.at("blob").get<std::string>();
    if (name.find('/') != std::string::npos || name.find('\\') != std::string::npos) {
        throw FormatError(manifest_, 0, "blob names must be plain file names");
    }
    const auto path = dir_ / name;
    std::error_code ec;
    const auto size = fs::file_size(path, ec);
    if (ec) throw FormatError(path.string(), 0, "missing blob file");
    const std::uint64_t expected = count * 8;
    if (size < expected) {
        throw FormatError(path.string(), size,
                          "truncated blob: " + std::to_string(size) + " of " + std::to_string(expected) + " bytes");
    }
    if (size > expected) {
        throw FormatError(path.string(), expected, "blob is longer than its declared shape");
    }
    if (count == 0) return;
    std::ifstream in(path, std::ios::binary);
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(expected));
    if (!in) throw FormatError(path.string(), static_cast<std::uint64_t>(std::max<std::streamsize>(in.gcount(), 0)), "short read");
    to_little_endian(static_cast<std::uint64_t*>(data), count);
}

RealMatrix BlobReader::real_matrix(const Json& entry) const {
    const auto shape = shape_of(entry, "float64", 2);
    RealMatrix out(shape[0], shape[1]);
    read_raw(entry, out.data(), static_cast<std::size_t>(out.size()));
    return out;
}

IndexMatrix BlobReader::index_matrix(const Json& entry) const {
    const auto shape = shape_of(entry, "int64", 2);
    IndexMatrix out(shape[0], shape[1]);
    read_raw(entry, out.data(), static_cast<std::size_t>(out.size()));
    return out;
}

RealVector BlobReader::real_vector(const Json& entry) const {
    const auto shape = shape_of(entry, "float64", 1);
    RealVector out(shape[0]);
    read_raw(entry, out.data(), static_cast<std::size_t>(out.size()));
    return out;
}

IndexList BlobReader::index_list(const Json& entry) const {
    const auto shape = shape_of(entry, "int64", 1);
    IndexList out(static_cast<std::size_t>(shape[0]));
    read_raw(entry, out.data(), out.size());
    return out;
}

Json read_json_file(const fs::path& path) {
    const auto text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string(), e.byte, e.what());
    }
}

void write_json_file(const fs::path& path, const Json& value) { write_text_file(path, value.dump(1) + "\n"); }

void prepare_output_dir(const fs::path& root) {
    std::error_code ec;
    if (fs::exists(root, ec)) {
        if (!fs::is_directory(root, ec)) throw Error(ErrorCode::IoFailure, root.string() + " is not a directory");
        if (!fs::is_empty(root, ec)) throw Error(ErrorCode::IoFailure, root.string() + " is not empty");
        return;
    }
    fs::create_directories(root, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + root.string() + ": " + ec.message());
}

}  // namespace plaid::detail
