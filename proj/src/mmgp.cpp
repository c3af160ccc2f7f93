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

#include "plaid/mmgp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "array_store.hpp"
#include "plaid/parallel.hpp"

namespace plaid {

namespace fs = std::filesystem;
using detail::Json;

namespace {

constexpr std::string_view kModelFormat = "plaid-mmgp";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(std::size_t line, const std::string& message) {
    throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(line) + ": " + message);
}

std::int64_t config_int(std::string_view value, std::size_t line) {
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) config_error(line, "expected an integer, got '" + std::string(value) + "'");
    return out;
}

double config_double(std::string_view value, std::size_t line) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
        config_error(line, "expected a number, got '" + std::string(value) + "'");
    }
    return out;
}

bool config_bool(std::string_view value, std::size_t line) {
    if (value == "true" || value == "on" || value == "1") return true;
    if (value == "false" || value == "off" || value == "0") return false;
    config_error(line, "expected true or false, got '" + std::string(value) + "'");
}

void check_config(const MmgpConfig& c) {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::ConfigInvalid, m); };
    if (c.shape_modes < 1) fail("shape_modes must be at least 1");
    if (c.field_modes < 1) fail("field_modes must be at least 1");
    if (!(c.jitter > 0.0) || c.jitter > 1e-6) fail("jitter must lie in (0, 1e-6]");
    if (!(c.snap_tolerance >= 0.0)) fail("snap_tolerance must be non-negative");
    if (c.common_mesh_rings < 1) fail("common_mesh_rings must be at least 1");
    if (c.train_split.empty()) fail("train_split is empty");
    if (c.gp_rounds < 0) fail("gp_rounds must be non-negative");
}

GpOptions gp_options(const MmgpConfig& config) {
    GpOptions options;
    options.jitter = config.jitter;
    options.rounds = config.gp_rounds;
    return options;
}

void check_names(const MmgpModel& model, const ProblemDefinition& problem) {
    if (problem.in_scalars_names != model.in_scalars_names || problem.out_scalars_names != model.out_scalars_names ||
        problem.out_fields_names != model.out_fields_names) {
        throw Error(ErrorCode::ConfigInvalid, "problem input/output names differ from the model's");
    }
}

RealVector gp_input_row(const MmgpModel& model, const SampleEmbedding& embedding, const Sample& sample) {
    RealVector row(model.input_dimension());
    const auto k = model.shape_pod.size();
    if (k > 0) row.head(k) = pod_project(model.shape_pod, embedding.shape_snapshot);
    for (std::size_t j = 0; j < model.in_scalars_names.size(); ++j) {
        row[k + static_cast<Eigen::Index>(j)] = sample.get_scalar(model.in_scalars_names[j]);
    }
    return row;
}

RealVector vertex_field(const Sample& sample, const std::string& name) {
    QuerySelector selector;
    selector.name = name;
    return sample.get_field(selector);
}

CoefficientRegressor fit_regressor(const Eigen::MatrixXd& inputs, const RealVector& targets, const MmgpConfig& config) {
    CoefficientRegressor r;
    const double first = targets[0];
    if ((targets.array() == first).all()) {
        r.constant = first;
        return r;
    }
    r.gp = gp_fit(inputs, targets, config.kernel, gp_options(config));
    return r;
}

// ---- persistence ----

Json pod_to_json(const PodBasis& pod, detail::BlobWriter& blobs) {
    return {{"mean", blobs.write(pod.mean)},
            {"modes", blobs.write(RealMatrix(pod.modes))},
            {"singular_values", blobs.write(pod.singular_values)},
            {"discarded_energy", detail::format_double(pod.discarded_energy)}};
}

PodBasis pod_from_json(const Json& j, const detail::BlobReader& blobs) {
    PodBasis pod;
    pod.mean = blobs.real_vector(j.at("mean"));
    pod.modes = blobs.real_matrix(j.at("modes"));
    pod.singular_values = blobs.real_vector(j.at("singular_values"));
    pod.discarded_energy = detail::parse_double(j.at("discarded_energy").get<std::string>(), blobs.manifest(), 0);
    return pod;
}

Json regressor_to_json(const CoefficientRegressor& r, detail::BlobWriter& blobs) {
    if (!r.gp) return {{"constant", detail::format_double(r.constant)}};
    const auto& g = *r.gp;
    return {{"gp",
             {{"kernel", std::string(to_string(g.kernel.kind))},
              {"variance", detail::format_double(g.kernel.variance)},
              {"lengthscales", blobs.write(g.kernel.lengthscales)},
              {"inputs", blobs.write(RealMatrix(g.inputs))},
              {"alpha", blobs.write(g.alpha)},
              {"cholesky", blobs.write(RealMatrix(g.cholesky))},
              {"input_mean", blobs.write(g.input_mean)},
              {"input_scale", blobs.write(g.input_scale)},
              {"output_mean", detail::format_double(g.output_mean)},
              {"output_scale", detail::format_double(g.output_scale)},
              {"jitter", detail::format_double(g.jitter)},
              {"log_marginal_likelihood", detail::format_double(g.log_marginal_likelihood)}}}};
}

CoefficientRegressor regressor_from_json(const Json& j, const detail::BlobReader& blobs) {
    const auto num = [&](const Json& v) { return detail::parse_double(v.get<std::string>(), blobs.manifest(), 0); };
    CoefficientRegressor r;
    if (j.contains("constant")) {
        r.constant = num(j.at("constant"));
        return r;
    }
    const auto& g = j.at("gp");
    GpModel m;
    const auto kind = parse_kernel_kind(g.at("kernel").get<std::string>());
    if (!kind) throw FormatError(blobs.manifest(), 0, "unknown kernel kind");
    m.kernel.kind = *kind;
    m.kernel.variance = num(g.at("variance"));
    m.kernel.lengthscales = blobs.real_vector(g.at("lengthscales"));
    m.inputs = blobs.real_matrix(g.at("inputs"));
    m.alpha = blobs.real_vector(g.at("alpha"));
    m.cholesky = blobs.real_matrix(g.at("cholesky"));
    m.input_mean = blobs.real_vector(g.at("input_mean"));
    m.input_scale = blobs.real_vector(g.at("input_scale"));
    m.output_mean = num(g.at("output_mean"));
    m.output_scale = num(g.at("output_scale"));
    m.jitter = num(g.at("jitter"));
    m.log_marginal_likelihood = num(g.at("log_marginal_likelihood"));
    const auto n = m.inputs.rows();
    if (m.alpha.size() != n || m.cholesky.rows() != n || m.cholesky.cols() != n ||
        m.kernel.lengthscales.size() != m.inputs.cols() || m.input_mean.size() != m.inputs.cols() ||
        m.input_scale.size() != m.inputs.cols()) {
        throw FormatError(blobs.manifest(), 0, "inconsistent GP array shapes");
    }
    r.gp = std::move(m);
    return r;
}

}  // namespace

MmgpConfig parse_mmgp_config(std::string_view text) {
    MmgpConfig c;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) config_error(line_no, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (value.empty()) config_error(line_no, "missing value for " + key);
        if (!seen.insert(key).second) config_error(line_no, "duplicate key " + key);
        if (key == "morphing") {
            c.morphing = config_bool(value, line_no);
        } else if (key == "shape_modes") {
            c.shape_modes = config_int(value, line_no);
        } else if (key == "field_modes") {
            c.field_modes = config_int(value, line_no);
        } else if (key == "kernel") {
            const auto kind = parse_kernel_kind(value);
            if (!kind) config_error(line_no, "unknown kernel '" + std::string(value) + "'");
            c.kernel = *kind;
        } else if (key == "jitter") {
            c.jitter = config_double(value, line_no);
        } else if (key == "snap_tolerance") {
            c.snap_tolerance = config_double(value, line_no);
        } else if (key == "common_mesh_rings") {
            c.common_mesh_rings = static_cast<int>(config_int(value, line_no));
        } else if (key == "train_split") {
            c.train_split = std::string(value);
        } else if (key == "gp_rounds") {
            c.gp_rounds = static_cast<int>(config_int(value, line_no));
        } else {
            config_error(line_no, "unknown key " + key);
        }
    }
    check_config(c);
    return c;
}

MmgpConfig load_mmgp_config(const fs::path& path) { return parse_mmgp_config(detail::read_text_file(path)); }

std::string format_mmgp_config(const MmgpConfig& c) {
    std::ostringstream out;
    out << "morphing = " << (c.morphing ? "true" : "false") << '\n'
        << "shape_modes = " << c.shape_modes << '\n'
        << "field_modes = " << c.field_modes << '\n'
        << "kernel = " << to_string(c.kernel) << '\n'
        << "jitter = " << detail::format_double(c.jitter) << '\n'
        << "snap_tolerance = " << detail::format_double(c.snap_tolerance) << '\n'
        << "common_mesh_rings = " << c.common_mesh_rings << '\n'
        << "train_split = " << c.train_split << '\n'
        << "gp_rounds = " << c.gp_rounds << '\n';
    return out.str();
}

RealVector CoefficientRegressor::predict(const Eigen::MatrixXd& inputs) const {
    if (!gp) return RealVector::Constant(inputs.rows(), constant);
    return gp_predict(*gp, inputs).mean;
}

Eigen::Index MmgpModel::input_dimension() const {
    return shape_pod.size() + static_cast<Eigen::Index>(in_scalars_names.size());
}

std::size_t MmgpModel::gp_count() const {
    std::size_t n = 0;
    for (const auto& f : fields) {
        for (const auto& r : f.regressors) n += r.gp ? 1 : 0;
    }
    for (const auto& [_, r] : scalars) n += r.gp ? 1 : 0;
    return n;
}

SurfaceMesh2D sample_surface_mesh(const Sample& sample) {
    const auto tree = sample.get_mesh(std::nullopt, true);
    const auto [base, zone] = resolve_zone(*tree, std::nullopt, std::nullopt);
    if (base->cell_dim != 2) throw Error(ErrorCode::InvalidMesh, "expected a 2D zone, base " + base->name + " has cell dimension " + std::to_string(base->cell_dim));
    return surface_mesh_from_zone(*zone);
}

SampleEmbedding embed_sample(const MmgpConfig& config, const SurfaceMesh2D& common_mesh, const Sample& sample) {
    const auto mesh = sample_surface_mesh(sample);
    SampleEmbedding e;
    const auto n_common = common_mesh.vertex_count();
    e.shape_snapshot.resize(2 * n_common);
    if (!config.morphing) {
        if (mesh.vertex_count() != n_common) {
            throw Error(ErrorCode::ShapeMismatch, "sample has " + std::to_string(mesh.vertex_count()) +
                                                      " vertices, model without morphing expects " +
                                                      std::to_string(n_common));
        }
        e.frame_positions = mesh.nodes;
        e.triangles = mesh.triangles;
        e.shape_snapshot.head(n_common) = mesh.nodes.col(0);
        e.shape_snapshot.tail(n_common) = mesh.nodes.col(1);
        return e;
    }
    auto morphed = tutte_embed(mesh);
    e.to_common = build_transfer(morphed.positions, morphed.triangles, common_mesh.nodes, config.snap_tolerance);
    e.shape_snapshot.head(n_common) = apply_transfer(*e.to_common, mesh.nodes.col(0));
    e.shape_snapshot.tail(n_common) = apply_transfer(*e.to_common, mesh.nodes.col(1));
    e.frame_positions = std::move(morphed.positions);
    e.triangles = std::move(morphed.triangles);
    return e;
}

RealVector field_on_common(const SampleEmbedding& embedding, const RealVector& field) {
    if (field.size() != embedding.frame_positions.rows()) {
        throw Error(ErrorCode::ShapeMismatch, "field length " + std::to_string(field.size()) + " differs from vertex count " +
                                                  std::to_string(embedding.frame_positions.rows()));
    }
    return embedding.to_common ? apply_transfer(*embedding.to_common, field) : field;
}

MmgpModel mmgp_fit(const Dataset& dataset, const MmgpConfig& config) {
    check_config(config);
    const auto& problem = dataset.problem();
    const auto train = problem.get_split(config.train_split);
    if (train.empty()) throw Error(ErrorCode::ConfigInvalid, "training split " + config.train_split + " is empty");
    for (const auto id : train) {
        if (id < 0 || id >= static_cast<std::int64_t>(dataset.size())) {
            throw Error(ErrorCode::IdOutOfRange, "training id " + std::to_string(id) + " out of range");
        }
    }

    MmgpModel model;
    model.config = config;
    model.in_scalars_names = problem.in_scalars_names;
    model.out_scalars_names = problem.out_scalars_names;
    model.out_fields_names = problem.out_fields_names;
    model.common_mesh = config.morphing ? unit_disk_mesh(config.common_mesh_rings)
                                        : sample_surface_mesh(dataset.sample_at(train.front()));

    const auto s = static_cast<Eigen::Index>(train.size());
    const auto n_common = model.common_mesh.vertex_count();
    const auto n_fields = model.out_fields_names.size();
    std::vector<SampleEmbedding> embeddings(train.size());
    std::vector<Eigen::MatrixXd> field_snapshots(n_fields, Eigen::MatrixXd(s, n_common));
    Eigen::MatrixXd scalar_inputs(s, static_cast<Eigen::Index>(model.in_scalars_names.size()));
    Eigen::MatrixXd scalar_outputs(s, static_cast<Eigen::Index>(model.out_scalars_names.size()));
    parallel_for(train.size(), [&](std::size_t i) {
        const auto& sample = dataset.sample_at(train[i]);
        const auto row = static_cast<Eigen::Index>(i);
        embeddings[i] = embed_sample(config, model.common_mesh, sample);
        for (std::size_t f = 0; f < n_fields; ++f) {
            field_snapshots[f].row(row) =
                field_on_common(embeddings[i], vertex_field(sample, model.out_fields_names[f])).transpose();
        }
        for (std::size_t j = 0; j < model.in_scalars_names.size(); ++j) {
            scalar_inputs(row, static_cast<Eigen::Index>(j)) = sample.get_scalar(model.in_scalars_names[j]);
        }
        for (std::size_t j = 0; j < model.out_scalars_names.size(); ++j) {
            scalar_outputs(row, static_cast<Eigen::Index>(j)) = sample.get_scalar(model.out_scalars_names[j]);
        }
    });

    Eigen::MatrixXd shape_snapshots(s, 2 * n_common);
    for (Eigen::Index i = 0; i < s; ++i) shape_snapshots.row(i) = embeddings[static_cast<std::size_t>(i)].shape_snapshot.transpose();
    model.shape_pod = pod_fit_up_to(shape_snapshots, config.shape_modes);
    const auto k_shape = model.shape_pod.size();

    Eigen::MatrixXd inputs(s, model.input_dimension());
    for (Eigen::Index i = 0; i < s; ++i) {
        if (k_shape > 0) inputs.row(i).head(k_shape) = pod_project(model.shape_pod, shape_snapshots.row(i).transpose()).transpose();
    }
    inputs.rightCols(scalar_inputs.cols()) = scalar_inputs;

    model.fields.resize(n_fields);
    std::vector<Eigen::MatrixXd> field_targets(n_fields);
    for (std::size_t f = 0; f < n_fields; ++f) {
        auto& fm = model.fields[f];
        fm.name = model.out_fields_names[f];
        fm.pod = pod_fit_up_to(field_snapshots[f], config.field_modes);
        field_targets[f].resize(s, fm.pod.size());
        for (Eigen::Index i = 0; i < s; ++i) {
            if (fm.pod.size() > 0) field_targets[f].row(i) = pod_project(fm.pod, field_snapshots[f].row(i).transpose()).transpose();
        }
        fm.regressors.resize(static_cast<std::size_t>(fm.pod.size()));
    }

    struct Job {
        std::size_t field;  // n_fields for a scalar output
        Eigen::Index column;
    };
    std::vector<Job> jobs;
    for (std::size_t f = 0; f < n_fields; ++f) {
        for (Eigen::Index c = 0; c < model.fields[f].pod.size(); ++c) jobs.push_back({f, c});
    }
    for (Eigen::Index c = 0; c < scalar_outputs.cols(); ++c) jobs.push_back({n_fields, c});
    std::vector<CoefficientRegressor> fitted(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t j) {
        const auto& job = jobs[j];
        const RealVector targets =
            job.field < n_fields ? RealVector(field_targets[job.field].col(job.column)) : RealVector(scalar_outputs.col(job.column));
        fitted[j] = fit_regressor(inputs, targets, config);
    });
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const auto& job = jobs[j];
        if (job.field < n_fields) {
            model.fields[job.field].regressors[static_cast<std::size_t>(job.column)] = std::move(fitted[j]);
        } else {
            model.scalars[model.out_scalars_names[static_cast<std::size_t>(job.column)]] = std::move(fitted[j]);
        }
    }
    return model;
}

namespace {

CommonPrediction predict_embedded(const MmgpModel& model, const SampleEmbedding& embedding, const Sample& sample) {
    CommonPrediction out;
    out.inputs = gp_input_row(model, embedding, sample);
    const Eigen::MatrixXd query = out.inputs.transpose();
    for (const auto& fm : model.fields) {
        RealVector coeffs(fm.pod.size());
        for (std::size_t c = 0; c < fm.regressors.size(); ++c) coeffs[static_cast<Eigen::Index>(c)] = fm.regressors[c].predict(query)[0];
        out.fields[fm.name] = pod_reconstruct(fm.pod, coeffs);
        out.coefficients[fm.name] = std::move(coeffs);
    }
    for (const auto& [name, r] : model.scalars) out.scalars[name] = r.predict(query)[0];
    return out;
}

}  // namespace

CommonPrediction mmgp_predict_common(const MmgpModel& model, const Sample& sample) {
    return predict_embedded(model, embed_sample(model.config, model.common_mesh, sample), sample);
}

SamplePrediction mmgp_predict(const MmgpModel& model, const Sample& sample) {
    const auto embedding = embed_sample(model.config, model.common_mesh, sample);
    auto common = predict_embedded(model, embedding, sample);
    SamplePrediction out;
    out.scalars = std::move(common.scalars);
    if (!model.config.morphing) {
        out.fields = std::move(common.fields);
        return out;
    }
    const auto back = build_transfer(model.common_mesh.nodes, model.common_mesh.triangles, embedding.frame_positions,
                                     model.config.snap_tolerance);
    for (auto& [name, field] : common.fields) out.fields[name] = apply_transfer(back, field);
    return out;
}

PredictionBundle mmgp_predict_split(const MmgpModel& model, const Dataset& dataset, const std::string& split) {
    check_names(model, dataset.problem());
    const auto& ids = dataset.get_split(split);
    for (const auto id : ids) {
        if (id < 0 || id >= static_cast<std::int64_t>(dataset.size())) {
            throw Error(ErrorCode::IdOutOfRange, "split id " + std::to_string(id) + " out of range");
        }
    }
    std::vector<SamplePrediction> predictions(ids.size());
    parallel_for(ids.size(), [&](std::size_t i) { predictions[i] = mmgp_predict(model, dataset.sample_at(ids[i])); });
    PredictionBundle bundle;
    for (std::size_t i = 0; i < ids.size(); ++i) bundle.emplace(ids[i], std::move(predictions[i]));
    return bundle;
}

void save_mmgp_model(const MmgpModel& model, const fs::path& dir) {
    detail::prepare_output_dir(dir);
    detail::BlobWriter blobs(dir, "model");
    Json fields = Json::array();
    for (const auto& fm : model.fields) {
        Json regs = Json::array();
        for (const auto& r : fm.regressors) regs.push_back(regressor_to_json(r, blobs));
        fields.push_back({{"name", fm.name}, {"pod", pod_to_json(fm.pod, blobs)}, {"regressors", regs}});
    }
    Json scalars = Json::array();
    for (const auto& [name, r] : model.scalars) scalars.push_back({{"name", name}, {"regressor", regressor_to_json(r, blobs)}});
    const Json manifest = {
        {"format", kModelFormat},
        {"format_version", kFormatVersion},
        {"config", format_mmgp_config(model.config)},
        {"in_scalars", model.in_scalars_names},
        {"out_scalars", model.out_scalars_names},
        {"out_fields", model.out_fields_names},
        {"common_mesh", {{"nodes", blobs.write(model.common_mesh.nodes)}, {"triangles", blobs.write(model.common_mesh.triangles)}}},
        {"shape_pod", pod_to_json(model.shape_pod, blobs)},
        {"fields", fields},
        {"scalars", scalars},
    };
    detail::write_json_file(dir / "model.manifest", manifest);
}

MmgpModel load_mmgp_model(const fs::path& dir) {
    const auto path = dir / "model.manifest";
    if (!fs::exists(path)) throw Error(ErrorCode::IoFailure, "no model manifest at " + path.string());
    const auto doc = detail::read_json_file(path);
    const detail::BlobReader blobs(dir, path.string());
    try {
        if (doc.at("format").get<std::string>() != kModelFormat) throw FormatError(path.string(), 0, "not an MMGP model manifest");
        if (doc.at("format_version").get<int>() != kFormatVersion) {
            throw Error(ErrorCode::VersionMismatch, path.string() + " has format_version " +
                                                        std::to_string(doc.at("format_version").get<int>()));
        }
        MmgpModel model;
        model.config = parse_mmgp_config(doc.at("config").get<std::string>());
        model.in_scalars_names = doc.at("in_scalars").get<std::vector<std::string>>();
        model.out_scalars_names = doc.at("out_scalars").get<std::vector<std::string>>();
        model.out_fields_names = doc.at("out_fields").get<std::vector<std::string>>();
        model.common_mesh = make_surface_mesh(blobs.real_matrix(doc.at("common_mesh").at("nodes")),
                                              blobs.index_matrix(doc.at("common_mesh").at("triangles")));
        model.shape_pod = pod_from_json(doc.at("shape_pod"), blobs);
        for (const auto& f : doc.at("fields")) {
            MmgpFieldModel fm;
            fm.name = f.at("name").get<std::string>();
            fm.pod = pod_from_json(f.at("pod"), blobs);
            for (const auto& r : f.at("regressors")) fm.regressors.push_back(regressor_from_json(r, blobs));
            if (static_cast<Eigen::Index>(fm.regressors.size()) != fm.pod.size()) {
                throw FormatError(path.string(), 0, "field " + fm.name + ": regressor count differs from mode count");
            }
            model.fields.push_back(std::move(fm));
        }
        for (const auto& sc : doc.at("scalars")) {
            model.scalars[sc.at("name").get<std::string>()] = regressor_from_json(sc.at("regressor"), blobs);
        }
        return model;
    } catch (const Json::exception& e) {
        throw FormatError(path.string(), 0, std::string("malformed model manifest: ") + e.what());
    }
}

}  // namespace plaid
