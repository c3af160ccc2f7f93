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

#include "plaid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "array_store.hpp"
#include "plaid/parallel.hpp"

namespace plaid {

namespace fs = std::filesystem;
using detail::Json;

bool operator==(const SamplePrediction& a, const SamplePrediction& b) {
    if (a.fields.size() != b.fields.size() || a.scalars.size() != b.scalars.size()) return false;
    for (auto ia = a.fields.begin(), ib = b.fields.begin(); ia != a.fields.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !bitwise_equal(ia->second, ib->second)) return false;
    }
    for (auto ia = a.scalars.begin(), ib = b.scalars.begin(); ia != a.scalars.end(); ++ia, ++ib) {
        if (ia->first != ib->first || std::memcmp(&ia->second, &ib->second, sizeof(double)) != 0) return false;
    }
    return true;
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const auto half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double rrmse_field(std::span<const RealVector> refs, std::span<const RealVector> preds) {
    if (refs.size() != preds.size()) {
        throw Error(ErrorCode::ShapeMismatch, std::to_string(refs.size()) + " references vs " +
                                                  std::to_string(preds.size()) + " predictions");
    }
    if (refs.empty()) throw Error(ErrorCode::ShapeMismatch, "no samples to score");
    std::vector<double> terms(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const auto& ref = refs[i];
        const auto& pred = preds[i];
        if (ref.size() != pred.size() || ref.size() == 0) {
            throw Error(ErrorCode::ShapeMismatch, "sample " + std::to_string(i) + ": reference length " +
                                                      std::to_string(ref.size()) + ", prediction length " +
                                                      std::to_string(pred.size()));
        }
        const double sup = ref.cwiseAbs().maxCoeff();
        if (!(sup >= kDegenerateReference)) {
            throw Error(ErrorCode::DegenerateReference, "sample " + std::to_string(i) + " has a vanishing reference");
        }
        std::vector<double> squares(static_cast<std::size_t>(ref.size()));
        for (Eigen::Index j = 0; j < ref.size(); ++j) {
            const double d = ref[j] - pred[j];
            squares[static_cast<std::size_t>(j)] = d * d;
        }
        terms[i] = pairwise_sum(squares) / static_cast<double>(ref.size()) / (sup * sup);
    }
    return std::sqrt(pairwise_sum(terms) / static_cast<double>(terms.size()));
}

double rrmse_scalar(std::span<const double> refs, std::span<const double> preds) {
    if (refs.size() != preds.size()) {
        throw Error(ErrorCode::ShapeMismatch, std::to_string(refs.size()) + " references vs " +
                                                  std::to_string(preds.size()) + " predictions");
    }
    if (refs.empty()) throw Error(ErrorCode::ShapeMismatch, "no samples to score");
    std::vector<double> terms(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (!(std::abs(refs[i]) >= kDegenerateReference)) {
            throw Error(ErrorCode::DegenerateReference, "sample " + std::to_string(i) + " has a vanishing reference");
        }
        const double d = refs[i] - preds[i];
        terms[i] = d * d / (refs[i] * refs[i]);
    }
    return std::sqrt(pairwise_sum(terms) / static_cast<double>(terms.size()));
}

RealVector reference_field(const Sample& sample, const std::string& name) {
    const auto tree = sample.get_mesh(std::nullopt, true);
    const FieldArray* found = nullptr;
    for (const auto& base : tree->bases()) {
        for (const auto& zone : base.zones) {
            for (const auto& field : zone.fields) {
                if (field.name != name) continue;
                if (found) throw Error(ErrorCode::AmbiguousQuery, "several fields named " + name);
                found = &field;
            }
        }
    }
    if (!found) throw Error(ErrorCode::FieldNotFound, "reference has no field named " + name);
    return found->values;
}

ScoreReport score_subset(const ProblemDefinition& problem, const Dataset& reference,
                         const PredictionBundle& bundle, const IndexList& ids) {
    std::vector<const SamplePrediction*> predictions;
    for (auto id : ids) {
        const auto it = bundle.find(id);
        if (it == bundle.end()) throw Error(ErrorCode::MissingOutput, "no prediction for sample " + std::to_string(id));
        predictions.push_back(&it->second);
    }

    auto fields = problem.out_fields_names;
    auto scalars = problem.out_scalars_names;
    std::sort(fields.begin(), fields.end());
    std::sort(scalars.begin(), scalars.end());

    ScoreReport report;
    report.n_samples = ids.size();
    report.outputs.resize(fields.size() + scalars.size());

    // Presence is checked up front so MissingOutput wins over numeric errors.
    for (std::size_t k = 0; k < ids.size(); ++k) {
        for (const auto& name : fields) {
            if (!predictions[k]->fields.count(name)) {
                throw Error(ErrorCode::MissingOutput, "field " + name + " missing for sample " + std::to_string(ids[k]));
            }
        }
        for (const auto& name : scalars) {
            if (!predictions[k]->scalars.count(name)) {
                throw Error(ErrorCode::MissingOutput, "scalar " + name + " missing for sample " + std::to_string(ids[k]));
            }
        }
    }

    parallel_for(report.outputs.size(), [&](std::size_t o) {
        auto& out = report.outputs[o];
        if (o < fields.size()) {
            out.name = fields[o];
            out.kind = OutputKind::Field;
            std::vector<RealVector> refs;
            std::vector<RealVector> preds;
            for (std::size_t k = 0; k < ids.size(); ++k) {
                refs.push_back(reference_field(reference.sample_at(ids[k]), out.name));
                preds.push_back(predictions[k]->fields.at(out.name));
            }
            out.rrmse = rrmse_field(refs, preds);
        } else {
            out.name = scalars[o - fields.size()];
            out.kind = OutputKind::Scalar;
            std::vector<double> refs;
            std::vector<double> preds;
            for (std::size_t k = 0; k < ids.size(); ++k) {
                refs.push_back(reference.sample_at(ids[k]).get_scalar(out.name));
                preds.push_back(predictions[k]->scalars.at(out.name));
            }
            out.rrmse = rrmse_scalar(refs, preds);
        }
    });

    std::vector<double> values;
    for (const auto& out : report.outputs) values.push_back(out.rrmse);
    report.total_error = values.empty() ? 0.0 : pairwise_sum(values) / static_cast<double>(values.size());
    return report;
}

ScoreReport total_error(const ProblemDefinition& problem, const Dataset& reference, const PredictionBundle& bundle) {
    return score_subset(problem, reference, bundle, problem.get_split("test"));
}

std::pair<ScoreReport, ScoreReport> score_hidden(const ProblemDefinition& problem, const Dataset& reference,
                                                 const PredictionBundle& bundle) {
    const auto public_ids = problem.hidden_subset(Subset::Public);
    const auto private_ids = problem.hidden_subset(Subset::Private);
    return {score_subset(problem, reference, bundle, public_ids),
            score_subset(problem, reference, bundle, private_ids)};
}

void save_bundle(const PredictionBundle& bundle, const fs::path& dir) {
    detail::prepare_output_dir(dir);
    Json samples = Json::array();
    for (const auto& [id, prediction] : bundle) {
        detail::BlobWriter blobs(dir, "pred_" + detail::padded_id(id));
        Json fields = Json::object();
        for (const auto& [name, values] : prediction.fields) fields[name] = blobs.write(values);
        std::vector<std::string> names;
        RealVector values(static_cast<Eigen::Index>(prediction.scalars.size()));
        Eigen::Index k = 0;
        for (const auto& [name, value] : prediction.scalars) {
            names.push_back(name);
            values[k++] = value;
        }
        samples.push_back({{"id", id}, {"fields", std::move(fields)},
                           {"scalar_names", names}, {"scalar_values", blobs.write(values)}});
    }
    detail::write_json_file(dir / "bundle.manifest",
                            Json{{"format", "plaid-bundle"}, {"format_version", kFormatVersion}, {"samples", samples}});
}

PredictionBundle load_bundle(const fs::path& dir) {
    const auto path = dir / "bundle.manifest";
    const auto doc = detail::read_json_file(path);
    detail::BlobReader blobs(dir, path.string());
    PredictionBundle bundle;
    try {
        if (doc.value("format", std::string()) != "plaid-bundle") throw FormatError(path.string(), 0, "not a prediction bundle");
        if (doc.at("format_version").get<int>() != kFormatVersion) {
            throw Error(ErrorCode::VersionMismatch, path.string() + " has an unsupported format_version");
        }
        for (const auto& s : doc.at("samples")) {
            SamplePrediction prediction;
            for (const auto& [name, entry] : s.at("fields").items()) prediction.fields[name] = blobs.real_vector(entry);
            const auto names = s.at("scalar_names").get<std::vector<std::string>>();
            const auto values = blobs.real_vector(s.at("scalar_values"));
            if (static_cast<Eigen::Index>(names.size()) != values.size()) {
                throw FormatError(path.string(), 0, "scalar names and values differ in length");
            }
            for (std::size_t k = 0; k < names.size(); ++k) prediction.scalars[names[k]] = values[static_cast<Eigen::Index>(k)];
            bundle[s.at("id").get<std::int64_t>()] = std::move(prediction);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string(), 0, e.what());
    }
    return bundle;
}

}  // namespace plaid
