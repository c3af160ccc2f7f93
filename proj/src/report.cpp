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

#include "plaid/report.hpp"

#include <algorithm>
#include <sstream>

#include "array_store.hpp"

namespace plaid {

namespace {

using detail::Json;

std::string number(double value) {
    auto text = detail::format_double(value);
    if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
    return text;
}

std::string join(const std::vector<std::string>& names) {
    if (names.empty()) return "(none)";
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out;
}

std::vector<std::string> sorted(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    return names;
}

std::string_view kind_name(OutputKind kind) { return kind == OutputKind::Field ? "field" : "scalar"; }

Json score_json(const ScoreReport& report) {
    Json outputs = Json::array();
    for (const auto& o : report.outputs) {
        outputs.push_back({{"name", o.name}, {"kind", kind_name(o.kind)}, {"rrmse", o.rrmse}});
    }
    return {{"outputs", outputs}, {"total_error", report.total_error}, {"n_samples", report.n_samples}};
}

void score_table(std::ostringstream& out, const ScoreReport& report) {
    std::size_t width = std::string_view("total_error").size();
    for (const auto& o : report.outputs) width = std::max(width, o.name.size());
    auto pad = [&](const std::string& s) { return s + std::string(width + 2 - s.size(), ' '); };
    out << pad("output") << "kind    rrmse\n";
    for (const auto& o : report.outputs) {
        out << pad(o.name) << kind_name(o.kind) << std::string(8 - kind_name(o.kind).size(), ' ') << number(o.rrmse) << '\n';
    }
    out << pad("total_error") << "        " << number(report.total_error) << '\n';
    out << pad("samples") << "        " << report.n_samples << '\n';
}

}  // namespace

std::string render_validation(const ValidationReport& report, OutputFormat format) {
    const auto violations = report.violation_count();
    if (format == OutputFormat::Json) {
        Json issues = Json::array();
        for (const auto& i : report.issues) {
            issues.push_back({{"path", i.path},
                              {"code", std::string(to_string(i.code))},
                              {"message", i.message},
                              {"unchecked", i.unchecked}});
        }
        return Json{{"violations", violations}, {"issues", issues}}.dump(1) + "\n";
    }
    std::ostringstream out;
    for (const auto& i : report.issues) {
        out << (i.unchecked ? "unchecked " : "violation ") << to_string(i.code) << ' ' << i.path << ": " << i.message << '\n';
    }
    out << violations << (violations == 1 ? " violation\n" : " violations\n");
    return out.str();
}

std::string render_info(const Dataset& dataset, OutputFormat format) {
    const auto& problem = dataset.problem();
    if (format == OutputFormat::Json) {
        Json splits = Json::object();
        for (const auto& [name, ids] : problem.splits) splits[name] = ids.size();
        Json doc = {{"samples", dataset.size()},
                    {"splits", splits},
                    {"in_scalars", sorted(problem.in_scalars_names)},
                    {"out_scalars", sorted(problem.out_scalars_names)},
                    {"in_fields", sorted(problem.in_fields_names)},
                    {"out_fields", sorted(problem.out_fields_names)},
                    {"infos", dataset.infos()}};
        doc["constant_topology"] = problem.constant_topology ? Json(*problem.constant_topology) : Json(nullptr);
        if (problem.hidden_partition) {
            doc["hidden_partition"] = {{"public", problem.hidden_subset(Subset::Public).size()},
                                       {"private", problem.hidden_subset(Subset::Private).size()}};
        } else {
            doc["hidden_partition"] = nullptr;
        }
        return doc.dump(1) + "\n";
    }
    std::ostringstream out;
    out << "samples: " << dataset.size() << '\n';
    if (problem.splits.empty()) {
        out << "warning: no splits\n";
    } else {
        std::size_t width = 0;
        for (const auto& [name, _] : problem.splits) width = std::max(width, name.size());
        out << "splits:\n";
        for (const auto& [name, ids] : problem.splits) {
            out << "  " << name << std::string(width + 2 - name.size(), ' ') << ids.size() << '\n';
        }
    }
    out << "in_scalars: " << join(sorted(problem.in_scalars_names)) << '\n'
        << "out_scalars: " << join(sorted(problem.out_scalars_names)) << '\n'
        << "in_fields: " << join(sorted(problem.in_fields_names)) << '\n'
        << "out_fields: " << join(sorted(problem.out_fields_names)) << '\n';
    if (problem.constant_topology) out << "constant_topology: " << (*problem.constant_topology ? "true" : "false") << '\n';
    if (problem.hidden_partition) {
        out << "hidden_partition: public " << problem.hidden_subset(Subset::Public).size() << ", private "
            << problem.hidden_subset(Subset::Private).size() << '\n';
    }
    return out.str();
}

std::string render_score(const ScoreReport& report, OutputFormat format) {
    if (format == OutputFormat::Json) return score_json(report).dump(1) + "\n";
    std::ostringstream out;
    score_table(out, report);
    return out.str();
}

std::string render_hidden_scores(const ScoreReport& public_report, const ScoreReport& private_report,
                                 OutputFormat format) {
    if (format == OutputFormat::Json) {
        return Json{{"public", score_json(public_report)}, {"private", score_json(private_report)}}.dump(1) + "\n";
    }
    std::ostringstream out;
    out << "[public]\n";
    score_table(out, public_report);
    out << "[private]\n";
    score_table(out, private_report);
    out << "public total_error: " << number(public_report.total_error) << '\n'
        << "private total_error: " << number(private_report.total_error) << '\n';
    return out.str();
}

}  // namespace plaid
