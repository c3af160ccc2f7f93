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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "plaid/dataset.hpp"
#include "plaid/gp.hpp"
#include "plaid/metrics.hpp"
#include "plaid/mmgp.hpp"
#include "plaid/morph.hpp"
#include "plaid/parallel.hpp"
#include "plaid/pod.hpp"
#include "plaid/report.hpp"
#include "plaid/synthgen.hpp"
#include "plaid/transfer.hpp"

namespace py = pybind11;
using namespace plaid;

namespace {

Location location_arg(const std::string& text) {
    const auto loc = parse_location(text);
    if (!loc) throw Error(ErrorCode::InvalidValue, "unknown location " + text);
    return *loc;
}

KernelKind kernel_arg(const std::string& text) {
    const auto kind = parse_kernel_kind(text);
    if (!kind) throw Error(ErrorCode::ConfigInvalid, "unknown kernel " + text);
    return *kind;
}

py::dict score_dict(const ScoreReport& report) {
    py::dict outputs;
    for (const auto& o : report.outputs) outputs[py::str(o.name)] = o.rrmse;
    py::dict d;
    d["outputs"] = outputs;
    d["total_error"] = report.total_error;
    d["n_samples"] = report.n_samples;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mesh datasets, benchmark scoring and the MMGP surrogate";

    py::register_exception<Error>(m, "PlaidError", PyExc_RuntimeError);

    m.def("thread_count", &thread_count);
    m.def("set_thread_count", &set_thread_count, py::arg("n"));

    py::class_<Sample>(m, "Sample")
        .def("mesh_times", &Sample::get_all_mesh_times)
        .def("scalar_names", &Sample::get_scalar_names)
        .def("get_scalar", &Sample::get_scalar, py::arg("name"))
        .def(
            "get_field",
            [](const Sample& s, const std::string& name, std::optional<std::string> base, std::optional<std::string> zone,
               const std::string& location, std::optional<double> time) {
                QuerySelector q;
                q.name = name;
                q.base_name = std::move(base);
                q.zone_name = std::move(zone);
                q.location = location_arg(location);
                q.time = time;
                return s.get_field(q);
            },
            py::arg("name"), py::arg("base") = py::none(), py::arg("zone") = py::none(),
            py::arg("location") = "Vertex", py::arg("time") = py::none())
        .def(
            "field_names",
            [](const Sample& s, std::optional<double> time, std::optional<std::string> base,
               std::optional<std::string> zone, std::optional<std::string> location) {
                std::optional<Location> loc;
                if (location) loc = location_arg(*location);
                return s.get_field_names(time, base, zone, loc);
            },
            py::arg("time") = py::none(), py::arg("base") = py::none(), py::arg("zone") = py::none(),
            py::arg("location") = py::none())
        .def("get_nodes", &Sample::get_nodes, py::arg("base") = py::none(), py::arg("zone") = py::none(),
             py::arg("time") = py::none())
        .def(
            "get_elements",
            [](const Sample& s, std::optional<std::string> base, std::optional<std::string> zone, std::optional<double> time) {
                std::map<std::string, IndexMatrix> out;
                for (auto& [type, conn] : s.get_elements(base, zone, time)) out[std::string(to_string(type))] = std::move(conn);
                return out;
            },
            py::arg("base") = py::none(), py::arg("zone") = py::none(), py::arg("time") = py::none())
        .def("get_nodal_tags", &Sample::get_nodal_tags, py::arg("base") = py::none(), py::arg("zone") = py::none(),
             py::arg("time") = py::none());

    py::class_<Dataset>(m, "Dataset")
        .def("__len__", &Dataset::size)
        .def("sample", &Dataset::sample_at, py::arg("id"), py::return_value_policy::reference_internal)
        .def_property_readonly("infos", [](const Dataset& d) { return d.infos(); })
        .def_property_readonly("splits", [](const Dataset& d) { return d.problem().splits; })
        .def_property_readonly("in_scalars_names", [](const Dataset& d) { return d.problem().in_scalars_names; })
        .def_property_readonly("out_scalars_names", [](const Dataset& d) { return d.problem().out_scalars_names; })
        .def_property_readonly("in_fields_names", [](const Dataset& d) { return d.problem().in_fields_names; })
        .def_property_readonly("out_fields_names", [](const Dataset& d) { return d.problem().out_fields_names; })
        .def_property_readonly("constant_topology", [](const Dataset& d) { return d.problem().constant_topology; })
        .def("hidden_subset",
             [](const Dataset& d, const std::string& subset) {
                 const auto s = parse_subset(subset);
                 if (!s) throw Error(ErrorCode::InvalidValue, "subset must be Public or Private");
                 return d.problem().hidden_subset(*s);
             })
        .def("info", [](const Dataset& d) { return render_info(d, OutputFormat::Text); });

    m.def("load_dataset", &load_dataset, py::arg("path"), py::arg("lazy") = false);
    m.def(
        "save_dataset",
        [](const Dataset& d, const std::filesystem::path& path, bool include_hidden_partition) {
            save_dataset(d, path, SaveOptions{include_hidden_partition});
        },
        py::arg("dataset"), py::arg("path"), py::arg("include_hidden_partition") = true);
    m.def(
        "validate_dataset",
        [](const Dataset& d) {
            const auto report = validate_dataset(d);
            py::list issues;
            for (const auto& i : report.issues) {
                issues.append(py::make_tuple(i.path, std::string(to_string(i.code)), i.message, i.unchecked));
            }
            return py::make_tuple(report.violation_count(), issues);
        },
        py::arg("dataset"));
    m.def("structurally_equal", &structurally_equal);
    m.def("participant_export", &participant_export);

    m.def(
        "generate",
        [](std::int64_t n_samples, std::uint64_t seed, std::optional<std::int64_t> n_train, int resolution_min,
           int resolution_max) {
            SynthConfig c;
            c.n_samples = n_samples;
            c.seed = seed;
            c.n_train = n_train;
            c.resolution_min = resolution_min;
            c.resolution_max = resolution_max;
            return generate(c);
        },
        py::arg("n_samples"), py::arg("seed"), py::arg("n_train") = py::none(), py::arg("resolution_min") = 8,
        py::arg("resolution_max") = 16);

    m.def("rrmse_field",
          [](const std::vector<RealVector>& refs, const std::vector<RealVector>& preds) { return rrmse_field(refs, preds); });
    m.def("rrmse_scalar",
          [](const std::vector<double>& refs, const std::vector<double>& preds) { return rrmse_scalar(refs, preds); });
    m.def(
        "score",
        [](const Dataset& reference, const std::filesystem::path& bundle_dir, bool hidden) -> py::object {
            const auto bundle = load_bundle(bundle_dir);
            if (!hidden) return score_dict(total_error(reference.problem(), reference, bundle));
            const auto [pub, priv] = score_hidden(reference.problem(), reference, bundle);
            return py::make_tuple(score_dict(pub), score_dict(priv));
        },
        py::arg("reference"), py::arg("bundle_dir"), py::arg("hidden") = false);

    m.def(
        "tutte_embed",
        [](RealMatrix nodes, IndexMatrix triangles) {
            auto morphed = tutte_embed(make_surface_mesh(std::move(nodes), std::move(triangles)));
            return py::make_tuple(morphed.positions, morphed.boundary_loop);
        },
        py::arg("nodes"), py::arg("triangles"));
    m.def(
        "unit_disk_mesh",
        [](int rings) {
            auto mesh = unit_disk_mesh(rings);
            return py::make_tuple(mesh.nodes, mesh.triangles);
        },
        py::arg("rings"));
    m.def(
        "interpolate",
        [](const RealMatrix& source, const IndexMatrix& triangles, const RealMatrix& targets, const RealVector& field,
           double snap_tolerance) {
            return apply_transfer(build_transfer(source, triangles, targets, snap_tolerance), field);
        },
        py::arg("source_positions"), py::arg("triangles"), py::arg("targets"), py::arg("field"),
        py::arg("snap_tolerance") = kDefaultSnapTolerance);

    py::class_<PodBasis>(m, "PodBasis")
        .def_readonly("mean", &PodBasis::mean)
        .def_readonly("modes", &PodBasis::modes)
        .def_readonly("singular_values", &PodBasis::singular_values)
        .def_readonly("discarded_energy", &PodBasis::discarded_energy)
        .def("project", [](const PodBasis& b, const RealVector& f) { return pod_project(b, f); })
        .def("reconstruct", [](const PodBasis& b, const RealVector& c) { return pod_reconstruct(b, c); });
    m.def("pod_fit", &pod_fit, py::arg("snapshots"), py::arg("k"));

    py::class_<GpModel>(m, "GpModel")
        .def_property_readonly("variance", [](const GpModel& g) { return g.kernel.variance; })
        .def_property_readonly("lengthscales", [](const GpModel& g) { return g.kernel.lengthscales; })
        .def_readonly("jitter", &GpModel::jitter)
        .def_readonly("log_marginal_likelihood", &GpModel::log_marginal_likelihood)
        .def("predict", [](const GpModel& g, const Eigen::MatrixXd& x) {
            auto p = gp_predict(g, x);
            return py::make_tuple(p.mean, p.variance);
        });
    m.def(
        "gp_fit",
        [](const Eigen::MatrixXd& x, const RealVector& y, const std::string& kernel, double jitter, bool optimize) {
            GpOptions options;
            options.jitter = jitter;
            options.optimize = optimize;
            return gp_fit(x, y, kernel_arg(kernel), options);
        },
        py::arg("x"), py::arg("y"), py::arg("kernel") = "matern52", py::arg("jitter") = 1e-10,
        py::arg("optimize") = true);
    m.def(
        "kernel_eval",
        [](const std::string& kind, double variance, RealVector lengthscales, const RealVector& x, const RealVector& y) {
            return kernel_eval(Kernel{kernel_arg(kind), variance, std::move(lengthscales)}, x, y);
        },
        py::arg("kind"), py::arg("variance"), py::arg("lengthscales"), py::arg("x"), py::arg("y"));

    py::class_<MmgpModel>(m, "MmgpModel")
        .def_property_readonly("gp_count", &MmgpModel::gp_count)
        .def_property_readonly("input_dimension", &MmgpModel::input_dimension)
        .def_property_readonly("config", [](const MmgpModel& mm) { return format_mmgp_config(mm.config); })
        .def(
            "predict",
            [](const MmgpModel& mm, const Sample& s) {
                auto p = mmgp_predict(mm, s);
                return py::make_tuple(p.scalars, p.fields);
            },
            py::arg("sample"))
        .def(
            "predict_split",
            [](const MmgpModel& mm, const Dataset& d, const std::string& split, const std::filesystem::path& out) {
                save_bundle(mmgp_predict_split(mm, d, split), out);
            },
            py::arg("dataset"), py::arg("split"), py::arg("bundle_dir"))
        .def("save", [](const MmgpModel& mm, const std::filesystem::path& dir) { save_mmgp_model(mm, dir); });
    m.def(
        "mmgp_fit",
        [](const Dataset& d, const std::string& config_text) { return mmgp_fit(d, parse_mmgp_config(config_text)); },
        py::arg("dataset"), py::arg("config") = "", py::call_guard<py::gil_scoped_release>());
    m.def("load_mmgp_model", &load_mmgp_model, py::arg("dir"));
}
