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

// plaid: command line front end over the plaid_core library.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "plaid/dataset.hpp"
#include "plaid/error.hpp"
#include "plaid/metrics.hpp"
#include "plaid/mmgp.hpp"
#include "plaid/parallel.hpp"
#include "plaid/report.hpp"
#include "plaid/synthgen.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_dir(const std::string& path, const char* what) {
    if (!fs::is_directory(path)) throw UsageError(std::string(what) + " is not a directory: " + path);
}

void require_file(const std::string& path, const char* what) {
    if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " is not a file: " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Physics-learning dataset tools: validate, inspect, generate, score, fit, predict, convert"};
    app.require_subcommand(1);

    std::optional<std::size_t> threads;
    std::string format_name = "text";
    app.add_option("--threads", threads, "Worker threads (default: PLAID_THREADS or all cores)")->check(CLI::PositiveNumber);
    app.add_option("--format", format_name, "Output format for validate, info and score")
        ->check(CLI::IsMember({"text", "json"}));

    std::string dataset_dir;
    bool strict = false;
    auto* validate = app.add_subcommand("validate", "Check a dataset directory against the datamodel rules");
    validate->add_option("dataset_dir", dataset_dir)->required();
    validate->add_flag("--strict", strict, "Exit 1 when any violation is found");

    auto* info = app.add_subcommand("info", "Summarise samples, splits and problem names");
    info->add_option("dataset_dir", dataset_dir)->required();

    std::string ref_dir, pred_dir;
    bool hidden = false;
    auto* score = app.add_subcommand("score", "Score a prediction bundle against a reference dataset");
    score->add_option("--ref", ref_dir)->required();
    score->add_option("--pred", pred_dir)->required();
    score->add_flag("--hidden", hidden, "Report public and private subsets separately");

    plaid::SynthConfig synth;
    std::string case_name = "plate2d", out_dir;
    std::optional<std::int64_t> n_train;
    auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
    generate->add_option("--case", case_name)->check(CLI::IsMember({"plate2d"}));
    generate->add_option("--n", synth.n_samples, "Number of samples")->required();
    generate->add_option("--seed", synth.seed)->required();
    generate->add_option("--out", out_dir)->required();
    generate->add_option("--n-train", n_train, "Training split size (default 80%)");
    generate->add_option("--res-min", synth.resolution_min, "Minimum nodes per side");
    generate->add_option("--res-max", synth.resolution_max, "Maximum nodes per side");

    auto* mmgp = app.add_subcommand("mmgp", "Morphing + POD + GP surrogate");
    mmgp->require_subcommand(1);
    std::string train_dir, config_path, model_dir, data_dir, split = "test";
    auto* fit = mmgp->add_subcommand("fit", "Fit a model on the training split");
    fit->add_option("--train", train_dir)->required();
    fit->add_option("--config", config_path, "key = value configuration file")->required();
    fit->add_option("--model", model_dir)->required();
    auto* predict = mmgp->add_subcommand("predict", "Predict a split and write a bundle");
    predict->add_option("--model", model_dir)->required();
    predict->add_option("--data", data_dir)->required();
    predict->add_option("--split", split);
    predict->add_option("--out", out_dir)->required();

    std::string in_dir, mode;
    auto* convert = app.add_subcommand("convert", "Derive a dataset variant");
    convert->add_option("--in", in_dir)->required();
    convert->add_option("--mode", mode)->required()->check(CLI::IsMember({"participant-export"}));
    convert->add_option("--out", out_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const auto format = format_name == "json" ? plaid::OutputFormat::Json : plaid::OutputFormat::Text;
    if (threads) plaid::set_thread_count(*threads);

    try {
        if (*validate) {
            require_dir(dataset_dir, "dataset_dir");
            const auto dataset = plaid::load_dataset(dataset_dir);
            const auto report = plaid::validate_dataset(dataset);
            std::cout << plaid::render_validation(report, format);
            return strict && !report.conformant() ? kExitDomain : 0;
        }
        if (*info) {
            require_dir(dataset_dir, "dataset_dir");
            std::cout << plaid::render_info(plaid::load_dataset(dataset_dir, true), format);
            return 0;
        }
        if (*score) {
            require_dir(ref_dir, "--ref");
            require_dir(pred_dir, "--pred");
            const auto reference = plaid::load_dataset(ref_dir, true);
            const auto bundle = plaid::load_bundle(pred_dir);
            if (hidden) {
                const auto [pub, priv] = plaid::score_hidden(reference.problem(), reference, bundle);
                std::cout << plaid::render_hidden_scores(pub, priv, format);
            } else {
                std::cout << plaid::render_score(plaid::total_error(reference.problem(), reference, bundle), format);
            }
            return 0;
        }
        if (*generate) {
            synth.case_kind = *plaid::parse_synth_case(case_name);
            synth.n_train = n_train;
            plaid::save_dataset(plaid::generate(synth), out_dir);
            std::cout << "wrote " << synth.n_samples << " samples to " << out_dir << '\n';
            return 0;
        }
        if (*fit) {
            require_dir(train_dir, "--train");
            require_file(config_path, "--config");
            const auto config = plaid::load_mmgp_config(config_path);
            const auto dataset = plaid::load_dataset(train_dir, true);
            const auto model = plaid::mmgp_fit(dataset, config);
            plaid::save_mmgp_model(model, model_dir);
            std::cout << "fitted " << model.gp_count() << " Gaussian processes on " << model.input_dimension()
                      << " inputs; model written to " << model_dir << '\n';
            return 0;
        }
        if (*predict) {
            require_dir(model_dir, "--model");
            require_dir(data_dir, "--data");
            const auto model = plaid::load_mmgp_model(model_dir);
            const auto dataset = plaid::load_dataset(data_dir, true);
            const auto bundle = plaid::mmgp_predict_split(model, dataset, split);
            plaid::save_bundle(bundle, out_dir);
            std::cout << "wrote predictions for " << bundle.size() << " samples to " << out_dir << '\n';
            return 0;
        }
        if (*convert) {
            require_dir(in_dir, "--in");
            plaid::save_dataset(plaid::participant_export(plaid::load_dataset(in_dir)), out_dir);
            std::cout << "wrote participant export to " << out_dir << '\n';
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const plaid::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}
