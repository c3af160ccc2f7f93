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

#include <string>
#include <utility>

#include "plaid/dataset.hpp"
#include "plaid/metrics.hpp"

namespace plaid {

enum class OutputFormat { Text, Json };

/// Stable-ordered renderings used by the command line tool. Text tables end
/// with a newline; JSON documents are single objects.
std::string render_validation(const ValidationReport& report, OutputFormat format);
std::string render_info(const Dataset& dataset, OutputFormat format);
std::string render_score(const ScoreReport& report, OutputFormat format);
std::string render_hidden_scores(const ScoreReport& public_report, const ScoreReport& private_report,
                                 OutputFormat format);

}  // namespace plaid
