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

#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "plaid/mesh_tree.hpp"

namespace plaid {

enum class KernelKind { Matern52, RBF };

std::string_view to_string(KernelKind kind);
std::optional<KernelKind> parse_kernel_kind(std::string_view text);

/// Stationary kernel with one lengthscale per input dimension.
struct Kernel {
    KernelKind kind = KernelKind::Matern52;
    double variance = 1.0;
    RealVector lengthscales;
};

/// k(x, x') with r = || (x - x') / lengthscales ||:
///   Matern52: variance * (1 + sqrt(5) r + 5 r^2 / 3) * exp(-sqrt(5) r)
///   RBF:      variance * exp(-r^2 / 2)
double kernel_eval(const Kernel& kernel, const RealVector& x, const RealVector& y);

/// Same closed forms, as a function of the squared scaled distance.
double kernel_from_squared_distance(KernelKind kind, double variance, double r2);

struct GpOptions {
    double jitter = 1e-10;
    double max_jitter = 1e-6;
    bool optimize = true;
    /// Starting (or, without optimisation, fixed) hyperparameters in the
    /// standardised input/output space.
    double initial_variance = 1.0;
    double initial_lengthscale = 1.0;
    /// Coordinate search: `rounds` sweeps over (log variance, log lengthscales)
    /// with step `initial_step` halved after every sweep.
    int rounds = 10;
    double initial_step = 1.0;
    double log_variance_bounds[2] = {-6.907755278982137, 6.907755278982137};     // 1e-3 .. 1e3
    double log_lengthscale_bounds[2] = {-4.605170185988091, 6.907755278982137};  // 1e-2 .. 1e3
};

/// Noise-free GP regression on standardised inputs and outputs.
struct GpModel {
    Kernel kernel;                 // standardised space
    Eigen::MatrixXd inputs;        // n x d, standardised
    RealVector alpha;              // (K + jitter I)^-1 y_standardised
    Eigen::MatrixXd cholesky;      // lower factor of K + jitter I
    RealVector input_mean;
    RealVector input_scale;
    double output_mean = 0.0;
    double output_scale = 1.0;
    double jitter = 1e-10;
    double log_marginal_likelihood = 0.0;

    Eigen::Index input_dimension() const { return inputs.cols(); }
};

struct GpPrediction {
    RealVector mean;
    RealVector variance;
};

/// Fits hyperparameters by maximising the log marginal likelihood with a
/// deterministic bounded coordinate search, then factorises K + jitter I,
/// escalating jitter by x10 up to max_jitter on failure.
/// Throws DegenerateInputs (n < 2 or constant y) and SingularKernel.
GpModel gp_fit(const Eigen::MatrixXd& inputs, const RealVector& outputs, KernelKind kind, const GpOptions& options = {});

/// Posterior mean and variance (clamped at 0) in the original output units.
GpPrediction gp_predict(const GpModel& model, const Eigen::MatrixXd& queries);

}  // namespace plaid
