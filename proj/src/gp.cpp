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

#include "plaid/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Cholesky>

namespace plaid {

std::string_view to_string(KernelKind kind) { return kind == KernelKind::Matern52 ? "matern52" : "rbf"; }

std::optional<KernelKind> parse_kernel_kind(std::string_view text) {
    if (text == "matern52" || text == "Matern52") return KernelKind::Matern52;
    if (text == "rbf" || text == "RBF") return KernelKind::RBF;
    return std::nullopt;
}

double kernel_from_squared_distance(KernelKind kind, double variance, double r2) {
    if (kind == KernelKind::RBF) return variance * std::exp(-0.5 * r2);
    const double sr = std::sqrt(5.0 * r2);
    return variance * (1.0 + sr + 5.0 * r2 / 3.0) * std::exp(-sr);
}

double kernel_eval(const Kernel& kernel, const RealVector& x, const RealVector& y) {
    if (x.size() != y.size() || x.size() != kernel.lengthscales.size()) {
        throw Error(ErrorCode::ShapeMismatch, "kernel arguments differ in dimension");
    }
    const double r2 = ((x - y).array() / kernel.lengthscales.array()).square().sum();
    return kernel_from_squared_distance(kernel.kind, kernel.variance, r2);
}

namespace {

/// Squared per-dimension differences of all training pairs, reused by every
/// likelihood evaluation of the hyperparameter search.
class PairDistances {
public:
    explicit PairDistances(const Eigen::MatrixXd& x) : n_(x.rows()), per_dim_(static_cast<std::size_t>(x.cols())) {
        for (Eigen::Index d = 0; d < x.cols(); ++d) {
            auto& m = per_dim_[static_cast<std::size_t>(d)];
            m.resize(n_, n_);
            for (Eigen::Index j = 0; j < n_; ++j) {
                for (Eigen::Index i = 0; i < n_; ++i) {
                    const double diff = x(i, d) - x(j, d);
                    m(i, j) = diff * diff;
                }
            }
        }
    }

    Eigen::MatrixXd scaled(const RealVector& lengthscales) const {
        Eigen::MatrixXd r2 = Eigen::MatrixXd::Zero(n_, n_);
        for (std::size_t d = 0; d < per_dim_.size(); ++d) {
            const double l = lengthscales[static_cast<Eigen::Index>(d)];
            r2 += per_dim_[d] / (l * l);
        }
        return r2;
    }

private:
    Eigen::Index n_;
    std::vector<Eigen::MatrixXd> per_dim_;
};

struct Factorization {
    Eigen::MatrixXd lower;
    double jitter = 0.0;
};

std::optional<Factorization> factorize(const Eigen::MatrixXd& k, double jitter, double max_jitter) {
    for (double j = jitter; j <= max_jitter * (1.0 + 1e-9); j *= 10.0) {
        Eigen::MatrixXd shifted = k;
        shifted.diagonal().array() += j;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) {
            Eigen::MatrixXd lower = llt.matrixL();
            if (lower.diagonal().minCoeff() > 0.0 && lower.allFinite()) return Factorization{std::move(lower), j};
        }
    }
    return std::nullopt;
}

Eigen::MatrixXd kernel_matrix(KernelKind kind, double variance, const Eigen::MatrixXd& r2) {
    return r2.unaryExpr([&](double v) { return kernel_from_squared_distance(kind, variance, v); });
}

double log_likelihood(const Factorization& f, const RealVector& y) {
    const RealVector v = f.lower.triangularView<Eigen::Lower>().solve(y);
    const double n = static_cast<double>(y.size());
    return -0.5 * v.squaredNorm() - f.lower.diagonal().array().log().sum() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace

GpModel gp_fit(const Eigen::MatrixXd& inputs, const RealVector& outputs, KernelKind kind, const GpOptions& options) {
    const auto n = inputs.rows();
    const auto d = inputs.cols();
    if (outputs.size() != n) throw Error(ErrorCode::ShapeMismatch, "inputs and outputs differ in sample count");
    if (n < 2) throw Error(ErrorCode::DegenerateInputs, "need at least two training points");
    if (!inputs.allFinite() || !outputs.allFinite()) throw Error(ErrorCode::InvalidValue, "non-finite training data");
    if (!(options.jitter > 0.0) || options.max_jitter < options.jitter) {
        throw Error(ErrorCode::ConfigInvalid, "jitter must be positive and not above max_jitter");
    }

    GpModel model;
    model.input_mean = inputs.colwise().mean().transpose();
    model.input_scale = ((inputs.rowwise() - model.input_mean.transpose()).array().square().colwise().mean())
                            .sqrt()
                            .transpose();
    for (Eigen::Index j = 0; j < d; ++j) {
        if (!(model.input_scale[j] > 0.0)) model.input_scale[j] = 1.0;
    }
    model.inputs = (inputs.rowwise() - model.input_mean.transpose()).array().rowwise() /
                   model.input_scale.transpose().array();

    model.output_mean = outputs.mean();
    model.output_scale = std::sqrt((outputs.array() - model.output_mean).square().mean());
    if (!(model.output_scale > 0.0)) throw Error(ErrorCode::DegenerateInputs, "training outputs are constant");
    const RealVector y = (outputs.array() - model.output_mean) / model.output_scale;

    const PairDistances distances(model.inputs);

    // theta = (log variance, log lengthscale_1, ..., log lengthscale_d)
    RealVector theta(d + 1);
    theta[0] = std::log(options.initial_variance);
    theta.tail(d).setConstant(std::log(options.initial_lengthscale));

    auto evaluate = [&](const RealVector& t) {
        const RealVector lengthscales = t.tail(d).array().exp();
        const auto f = factorize(kernel_matrix(kind, std::exp(t[0]), distances.scaled(lengthscales)), options.jitter,
                                 options.max_jitter);
        if (!f) return -std::numeric_limits<double>::infinity();
        const double value = log_likelihood(*f, y);
        return std::isfinite(value) ? value : -std::numeric_limits<double>::infinity();
    };

    if (options.optimize) {
        double best = evaluate(theta);
        double step = options.initial_step;
        for (int round = 0; round < options.rounds; ++round, step *= 0.5) {
            for (Eigen::Index c = 0; c <= d; ++c) {
                const double lo = c == 0 ? options.log_variance_bounds[0] : options.log_lengthscale_bounds[0];
                const double hi = c == 0 ? options.log_variance_bounds[1] : options.log_lengthscale_bounds[1];
                for (const double direction : {1.0, -1.0}) {
                    bool moved = false;
                    for (int move = 0; move < 8; ++move) {
                        RealVector candidate = theta;
                        candidate[c] = std::clamp(theta[c] + direction * step, lo, hi);
                        if (candidate[c] == theta[c]) break;
                        const double value = evaluate(candidate);
                        if (!(value > best)) break;
                        best = value;
                        theta = std::move(candidate);
                        moved = true;
                    }
                    if (moved) break;
                }
            }
        }
    }

    model.kernel.kind = kind;
    model.kernel.variance = std::exp(theta[0]);
    model.kernel.lengthscales = theta.tail(d).array().exp();
    const auto f = factorize(kernel_matrix(kind, model.kernel.variance, distances.scaled(model.kernel.lengthscales)),
                             options.jitter, options.max_jitter);
    if (!f) throw Error(ErrorCode::SingularKernel, "kernel matrix not positive definite at jitter " +
                                                       std::to_string(options.max_jitter));
    model.cholesky = f->lower;
    model.jitter = f->jitter;
    model.alpha = model.cholesky.transpose().triangularView<Eigen::Upper>().solve(
        model.cholesky.triangularView<Eigen::Lower>().solve(y));
    model.log_marginal_likelihood = log_likelihood(*f, y);
    return model;
}

GpPrediction gp_predict(const GpModel& model, const Eigen::MatrixXd& queries) {
    const auto d = model.input_dimension();
    if (queries.cols() != d) {
        throw Error(ErrorCode::ShapeMismatch, "query dimension " + std::to_string(queries.cols()) + ", model expects " +
                                                  std::to_string(d));
    }
    const Eigen::MatrixXd z =
        (queries.rowwise() - model.input_mean.transpose()).array().rowwise() / model.input_scale.transpose().array();
    const auto n = model.inputs.rows();
    const auto q = queries.rows();
    Eigen::MatrixXd cross(n, q);
    for (Eigen::Index j = 0; j < q; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r2 = ((model.inputs.row(i) - z.row(j)).array() / model.kernel.lengthscales.transpose().array())
                                  .square()
                                  .sum();
            cross(i, j) = kernel_from_squared_distance(model.kernel.kind, model.kernel.variance, r2);
        }
    }
    const Eigen::MatrixXd v = model.cholesky.triangularView<Eigen::Lower>().solve(cross);
    GpPrediction out;
    out.mean = (cross.transpose() * model.alpha).array() * model.output_scale + model.output_mean;
    out.variance = ((model.kernel.variance - v.colwise().squaredNorm().array()).max(0.0) *
                    model.output_scale * model.output_scale)
                       .transpose();
    return out;
}

}  // namespace plaid
