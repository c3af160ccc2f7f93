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

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "check_code.hpp"
#include "plaid/gp.hpp"

using namespace plaid;

namespace {

double matern52_oracle(double variance, const std::vector<double>& ls, const std::vector<double>& x,
                       const std::vector<double>& y) {
    long double r2 = 0.0L;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const long double t = (static_cast<long double>(x[d]) - y[d]) / ls[d];
        r2 += t * t;
    }
    const long double r = std::sqrt(r2);
    const long double s5 = std::sqrt(5.0L);
    return static_cast<double>(variance * (1.0L + s5 * r + 5.0L * r2 / 3.0L) * std::exp(-s5 * r));
}

GpOptions fixed(double variance, double lengthscale) {
    GpOptions o;
    o.optimize = false;
    o.initial_variance = variance;
    o.initial_lengthscale = lengthscale;
    return o;
}

}  // namespace

TEST_CASE("kernel closed forms") {
    Kernel k{KernelKind::RBF, 1.0, RealVector::Ones(2)};
    const RealVector x = (RealVector(2) << 0.3, -0.2).finished();
    CHECK(kernel_eval(k, x, x) == 1.0);
    CHECK(kernel_eval(k, RealVector::Zero(2), RealVector::Ones(2)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    k.kind = KernelKind::Matern52;
    k.variance = 2.5;
    CHECK(kernel_eval(k, x, x) == 2.5);
    PLAID_CHECK_CODE(kernel_eval(k, x, RealVector::Zero(3)), ErrorCode::ShapeMismatch);
}

TEST_CASE("Matern 5/2 matches an independent evaluation") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.2, 3.0);
    for (int i = 0; i < 20; ++i) {
        const std::vector<double> ls{pos(rng), pos(rng), pos(rng)};
        const std::vector<double> x{u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)};
        const double variance = pos(rng);
        const Kernel k{KernelKind::Matern52, variance, Eigen::Map<const RealVector>(ls.data(), 3)};
        const double got = kernel_eval(k, Eigen::Map<const RealVector>(x.data(), 3), Eigen::Map<const RealVector>(y.data(), 3));
        CHECK(std::abs(got - matern52_oracle(variance, ls, x, y)) <= 1e-14);
    }
}

TEST_CASE("constant targets and tiny sets are degenerate") {
    Eigen::MatrixXd x(3, 1);
    x << 0, 1, 2;
    PLAID_CHECK_CODE(gp_fit(x, RealVector::Constant(3, 4.0), KernelKind::Matern52), ErrorCode::DegenerateInputs);
    PLAID_CHECK_CODE(gp_fit(x.topRows(1), RealVector::Ones(1), KernelKind::Matern52), ErrorCode::DegenerateInputs);
}

TEST_CASE("noiseless interpolation at training points") {
    Eigen::MatrixXd x(3, 2);
    x << 0, 0, 1, 0.5, -0.4, 2;
    const RealVector y = (RealVector(3) << 1.0, -2.0, 0.5).finished();
    for (const auto kind : {KernelKind::Matern52, KernelKind::RBF}) {
        const auto model = gp_fit(x, y, kind);
        const auto p = gp_predict(model, x);
        CHECK((p.mean - y).cwiseAbs().maxCoeff() <= 1e-6);
        for (Eigen::Index i = 0; i < 3; ++i) {
            CHECK(p.variance[i] <= 2.0 * model.jitter * model.output_scale * model.output_scale);
        }
    }
}

TEST_CASE("linear function is recovered between samples") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd x(8, 2), q(5, 2);
    for (Eigen::Index i = 0; i < 8; ++i) x.row(i) << u(rng), u(rng);
    for (Eigen::Index i = 0; i < 5; ++i) q.row(i) << 0.2 + 0.6 * u(rng), 0.2 + 0.6 * u(rng);
    auto f = [](double a, double b) { return 0.5 + 2.0 * a - 1.5 * b; };
    RealVector y(8);
    for (Eigen::Index i = 0; i < 8; ++i) y[i] = f(x(i, 0), x(i, 1));
    const auto model = gp_fit(x, y, KernelKind::RBF);
    const auto p = gp_predict(model, q);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(std::abs(p.mean[i] - f(q(i, 0), q(i, 1))) <= 2e-2);
}

TEST_CASE("two-point mean matches a hand-solved system") {
    Eigen::MatrixXd x(2, 1);
    x << 0.0, 1.0;
    const RealVector y = (RealVector(2) << 3.0, 5.0).finished();
    const auto model = gp_fit(x, y, KernelKind::RBF, fixed(1.0, 1.0));
    // Standardised inputs: mean 0.5, scale 0.5 -> z = -1, 1. Outputs: mean 4, scale 1 -> -1, 1.
    const double j = model.jitter;
    const double k01 = std::exp(-0.5 * 4.0);
    const double a = 1.0 + j, det = a * a - k01 * k01;
    const double alpha0 = (a * -1.0 - k01 * 1.0) / det, alpha1 = (a * 1.0 - k01 * -1.0) / det;
    Eigen::MatrixXd q(1, 1);
    q << 0.3;
    const double z = (0.3 - 0.5) / 0.5;
    const double expected = 4.0 + std::exp(-0.5 * (z + 1) * (z + 1)) * alpha0 + std::exp(-0.5 * (z - 1) * (z - 1)) * alpha1;
    CHECK(std::abs(gp_predict(model, q).mean[0] - expected) <= 1e-12);
}

TEST_CASE("far queries revert to the prior") {
    Eigen::MatrixXd x(4, 1);
    x << 0, 1, 2, 3;
    const RealVector y = (RealVector(4) << 1.0, 3.0, 2.0, 7.0).finished();
    const auto model = gp_fit(x, y, KernelKind::Matern52);
    Eigen::MatrixXd far(1, 1);
    far << 1.5 + 60.0 * model.kernel.lengthscales[0] * model.input_scale[0];
    const auto p = gp_predict(model, far);
    CHECK(std::abs(p.mean[0] - model.output_mean) <= 1e-6);
    const double prior = model.kernel.variance * model.output_scale * model.output_scale;
    CHECK(std::abs(p.variance[0] - prior) <= 1e-6 * std::max(1.0, prior));
}

TEST_CASE("predictions are invariant to affine output rescaling") {
    std::mt19937_64 rng(32);
    std::normal_distribution<double> g;
    Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(10, 3, [&] { return g(rng); });
    RealVector y = (x.col(0).array().sin() + x.col(1).array() * x.col(2).array()).matrix();
    Eigen::MatrixXd q = Eigen::MatrixXd::NullaryExpr(4, 3, [&] { return g(rng); });
    const auto a = gp_predict(gp_fit(x, y, KernelKind::Matern52), q).mean;
    const RealVector y2 = (y.array() * 250.0 - 17.0).matrix();
    const auto b = gp_predict(gp_fit(x, y2, KernelKind::Matern52), q).mean;
    CHECK(((b.array() + 17.0) / 250.0 - a.array()).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("optimisation never lowers the likelihood below the start") {
    std::mt19937_64 rng(33);
    std::normal_distribution<double> g;
    Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(15, 2, [&] { return g(rng); });
    RealVector y = (x.col(0).array() * 3.0).sin().matrix() + 0.1 * x.col(1);
    const auto start = gp_fit(x, y, KernelKind::Matern52, fixed(1.0, 1.0));
    const auto tuned = gp_fit(x, y, KernelKind::Matern52);
    CHECK(tuned.log_marginal_likelihood >= start.log_marginal_likelihood);
    CHECK(bitwise_equal(gp_predict(tuned, x).mean, gp_predict(gp_fit(x, y, KernelKind::Matern52), x).mean));
}

TEST_CASE("duplicate inputs escalate jitter or fail") {
    Eigen::MatrixXd x(3, 1);
    x << 0.0, 0.0, 1.0;
    const RealVector y = (RealVector(3) << 1.0, 1.0, 2.0).finished();
    const auto model = gp_fit(x, y, KernelKind::RBF, fixed(1.0, 1.0));
    CHECK(model.jitter >= 1e-10);
    CHECK(model.jitter <= 1e-6);
    const RealVector clash = (RealVector(3) << 1.0, 3.0, 2.0).finished();
    CHECK_NOTHROW(gp_fit(x, clash, KernelKind::RBF, fixed(1.0, 1.0)));
    PLAID_CHECK_CODE(gp_predict(model, Eigen::MatrixXd::Zero(1, 2)), ErrorCode::ShapeMismatch);
}
