// Copyright 2026 The s17 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "gradcheck.hpp"
#include "s17/nn/adam.hpp"
#include "s17/nn/dropout.hpp"
#include "s17/nn/serialize.hpp"

using namespace s17;
using namespace s17::nn;
using gradcheck::Mat;

TEST_CASE("gradient checks: 100 random configurations per layer") {
    Rng rng(314);
    double dense = 0, lstm = 0, loss_err = 0;
    for (int trial = 0; trial < 100; ++trial) {
        dense = std::max(dense, gradcheck::dense_trial(rng));
        lstm = std::max(lstm, gradcheck::lstm_trial(rng));
        loss_err = std::max(loss_err, gradcheck::loss_trial(rng));
    }
    CHECK(dense < 1e-4);
    CHECK(lstm < 1e-4);
    CHECK(loss_err < 1e-4);
}

TEST_CASE("lstm_step with zero parameters") {
    Lstm<double> cell(3, 4);
    Rng rng(1);
    const Mat x = gradcheck::random_matrix(3, 1, rng);
    const Mat zero = Mat::Zero(4, 1);
    auto s = lstm_step(cell, x, zero, zero);
    CHECK(s.c.isZero());
    CHECK(s.h.isZero());

    const Mat v = gradcheck::random_matrix(4, 1, rng);
    s = lstm_step(cell, x, zero, v);
    CHECK(s.c.isApprox(v / 2));
    CHECK_THROWS_AS(lstm_step(cell, Mat(Mat::Zero(2, 1)), zero, zero), std::invalid_argument);
}

TEST_CASE("lstm initialization") {
    Lstm<double> cell(8, 64);
    Rng rng(2);
    cell.init(rng);
    CHECK(cell.b.topRows(64).isZero());
    CHECK((cell.b.middleRows(64, 64).array() == 1.0).all());
    CHECK(cell.b.bottomRows(128).isZero());
    CHECK(cell.Wx.cwiseAbs().maxCoeff() <= 1 / std::sqrt(8.0));
    CHECK(cell.Wh.cwiseAbs().maxCoeff() <= 1 / std::sqrt(64.0));
    CHECK(cell.Wh.cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("dense examples") {
    Dense<double> relu(2, 2, Activation::Relu);
    relu.b << -1, -2;
    Mat x(2, 1);
    x << 0.5, 0.5;
    CHECK(relu.forward(x).isZero());

    Dense<double> id(3, 3, Activation::Identity);
    id.W.setIdentity();
    Rng rng(3);
    const Mat y = gradcheck::random_matrix(3, 5, rng);
    CHECK(id.forward(y) == y);
    CHECK_THROWS_AS(id.forward(Mat(Mat::Zero(2, 1))), std::invalid_argument);

    Dense<double> sig(1, 1, Activation::Logistic);
    CHECK(sig.forward(Mat(Mat::Zero(1, 1)))(0, 0) == 0.5);
}

TEST_CASE("loss examples") {
    for (int label : {0, 1}) CHECK(cross_entropy(0.5, label) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(cross_entropy(1 - 1e-12, 1) < 2e-7);
    CHECK(cross_entropy(1e-12, 0) < 2e-7);
    // Clamped at 1e-7: finite at the boundary.
    CHECK(cross_entropy(0.0, 1) == doctest::Approx(-std::log(1e-7)));
    CHECK(cross_entropy_grad(0.0, 1) == 0.0);

    Mat w(2, 2);
    w << 1, 2, 3, 4;
    CHECK(loss<double>(0.5, 1, {&w}, 1e-5) == doctest::Approx(std::log(2.0) + 30e-5).epsilon(1e-15));
    CHECK(loss<double>(0.5, 1, {}, 1e-5) == doctest::Approx(std::log(2.0)));
    Rng rng(4);
    for (int k = 0; k < 100; ++k) CHECK(cross_entropy(rng.uniform(), static_cast<int>(rng.uniform_int(0, 1))) >= 0);
}

namespace {

struct Quadratic {
    Mat x, dx;
    template <typename F>
    void visit(const std::string& p, F&& f) {
        f(p + "x", x, dx);
    }
};

}  // namespace

TEST_CASE("adam") {
    SUBCASE("zero gradient leaves parameters unchanged") {
        Quadratic q{Mat::Constant(3, 2, 0.7), Mat::Zero(3, 2)};
        Adam<double> adam;
        adam.step(q);
        CHECK((q.x.array() == 0.7).all());
    }
    SUBCASE("first step with unit gradient moves by the learning rate") {
        Quadratic q{Mat::Zero(4, 1), Mat::Ones(4, 1)};
        Adam<double> adam;
        adam.step(q);
        for (int i = 0; i < 4; ++i) CHECK(q.x(i, 0) == doctest::Approx(-1e-3).epsilon(1e-7));
        CHECK(adam.steps() == 1);
    }
    SUBCASE("converges on a convex quadratic") {
        Rng rng(5);
        const Mat target = gradcheck::random_matrix(5, 1, rng);
        Quadratic q{Mat::Zero(5, 1), Mat::Zero(5, 1)};
        Adam<double> adam(AdamConfig{0.01});
        const double initial = target.squaredNorm();
        for (int step = 0; step < 2000; ++step) {
            q.dx = 2 * (q.x - target);
            adam.step(q);
        }
        CHECK((q.x - target).squaredNorm() < 1e-4 * initial);
    }
}

TEST_CASE("dropout") {
    Rng rng(6);
    const Mat x = gradcheck::random_matrix(4, 3, rng);
    CHECK(dropout(x, 1.0, rng, true) == x);
    CHECK(dropout(x, 0.3, rng, false) == x);
    CHECK_THROWS_AS(dropout(x, 0.0, rng, true), std::invalid_argument);
    CHECK_THROWS_AS(dropout(x, 1.5, rng, true), std::invalid_argument);

    // E[output] = input: per-entry mean over 1e5 masks within 3 sigma.
    const int n = 100000;
    const double keep = 0.8;
    Mat sum = Mat::Zero(4, 3);
    for (int k = 0; k < n; ++k) sum += dropout(x, keep, rng, true);
    const Mat mean = sum / n;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double sigma = std::abs(x.data()[k]) * std::sqrt((1 - keep) / keep / n);
        CHECK(std::abs(mean.data()[k] - x.data()[k]) <= 3 * sigma + 1e-15);
    }
    // Same seed, same masks.
    Rng a(9), b(9);
    CHECK(dropout(x, keep, a, true) == dropout(x, keep, b, true));
}

TEST_CASE("tensor archive round trip is bit exact") {
    Rng rng(7);
    TensorArchive out;
    out.metadata = R"({"kind":"test"})";
    const Mat d = gradcheck::random_matrix(5, 3, rng);
    const Matrix<float> f = gradcheck::random_matrix(2, 7, rng).cast<float>();
    out.put("d", d);
    out.put("f", f);
    out.put("empty", Mat(0, 4));
    std::stringstream ss;
    out.write(ss);
    const TensorArchive in = TensorArchive::read(ss);
    CHECK(in.metadata == out.metadata);
    CHECK(in.size() == 3);
    Mat d2(5, 3);
    Matrix<float> f2(2, 7);
    in.get("d", d2);
    in.get("f", f2);
    CHECK(d2 == d);
    CHECK(f2 == f);

    Mat wrong(3, 5);
    CHECK_THROWS_AS(in.get("d", wrong), std::runtime_error);
    Matrix<float> wrong_width(5, 3);
    CHECK_THROWS_AS(in.get("d", wrong_width), std::runtime_error);
    CHECK_THROWS_AS(in.get("missing", d2), std::runtime_error);

    std::string bytes = ss.str();
    std::stringstream truncated(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(TensorArchive::read(truncated), std::runtime_error);
    bytes[4] = 9;
    std::stringstream bad_version(bytes);
    CHECK_THROWS_AS(TensorArchive::read(bad_version), std::runtime_error);
}
