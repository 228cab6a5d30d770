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

#ifndef S17_NN_DENSE_HPP_
#define S17_NN_DENSE_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

#include "s17/rng.hpp"

namespace s17::nn {

/// Batches are stored column-wise: one column per sample.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class Activation { Identity, Relu, Logistic };

inline const char* to_string(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Relu: return "relu";
        case Activation::Logistic: return "logistic";
    }
    return "?";
}

template <typename Scalar>
    requires std::is_floating_point_v<Scalar>
Scalar logistic(Scalar z) {
    return Scalar(1) / (Scalar(1) + std::exp(-z));
}

template <typename Derived>
auto logistic(const Eigen::MatrixBase<Derived>& z) {
    using Scalar = typename Derived::Scalar;
    return ((-z.array()).exp() + Scalar(1)).inverse().matrix();
}

template <typename Scalar>
Matrix<Scalar> activate(Activation a, const Matrix<Scalar>& z) {
    switch (a) {
        case Activation::Identity: return z;
        case Activation::Relu: return z.cwiseMax(Scalar(0));
        case Activation::Logistic: return logistic(z);
    }
    return z;
}

/// dL/dz from dL/dy, expressed through the activation output y.
template <typename Scalar>
Matrix<Scalar> activation_backward(Activation a, const Matrix<Scalar>& y, const Matrix<Scalar>& dy) {
    switch (a) {
        case Activation::Identity: return dy;
        case Activation::Relu: return (y.array() > Scalar(0)).select(dy, Scalar(0));
        case Activation::Logistic: return (dy.array() * y.array() * (Scalar(1) - y.array())).matrix();
    }
    return dy;
}

/// Uniform(-k, k) with k = 1/sqrt(fan_in).
template <typename Scalar>
void init_uniform(Matrix<Scalar>& w, int fan_in, Rng& rng) {
    const double k = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
        for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = static_cast<Scalar>((2 * rng.uniform() - 1) * k);
    }
}

/// y = activation(W x + b).
template <typename Scalar>
class Dense {
   public:
    using Mat = Matrix<Scalar>;

    Dense() = default;
    Dense(int in, int out, Activation act)
        : W(Mat::Zero(out, in)), b(Mat::Zero(out, 1)), dW(Mat::Zero(out, in)), db(Mat::Zero(out, 1)), act(act) {}

    int inputs() const { return static_cast<int>(W.cols()); }
    int outputs() const { return static_cast<int>(W.rows()); }

    void init(Rng& rng) {
        init_uniform(W, inputs(), rng);
        b.setZero();
    }

    Mat forward(const Mat& x) const {
        if (x.rows() != W.cols()) throw std::invalid_argument("dense: input size mismatch");
        Mat z = W * x;
        z.colwise() += b.col(0);
        return activate(act, z);
    }

    /// Accumulates parameter gradients; returns dL/dx.
    Mat backward(const Mat& x, const Mat& y, const Mat& dy) {
        const Mat dz = activation_backward(act, y, dy);
        dW.noalias() += dz * x.transpose();
        db += dz.rowwise().sum();
        return W.transpose() * dz;
    }

    template <typename F>
    void visit(const std::string& prefix, F&& f) {
        f(prefix + "W", W, dW);
        f(prefix + "b", b, db);
    }

    Mat W, b;
    Mat dW, db;
    Activation act = Activation::Identity;
};

}  // namespace s17::nn

#endif  // S17_NN_DENSE_HPP_
