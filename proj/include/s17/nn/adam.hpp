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

#ifndef S17_NN_ADAM_HPP_
#define S17_NN_ADAM_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "s17/nn/dense.hpp"

namespace s17::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias correction. Moments are bound to parameters by visiting
/// order, so a state must always be used with the same model layout.
template <typename Scalar>
class Adam {
   public:
    using Mat = Matrix<Scalar>;

    explicit Adam(AdamConfig config = {}) : config_(config) {}

    const AdamConfig& config() const { return config_; }
    int64_t steps() const { return steps_; }

    /// Applies one update to every parameter the model visits.
    template <typename Model>
    void step(Model& model) {
        ++steps_;
        const double c1 = 1 - std::pow(config_.beta1, static_cast<double>(steps_));
        const double c2 = 1 - std::pow(config_.beta2, static_cast<double>(steps_));
        const Scalar lr = static_cast<Scalar>(config_.learning_rate * std::sqrt(c2) / c1);
        const Scalar b1 = static_cast<Scalar>(config_.beta1);
        const Scalar b2 = static_cast<Scalar>(config_.beta2);
        const Scalar eps = static_cast<Scalar>(config_.epsilon * std::sqrt(c2));
        size_t k = 0;
        model.visit("", [&](const std::string&, Mat& value, Mat& grad) {
            if (k == m_.size()) {
                m_.push_back(Mat::Zero(value.rows(), value.cols()));
                v_.push_back(Mat::Zero(value.rows(), value.cols()));
            }
            Mat& m = m_[k];
            Mat& v = v_[k];
            if (m.rows() != value.rows() || m.cols() != value.cols() || grad.rows() != value.rows() ||
                grad.cols() != value.cols()) {
                throw std::invalid_argument("adam: parameter shape changed");
            }
            m = b1 * m + (Scalar(1) - b1) * grad;
            v = b2 * v + (Scalar(1) - b2) * grad.cwiseAbs2();
            value.array() -= lr * m.array() / (v.array().sqrt() + eps);
            ++k;
        });
    }

   private:
    AdamConfig config_;
    int64_t steps_ = 0;
    std::vector<Mat> m_, v_;
};

}  // namespace s17::nn

#endif  // S17_NN_ADAM_HPP_
