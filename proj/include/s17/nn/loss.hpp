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

#ifndef S17_NN_LOSS_HPP_
#define S17_NN_LOSS_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "s17/nn/dense.hpp"

namespace s17::nn {

inline constexpr double kProbabilityClamp = 1e-7;

template <typename Scalar>
Scalar clamp_probability(Scalar p) {
    return std::clamp(p, Scalar(kProbabilityClamp), Scalar(1 - kProbabilityClamp));
}

/// -[y ln p + (1-y) ln(1-p)] with p clamped away from 0 and 1.
template <typename Scalar>
Scalar cross_entropy(Scalar p, int label) {
    const Scalar q = clamp_probability(p);
    return label ? -std::log(q) : -std::log(Scalar(1) - q);
}

/// d cross_entropy / dp; zero where the clamp is active.
template <typename Scalar>
Scalar cross_entropy_grad(Scalar p, int label) {
    if (p < Scalar(kProbabilityClamp) || p > Scalar(1 - kProbabilityClamp)) return Scalar(0);
    return label ? -Scalar(1) / p : Scalar(1) / (Scalar(1) - p);
}

/// decay * sum of squared entries.
template <typename Scalar>
Scalar l2_penalty(const Matrix<Scalar>& w, Scalar decay) {
    return decay * w.squaredNorm();
}

/// Cross-entropy plus decay * ||w||^2 over the given weight matrices.
template <typename Scalar>
Scalar loss(Scalar p, int label, const std::vector<const Matrix<Scalar>*>& weights, Scalar decay) {
    Scalar total = cross_entropy(p, label);
    for (const Matrix<Scalar>* w : weights) total += l2_penalty(*w, decay);
    return total;
}

}  // namespace s17::nn

#endif  // S17_NN_LOSS_HPP_
