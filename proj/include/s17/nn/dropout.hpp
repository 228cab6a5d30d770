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

#ifndef S17_NN_DROPOUT_HPP_
#define S17_NN_DROPOUT_HPP_

#include <stdexcept>

#include "s17/nn/dense.hpp"

namespace s17::nn {

/// Inverted-dropout mask: each entry is 0 with probability 1 - keep, else 1/keep.
template <typename Scalar>
Matrix<Scalar> dropout_mask(Eigen::Index rows, Eigen::Index cols, double keep, Rng& rng) {
    if (!(keep > 0 && keep <= 1)) throw std::invalid_argument("keep probability must be in (0, 1]");
    Matrix<Scalar> m(rows, cols);
    const Scalar scale = static_cast<Scalar>(1 / keep);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = keep == 1 || rng.uniform() < keep ? scale : Scalar(0);
    }
    return m;
}

/// Training: x * mask; inference: x.
template <typename Scalar>
Matrix<Scalar> dropout(const Matrix<Scalar>& x, double keep, Rng& rng, bool training) {
    if (!(keep > 0 && keep <= 1)) throw std::invalid_argument("keep probability must be in (0, 1]");
    if (!training || keep == 1) return x;
    return x.cwiseProduct(dropout_mask<Scalar>(x.rows(), x.cols(), keep, rng));
}

}  // namespace s17::nn

#endif  // S17_NN_DROPOUT_HPP_
