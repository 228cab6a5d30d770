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

#ifndef S17_NN_LSTM_HPP_
#define S17_NN_LSTM_HPP_

#include <stdexcept>
#include <string>

#include "s17/nn/dense.hpp"

namespace s17::nn {

/// LSTM cell. Gate rows are stacked [i; f; o; g] in Wx (4H x in), Wh (4H x H)
/// and b (4H x 1):
///   i, f, o = logistic(.), g = tanh(.), c' = f*c + i*g, h' = o*tanh(c').
template <typename Scalar>
class Lstm {
   public:
    using Mat = Matrix<Scalar>;

    struct State {
        Mat h, c;
    };

    /// Values kept from the forward step for the backward step.
    struct Cache {
        Mat x, h_prev, c_prev;
        Mat gates;  // activated [i; f; o; g]
        Mat tanh_c;
    };

    Lstm() = default;
    Lstm(int in, int hidden)
        : Wx(Mat::Zero(4 * hidden, in)),
          Wh(Mat::Zero(4 * hidden, hidden)),
          b(Mat::Zero(4 * hidden, 1)),
          dWx(Mat::Zero(4 * hidden, in)),
          dWh(Mat::Zero(4 * hidden, hidden)),
          db(Mat::Zero(4 * hidden, 1)) {}

    int inputs() const { return static_cast<int>(Wx.cols()); }
    int hidden() const { return static_cast<int>(Wh.cols()); }

    /// Weights uniform(+-1/sqrt(fan_in)); forget-gate bias 1, other biases 0.
    void init(Rng& rng) {
        init_uniform(Wx, inputs(), rng);
        init_uniform(Wh, hidden(), rng);
        b.setZero();
        b.middleRows(hidden(), hidden()).setConstant(Scalar(1));
    }

    State zero_state(Eigen::Index batch) const { return {Mat::Zero(hidden(), batch), Mat::Zero(hidden(), batch)}; }

    State step(const Mat& x, const State& s, Cache* cache = nullptr) const {
        const int H = hidden();
        if (x.rows() != Wx.cols() || s.h.rows() != H || s.c.rows() != H || s.h.cols() != x.cols() ||
            s.c.cols() != x.cols()) {
            throw std::invalid_argument("lstm: shape mismatch");
        }
        Mat z = Wx * x;
        z.noalias() += Wh * s.h;
        z.colwise() += b.col(0);
        z.topRows(3 * H) = logistic(z.topRows(3 * H));
        z.bottomRows(H) = z.bottomRows(H).array().tanh().matrix();
        State out;
        out.c = (z.middleRows(H, H).array() * s.c.array() + z.topRows(H).array() * z.bottomRows(H).array()).matrix();
        Mat tc = out.c.array().tanh().matrix();
        out.h = (z.middleRows(2 * H, H).array() * tc.array()).matrix();
        if (cache) {
            cache->x = x;
            cache->h_prev = s.h;
            cache->c_prev = s.c;
            cache->gates = std::move(z);
            cache->tanh_c = std::move(tc);
        }
        return out;
    }

    /// Backward through one step. `dh`, `dc` are gradients w.r.t. this step's
    /// outputs; accumulates parameter gradients and writes the gradients
    /// w.r.t. x and the previous state.
    void step_backward(const Cache& k, const Mat& dh, const Mat& dc_in, Mat& dx, Mat& dh_prev, Mat& dc_prev) {
        const int H = hidden();
        const auto i = k.gates.topRows(H).array();
        const auto f = k.gates.middleRows(H, H).array();
        const auto o = k.gates.middleRows(2 * H, H).array();
        const auto g = k.gates.bottomRows(H).array();
        const auto tc = k.tanh_c.array();

        const Mat dc = (dc_in.array() + dh.array() * o * (Scalar(1) - tc * tc)).matrix();
        Mat dz(4 * H, dh.cols());
        dz.topRows(H) = (dc.array() * g * i * (Scalar(1) - i)).matrix();
        dz.middleRows(H, H) = (dc.array() * k.c_prev.array() * f * (Scalar(1) - f)).matrix();
        dz.middleRows(2 * H, H) = (dh.array() * tc * o * (Scalar(1) - o)).matrix();
        dz.bottomRows(H) = (dc.array() * i * (Scalar(1) - g * g)).matrix();

        dWx.noalias() += dz * k.x.transpose();
        dWh.noalias() += dz * k.h_prev.transpose();
        db += dz.rowwise().sum();
        dx.noalias() = Wx.transpose() * dz;
        dh_prev.noalias() = Wh.transpose() * dz;
        dc_prev = (dc.array() * f).matrix();
    }

    template <typename F>
    void visit(const std::string& prefix, F&& f) {
        f(prefix + "Wx", Wx, dWx);
        f(prefix + "Wh", Wh, dWh);
        f(prefix + "b", b, db);
    }

    Mat Wx, Wh, b;
    Mat dWx, dWh, db;
};

/// Single-sample convenience form.
template <typename Scalar>
typename Lstm<Scalar>::State lstm_step(const Lstm<Scalar>& cell, const Matrix<Scalar>& x, const Matrix<Scalar>& h,
                                       const Matrix<Scalar>& c) {
    return cell.step(x, {h, c});
}

}  // namespace s17::nn

#endif  // S17_NN_LSTM_HPP_
