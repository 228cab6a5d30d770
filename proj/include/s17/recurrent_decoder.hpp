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

#ifndef S17_RECURRENT_DECODER_HPP_
#define S17_RECURRENT_DECODER_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "s17/code_layout.hpp"
#include "s17/nn/dense.hpp"
#include "s17/nn/dropout.hpp"
#include "s17/nn/loss.hpp"
#include "s17/nn/lstm.hpp"
#include "s17/pauli_sim.hpp"
#include "s17/rng.hpp"

namespace s17 {

/// Non-finite loss or parameters during training (CLI exit code 3).
class NumericError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kIncrementBits = 8;
inline constexpr int kFinalBits = 4;
inline constexpr int kDefaultWindow = 3;

/// Initial output-unit bias of both networks. At p1 = p2 = 1/2 the combined
/// output has zero gradient with respect to either network.
inline constexpr double kOutputBiasInit = -2.0;

/// Probability that exactly one of two independent flips happened.
inline double combine(double p1, double p2) { return p1 * (1 - p2) + p2 * (1 - p1); }

struct TrainConfig {
    int batch_size = 64;
    int epoch_batches = 10000;
    double learning_rate = 1e-3;
    double keep_prob = 0.8;
    double weight_decay = 1e-5;
    int patience = 100;
    int restarts = 3;
    // 0: no cap besides patience.
    int max_epochs = 0;
    int hidden = 64;
    int eval_units = 64;
    int window = kDefaultWindow;
    uint64_t seed = 1;

    /// Full-size protocol: batch 64, 10^4 batches per epoch, lr 1e-3, keep
    /// 0.8, decay 1e-5, patience 100, 3 restarts.
    static TrainConfig paper();
    /// Reduced protocol used by the acceptance pipeline: 500 batches per
    /// epoch, lr 3e-3, patience 20, at most 150 epochs.
    static TrainConfig desk();
    static TrainConfig preset(const std::string& name);

    /// Throws std::invalid_argument on non-positive sizes or rates.
    void validate() const;

    std::string to_json() const;
    static TrainConfig from_json(const std::string& text);

    bool operator==(const TrainConfig&) const = default;
};

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0;
    double validation_error = 0;
    bool checkpointed = false;

    bool operator==(const EpochRecord&) const = default;
};

struct TrainingInfo {
    uint64_t seed = 0;
    int restart = 0;
    int epochs = 0;
    int best_epoch = 0;
    double validation_error = std::numeric_limits<double>::quiet_NaN();
    std::vector<EpochRecord> history;
};

/// Model inputs for a batch of equally long sequences. Column b of xs[t] is
/// the 8 increment bits of sequence b at cycle t+1; column b of final is its
/// final increment.
template <typename Scalar>
struct DecoderBatch {
    std::vector<nn::Matrix<Scalar>> xs;
    nn::Matrix<Scalar> final;
    std::vector<uint8_t> labels;

    Eigen::Index size() const { return final.cols(); }
};

template <typename Scalar>
nn::Matrix<Scalar> increment_column_block(const std::vector<const SyndromeSequence*>& seqs, int t) {
    nn::Matrix<Scalar> x(kIncrementBits, static_cast<Eigen::Index>(seqs.size()));
    for (size_t b = 0; b < seqs.size(); ++b) {
        const uint8_t v = seqs[b]->increments[t];
        for (int k = 0; k < kIncrementBits; ++k) x(k, b) = static_cast<Scalar>((v >> k) & 1);
    }
    return x;
}

template <typename Scalar>
nn::Matrix<Scalar> final_column_block(const std::vector<uint8_t>& finals) {
    nn::Matrix<Scalar> f(kFinalBits, static_cast<Eigen::Index>(finals.size()));
    for (size_t b = 0; b < finals.size(); ++b) {
        for (int k = 0; k < kFinalBits; ++k) f(k, b) = static_cast<Scalar>((finals[b] >> k) & 1);
    }
    return f;
}

/// Throws std::invalid_argument unless all sequences share one length.
template <typename Scalar>
DecoderBatch<Scalar> make_batch(const std::vector<const SyndromeSequence*>& seqs) {
    if (seqs.empty()) throw std::invalid_argument("make_batch: empty batch");
    const int T = seqs.front()->cycles;
    DecoderBatch<Scalar> batch;
    std::vector<uint8_t> finals;
    for (const SyndromeSequence* s : seqs) {
        if (s->cycles != T) throw std::invalid_argument("make_batch: sequences differ in length");
        finals.push_back(s->final_increment);
        batch.labels.push_back(s->label);
    }
    for (int t = 0; t < T; ++t) batch.xs.push_back(increment_column_block<Scalar>(seqs, t));
    batch.final = final_column_block<Scalar>(finals);
    return batch;
}

/// Dropout switch for one forward pass; rng == nullptr means inference.
struct DropoutSpec {
    double keep = 1.0;
    Rng* rng = nullptr;

    bool active() const { return rng != nullptr && keep < 1.0; }
};

/// One of the two networks: two stacked LSTMs, then the evaluation layer
/// (ReLU units fed with ReL(h2_T), plus the final increment for network 2)
/// and a logistic output unit.
template <typename Scalar>
class DecoderNetwork {
   public:
    using Mat = nn::Matrix<Scalar>;
    using Lstm = nn::Lstm<Scalar>;

    struct State {
        typename Lstm::State s1, s2;
    };

    /// Forward values kept for backpropagation.
    struct Tape {
        std::vector<typename Lstm::Cache> c1, c2;
        std::vector<Mat> mask1;
        Mat h2, mask2, eval_in, eval_out, mask_e, out_in, p;
    };

    DecoderNetwork() = default;
    DecoderNetwork(int hidden, int eval_units, int final_bits)
        : lstm1(kIncrementBits, hidden),
          lstm2(hidden, hidden),
          eval(hidden + final_bits, eval_units, nn::Activation::Relu),
          out(eval_units, 1, nn::Activation::Logistic),
          final_bits_(final_bits) {}

    int final_bits() const { return final_bits_; }
    int hidden() const { return lstm1.hidden(); }

    void init(Rng& rng) {
        lstm1.init(rng);
        lstm2.init(rng);
        eval.init(rng);
        out.init(rng);
        out.b.setConstant(static_cast<Scalar>(kOutputBiasInit));
    }

    State zero_state(Eigen::Index batch) const { return {lstm1.zero_state(batch), lstm2.zero_state(batch)}; }

    void advance(State& s, const Mat& x) const {
        s.s1 = lstm1.step(x, s.s1);
        s.s2 = lstm2.step(s.s1.h, s.s2);
    }

    /// Output probability from the current state; `final` is ignored by
    /// network 1.
    Mat readout(const State& s, const Mat& final) const {
        return out.forward(eval.forward(evaluation_input(s.s2.h, final)));
    }

    /// Training-mode forward over xs[begin..end) from a zero state.
    Mat forward(const std::vector<Mat>& xs, size_t begin, const Mat& final, const DropoutSpec& drop,
                Tape& tape) const {
        const Eigen::Index B = final.cols();
        const size_t steps = xs.size() - begin;
        tape.c1.resize(steps);
        tape.c2.resize(steps);
        tape.mask1.assign(steps, Mat());
        State s = zero_state(B);
        for (size_t k = 0; k < steps; ++k) {
            s.s1 = lstm1.step(xs[begin + k], s.s1, &tape.c1[k]);
            if (drop.active()) {
                tape.mask1[k] = nn::dropout_mask<Scalar>(s.s1.h.rows(), B, drop.keep, *drop.rng);
                s.s2 = lstm2.step(s.s1.h.cwiseProduct(tape.mask1[k]), s.s2, &tape.c2[k]);
            } else {
                s.s2 = lstm2.step(s.s1.h, s.s2, &tape.c2[k]);
            }
        }
        tape.h2 = s.s2.h;
        if (drop.active()) {
            tape.mask2 = nn::dropout_mask<Scalar>(tape.h2.rows(), B, drop.keep, *drop.rng);
            tape.h2 = tape.h2.cwiseProduct(tape.mask2);
        } else {
            tape.mask2.resize(0, 0);
        }
        tape.eval_in = evaluation_input(tape.h2, final);
        tape.eval_out = eval.forward(tape.eval_in);
        if (drop.active()) {
            tape.mask_e = nn::dropout_mask<Scalar>(tape.eval_out.rows(), B, drop.keep, *drop.rng);
            tape.out_in = tape.eval_out.cwiseProduct(tape.mask_e);
        } else {
            tape.mask_e.resize(0, 0);
            tape.out_in = tape.eval_out;
        }
        tape.p = out.forward(tape.out_in);
        return tape.p;
    }

    /// Accumulates parameter gradients for dL/dp = dp (1 x B).
    void backward(const Tape& tape, const Mat& dp) {
        Mat d_out_in = out.backward(tape.out_in, tape.p, dp);
        if (tape.mask_e.size()) d_out_in = d_out_in.cwiseProduct(tape.mask_e);
        const Mat d_eval_in = eval.backward(tape.eval_in, tape.eval_out, d_out_in);
        const int H = hidden();
        Mat dh2 = (tape.h2.array() > Scalar(0)).select(d_eval_in.topRows(H), Scalar(0));
        if (tape.mask2.size()) dh2 = dh2.cwiseProduct(tape.mask2);

        const Eigen::Index B = dp.cols();
        Mat dc2 = Mat::Zero(H, B), dh1 = Mat::Zero(H, B), dc1 = Mat::Zero(H, B);
        Mat dx2, dh2p, dc2p, dx1, dh1p, dc1p;
        for (size_t k = tape.c1.size(); k-- > 0;) {
            lstm2.step_backward(tape.c2[k], dh2, dc2, dx2, dh2p, dc2p);
            if (tape.mask1[k].size()) dx2 = dx2.cwiseProduct(tape.mask1[k]);
            dh1 += dx2;
            lstm1.step_backward(tape.c1[k], dh1, dc1, dx1, dh1p, dc1p);
            dh2.swap(dh2p);
            dc2.swap(dc2p);
            dh1.swap(dh1p);
            dc1.swap(dc1p);
        }
    }

    template <typename F>
    void visit(const std::string& prefix, F&& f) {
        lstm1.visit(prefix + "lstm1.", f);
        lstm2.visit(prefix + "lstm2.", f);
        eval.visit(prefix + "eval.", f);
        out.visit(prefix + "out.", f);
    }

    Lstm lstm1, lstm2;
    nn::Dense<Scalar> eval, out;

   private:
    Mat evaluation_input(const Mat& h2, const Mat& final) const {
        Mat in(h2.rows() + final_bits_, h2.cols());
        in.topRows(h2.rows()) = h2.cwiseMax(Scalar(0));
        if (final_bits_) {
            if (final.rows() != final_bits_ || final.cols() != h2.cols()) {
                throw std::invalid_argument("decoder: final increment shape mismatch");
            }
            in.bottomRows(final_bits_) = final;
        }
        return in;
    }

    int final_bits_ = 0;
};

struct DecoderOutput {
    double p1 = 0, p2 = 0, p = 0;
};

/// Two-network decoder for one basis. Network 1 reads all increments;
/// network 2 reads the last `window` increments and the final increment.
template <typename Scalar>
class BasicDecoderModel {
   public:
    using Mat = nn::Matrix<Scalar>;
    using Network = DecoderNetwork<Scalar>;

    BasicDecoderModel() : BasicDecoderModel(64, 64, kDefaultWindow) {}
    BasicDecoderModel(int hidden, int eval_units, int window, Basis basis = Basis::Z)
        : net1(hidden, eval_units, 0), net2(hidden, eval_units, kFinalBits), window_(window), basis_(basis) {
        if (hidden < 1 || eval_units < 1 || window < 1) throw std::invalid_argument("decoder: bad dimensions");
    }

    int window() const { return window_; }
    Basis basis() const { return basis_; }
    int hidden() const { return net1.hidden(); }
    int eval_units() const { return net1.eval.outputs(); }

    void init(Rng& rng) {
        net1.init(rng);
        net2.init(rng);
    }

    void check_length(int T) const {
        if (T < window_) {
            throw std::invalid_argument("decoder: needs at least " + std::to_string(window_) + " cycles, got " +
                                        std::to_string(T));
        }
    }

    /// Inference on a batch of equally long sequences.
    std::vector<DecoderOutput> forward(const DecoderBatch<Scalar>& batch) const {
        const int T = static_cast<int>(batch.xs.size());
        check_length(T);
        typename Network::State s1 = net1.zero_state(batch.size());
        for (int t = 0; t < T; ++t) net1.advance(s1, batch.xs[t]);
        typename Network::State s2 = net2.zero_state(batch.size());
        for (int t = T - window_; t < T; ++t) net2.advance(s2, batch.xs[t]);
        return combine_outputs(net1.readout(s1, batch.final), net2.readout(s2, batch.final));
    }

    DecoderOutput forward(const SyndromeSequence& seq) const { return forward(make_batch<Scalar>({&seq})).front(); }

    /// p >= 0.5 decodes to odd.
    uint8_t decode(const SyndromeSequence& seq) const { return forward(seq).p >= 0.5 ? 1 : 0; }

    /// Mean cross-entropy of the combined output over the batch; accumulates
    /// parameter gradients (without weight decay).
    double loss_and_gradient(const DecoderBatch<Scalar>& batch, const DropoutSpec& drop) {
        const int T = static_cast<int>(batch.xs.size());
        check_length(T);
        typename Network::Tape tape1, tape2;
        const Mat p1 = net1.forward(batch.xs, 0, batch.final, drop, tape1);
        const Mat p2 = net2.forward(batch.xs, static_cast<size_t>(T - window_), batch.final, drop, tape2);
        const Eigen::Index B = batch.size();
        Mat dp1(1, B), dp2(1, B);
        double total = 0;
        for (Eigen::Index b = 0; b < B; ++b) {
            const double a = p1(0, b), c = p2(0, b);
            const double p = combine(a, c);
            total += nn::cross_entropy(p, batch.labels[b]);
            const double g = nn::cross_entropy_grad(p, batch.labels[b]) / static_cast<double>(B);
            dp1(0, b) = static_cast<Scalar>(g * (1 - 2 * c));
            dp2(0, b) = static_cast<Scalar>(g * (1 - 2 * a));
        }
        net1.backward(tape1, dp1);
        net2.backward(tape2, dp2);
        return total / static_cast<double>(B);
    }

    /// Parameters under L2 decay: weights of the evaluation and output layers.
    std::vector<const Mat*> decayed_weights() const { return {&net1.eval.W, &net1.out.W, &net2.eval.W, &net2.out.W}; }

    /// Adds the gradient of decay * sum(w^2) over decayed_weights().
    void add_decay_gradient(double decay) {
        const Scalar k = static_cast<Scalar>(2 * decay);
        net1.eval.dW += k * net1.eval.W;
        net1.out.dW += k * net1.out.W;
        net2.eval.dW += k * net2.eval.W;
        net2.out.dW += k * net2.out.W;
    }

    void zero_gradients() {
        visit("", [](const std::string&, Mat&, Mat& g) { g.setZero(); });
    }

    template <typename F>
    void visit(const std::string& prefix, F&& f) {
        net1.visit(prefix + "net1.", f);
        net2.visit(prefix + "net2.", f);
    }

    template <typename Other>
    BasicDecoderModel<Other> cast() const {
        BasicDecoderModel<Other> m(hidden(), eval_units(), window_, basis_);
        m.config = config;
        m.info = info;
        auto& self = const_cast<BasicDecoderModel&>(*this);
        std::vector<const Mat*> src;
        self.visit("", [&](const std::string&, Mat& v, Mat&) { src.push_back(&v); });
        size_t k = 0;
        m.visit("", [&](const std::string&, nn::Matrix<Other>& v, nn::Matrix<Other>&) { v = src[k++]->template cast<Other>(); });
        return m;
    }

    Network net1, net2;
    TrainConfig config;
    TrainingInfo info;

   private:
    static std::vector<DecoderOutput> combine_outputs(const Mat& p1, const Mat& p2) {
        std::vector<DecoderOutput> outs(static_cast<size_t>(p1.cols()));
        for (Eigen::Index b = 0; b < p1.cols(); ++b) {
            const double a = p1(0, b), c = p2(0, b);
            outs[b] = {a, c, combine(a, c)};
        }
        return outs;
    }

    int window_ = kDefaultWindow;
    Basis basis_ = Basis::Z;
};

using DecoderModel = BasicDecoderModel<float>;

/// Combined probabilities at each cycle in `points` for sequences with
/// per-cycle records. Network 1 streams once over the sequence; network 2
/// re-reads the window ending at each point with that cycle's final
/// increment. Result[b][k] belongs to seqs[b] at points[k]. All sequences
/// must share one length.
std::vector<std::vector<double>> curve_probabilities(const DecoderModel& model,
                                                     const std::vector<const SyndromeSequence*>& seqs,
                                                     const std::vector<int>& points);

/// Fraction of sequences whose decoded parity differs from the label.
double logical_error_rate(const DecoderModel& model, const std::vector<SyndromeSequence>& seqs, int threads = 1);

/// Combined output probability of every sequence, in input order.
std::vector<double> predict(const DecoderModel& model, const std::vector<SyndromeSequence>& seqs, int threads = 1);

using EpochCallback = std::function<void(int restart, const EpochRecord&)>;

/// One training run from a fresh initialization seeded by `seed`; returns
/// the checkpoint with the lowest validation error. Throws
/// std::invalid_argument on empty datasets and NumericError on a non-finite
/// loss.
DecoderModel train_single(const TrainConfig& config, const std::vector<SyndromeSequence>& train_set,
                          const std::vector<SyndromeSequence>& validation_set, Basis basis, uint64_t seed,
                          int restart = 0, const EpochCallback& on_epoch = {});

/// Lowest validation error; ties go to the earliest entry. Throws
/// std::invalid_argument on an empty list.
size_t select_best(const std::vector<DecoderModel>& models, const std::vector<SyndromeSequence>& validation_set);

/// `config.restarts` runs seeded from config.seed, then select_best.
DecoderModel train(const TrainConfig& config, const std::vector<SyndromeSequence>& train_set,
                   const std::vector<SyndromeSequence>& validation_set, Basis basis,
                   const EpochCallback& on_epoch = {});

/// Checkpoint: tensor archive with the config, training history and
/// architecture as JSON metadata. Throws DataError on I/O or format errors.
void save_checkpoint(const DecoderModel& model, const std::string& path);
DecoderModel load_checkpoint(const std::string& path);
std::string checkpoint_metadata(const DecoderModel& model);

}  // namespace s17

#endif  // S17_RECURRENT_DECODER_HPP_
