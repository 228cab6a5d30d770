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

#ifndef S17_EVALUATION_HPP_
#define S17_EVALUATION_HPP_

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "s17/matching_decoder.hpp"
#include "s17/pauli_sim.hpp"
#include "s17/recurrent_decoder.hpp"

namespace s17 {

inline constexpr int kDefaultResamples = 1000;

/// Evaluation cycles t_n = 2 + n(n+1)/2 <= T: 3, 5, 8, 12, 17, ...
/// Throws std::invalid_argument if T < 3.
std::vector<int> t_points(int T);

/// Predicted parity of each sequence at each evaluation cycle:
/// out[b][k] for seqs[b] truncated after points[k]. Sequences share a length.
using CurvePredictor = std::function<std::vector<std::vector<uint8_t>>(
    const std::vector<const SyndromeSequence*>& seqs, const std::vector<int>& points)>;

struct CurveDecoder {
    std::string name;
    CurvePredictor predict;
};

/// Decodes every truncated sequence from scratch with MWPM.
CurveDecoder blossom_curve_decoder(const MatchingDecoder& decoder);
/// Streams network 1 once per sequence and reruns network 2 at each point.
CurveDecoder neural_curve_decoder(const DecoderModel& model);

/// Per-sequence correctness at each evaluation cycle.
struct CorrectnessTable {
    std::string decoder;
    std::vector<int> points;
    int64_t n_sequences = 0;
    // Row-major: correct[b * points.size() + k].
    std::vector<uint8_t> correct;

    uint8_t at(int64_t b, size_t k) const { return correct[b * points.size() + k]; }
    double fidelity(size_t k) const;
};

/// Throws std::invalid_argument if a sequence lacks per-cycle labels or the
/// sequences differ in length.
CorrectnessTable score(const CurveDecoder& decoder, const std::vector<SyndromeSequence>& test_set,
                       const std::vector<int>& points, int threads = 1);

/// Standard deviation of the mean of `bits` over bootstrap resamples.
/// Throws std::invalid_argument if bits is empty or resamples < 100.
double bootstrap_sigma(const std::vector<uint8_t>& bits, int resamples = kDefaultResamples, uint64_t seed = 1);

struct FidelityPoint {
    int t = 0;
    double fidelity = 0;
    double sigma = 0;
};

struct FidelityCurve {
    std::string decoder;
    int64_t n_sequences = 0;
    std::vector<FidelityPoint> points;
};

/// Fidelity and bootstrap sigma at every evaluation cycle.
FidelityCurve fidelity_curve(const CorrectnessTable& table, int resamples = kDefaultResamples, uint64_t seed = 1);

/// Scores and summarizes in one call.
FidelityCurve fidelity_curve(const CurveDecoder& decoder, const std::vector<SyndromeSequence>& test_set,
                             const std::vector<int>& points, int threads = 1, int resamples = kDefaultResamples,
                             uint64_t seed = 1);

/// F(t) = 1/2 + 1/2 (1 - 2 epsilon)^(t - t0).
double decay_model(double epsilon, double t0, double t);

struct DecayFit {
    double epsilon = 0;
    double t0 = 0;
    // Standard errors from the curvature of the objective.
    double sigma_epsilon = 0;
    double sigma_t0 = 0;
    double covariance = 0;
    // epsilon +- 3 sigma_epsilon, clipped to [0, 0.5].
    double epsilon_ci_low = 0;
    double epsilon_ci_high = 0;
    double chi2 = 0;
    std::vector<double> residuals;
    bool weighted = false;
    // All points at 1/2: epsilon reported as 0.5.
    bool degenerate = false;
    // epsilon at its lower bound 0: t0 unidentifiable, reported as 0.
    bool epsilon_at_zero = false;
};

/// Least squares fit of decay_model, weighted by 1/sigma^2 unless some sigma
/// is 0. Profile search over epsilon (golden section, amplitude in closed
/// form) followed by Gauss-Newton polishing of (epsilon, t0). Throws
/// std::invalid_argument with fewer than 3 points.
DecayFit fit_decay(const FidelityCurve& curve);

/// Fit with the weights of `weights_from`, on the fidelities in `table`
/// restricted to the sequence indices in `rows`.
DecayFit fit_resampled(const CorrectnessTable& table, const std::vector<int64_t>& rows,
                       const FidelityCurve& weights_from);

/// Bootstrap standard deviation of the fitted epsilon.
double epsilon_bootstrap_sigma(const CorrectnessTable& table, const FidelityCurve& curve, int resamples = 200,
                               uint64_t seed = 1);

struct PairedComparison {
    double delta = 0;  // epsilon(a) - epsilon(b) on the full set
    double sigma = 0;  // bootstrap sigma of delta, resampling sequences jointly
};

/// Paired bootstrap over sequences shared by both tables.
PairedComparison paired_epsilon_difference(const CorrectnessTable& a, const FidelityCurve& curve_a,
                                           const CorrectnessTable& b, const FidelityCurve& curve_b,
                                           int resamples = 200, uint64_t seed = 1);

/// epsilon_opt / epsilon_decoder. Throws std::invalid_argument unless both > 0.
double decoder_efficiency(double epsilon_opt, double epsilon_decoder);

/// 1 - epsilon_nn / epsilon_blossom. Throws std::invalid_argument unless
/// epsilon_blossom > 0.
double relative_improvement(double epsilon_nn, double epsilon_blossom);

/// CSV writers; every table starts with a header line.
void write_curve_csv(std::ostream& os, const FidelityCurve& curve);
void write_fits_header(std::ostream& os);
void write_fit_row(std::ostream& os, const std::string& decoder, const DecayFit& fit);

}  // namespace s17

#endif  // S17_EVALUATION_HPP_
