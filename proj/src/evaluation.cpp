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

#include "s17/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "s17/parallel.hpp"
#include "s17/rng.hpp"

namespace s17 {

namespace {

constexpr size_t kScoreChunk = 128;
constexpr double kEpsilonMax = 0.5 - 1e-9;

/// Weighted points of one curve, centered: y = F - 1/2.
struct FitData {
    std::vector<double> t, y, w;
    bool weighted = false;
};

FitData fit_data(const FidelityCurve& curve) {
    FitData d;
    d.weighted = true;
    for (const FidelityPoint& p : curve.points) d.weighted = d.weighted && p.sigma > 0;
    for (const FidelityPoint& p : curve.points) {
        d.t.push_back(p.t);
        d.y.push_back(p.fidelity - 0.5);
        d.w.push_back(d.weighted ? 1 / (p.sigma * p.sigma) : 1.0);
    }
    return d;
}

/// Best amplitude A of y = A/2 r^t for fixed r, and the resulting chi2.
std::pair<double, double> profile(const FitData& d, double epsilon) {
    const double r = 1 - 2 * epsilon;
    double num = 0, den = 0;
    for (size_t i = 0; i < d.t.size(); ++i) {
        const double g = 0.5 * std::pow(r, d.t[i]);
        num += d.w[i] * d.y[i] * g;
        den += d.w[i] * g * g;
    }
    const double A = den > 0 ? std::max(num / den, std::numeric_limits<double>::min()) : 1.0;
    double chi2 = 0;
    for (size_t i = 0; i < d.t.size(); ++i) {
        const double e = d.y[i] - A * 0.5 * std::pow(r, d.t[i]);
        chi2 += d.w[i] * e * e;
    }
    return {A, chi2};
}

double chi2_at(const FitData& d, double epsilon, double t0) {
    double chi2 = 0;
    for (size_t i = 0; i < d.t.size(); ++i) {
        const double e = d.y[i] + 0.5 - decay_model(epsilon, t0, d.t[i]);
        chi2 += d.w[i] * e * e;
    }
    return chi2;
}

/// Golden-section minimum of the profile chi2 on [lo, hi].
double golden_section(const FitData& d, double lo, double hi) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - g * (b - a), e = a + g * (b - a);
    double fc = profile(d, c).second, fe = profile(d, e).second;
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        if (fc < fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = profile(d, c).second;
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = profile(d, e).second;
        }
    }
    return (a + b) / 2;
}

/// Jacobian rows of the model with respect to (epsilon, t0).
void jacobian(double epsilon, double t0, double t, double& de, double& dt0) {
    const double r = 1 - 2 * epsilon;
    const double v = std::pow(r, t - t0);
    de = -(t - t0) * v / r;
    dt0 = -0.5 * v * std::log(r);
}

/// Damped Gauss-Newton on (epsilon, t0) from a profile solution.
void polish(const FitData& d, double& epsilon, double& t0) {
    double lambda = 1e-6;
    double current = chi2_at(d, epsilon, t0);
    for (int it = 0; it < 200; ++it) {
        Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
        Eigen::Vector2d g = Eigen::Vector2d::Zero();
        for (size_t i = 0; i < d.t.size(); ++i) {
            double je, jt;
            jacobian(epsilon, t0, d.t[i], je, jt);
            const double res = d.y[i] + 0.5 - decay_model(epsilon, t0, d.t[i]);
            const Eigen::Vector2d j(je, jt);
            H += d.w[i] * j * j.transpose();
            g += d.w[i] * res * j;
        }
        if (g.norm() < 1e-10 * std::max(1.0, H.norm())) break;
        bool improved = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::Matrix2d Hd = H;
            Hd.diagonal() *= 1 + lambda;
            const Eigen::Vector2d step = Hd.ldlt().solve(g);
            const double e2 = std::clamp(epsilon + step(0), 0.0, kEpsilonMax);
            const double t2 = t0 + step(1);
            const double next = chi2_at(d, e2, t2);
            if (std::isfinite(next) && next <= current) {
                const bool tiny = std::abs(e2 - epsilon) <= 1e-16 * std::max(epsilon, 1e-300) &&
                                  std::abs(t2 - t0) <= 1e-15 * std::max(1.0, std::abs(t0));
                epsilon = e2;
                t0 = t2;
                current = next;
                lambda = std::max(lambda / 10, 1e-12);
                improved = !tiny;
                break;
            }
            lambda *= 10;
        }
        if (!improved) break;
    }
}

std::vector<double> resampled_fidelity(const CorrectnessTable& table, const std::vector<int64_t>& rows) {
    const size_t K = table.points.size();
    std::vector<int64_t> hits(K, 0);
    for (int64_t b : rows) {
        const uint8_t* row = &table.correct[b * K];
        for (size_t k = 0; k < K; ++k) hits[k] += row[k];
    }
    std::vector<double> f(K);
    for (size_t k = 0; k < K; ++k) f[k] = static_cast<double>(hits[k]) / static_cast<double>(rows.size());
    return f;
}

std::vector<int64_t> resample_rows(int64_t n, Rng& rng) {
    std::vector<int64_t> rows(n);
    for (auto& r : rows) r = rng.uniform_int(0, n - 1);
    return rows;
}

void check_tables_match(const CorrectnessTable& a, const CorrectnessTable& b) {
    if (a.points != b.points || a.n_sequences != b.n_sequences) {
        throw std::invalid_argument("paired comparison needs tables over the same sequences and points");
    }
}

}  // namespace

std::vector<int> t_points(int T) {
    if (T < 3) throw std::invalid_argument("t_points: T must be >= 3, got " + std::to_string(T));
    std::vector<int> out;
    for (int n = 1;; ++n) {
        const int t = 2 + n * (n + 1) / 2;
        if (t > T) break;
        out.push_back(t);
    }
    return out;
}

CurveDecoder blossom_curve_decoder(const MatchingDecoder& decoder) {
    return {"blossom", [&decoder](const std::vector<const SyndromeSequence*>& seqs, const std::vector<int>& points) {
                std::vector<std::vector<uint8_t>> out(seqs.size(), std::vector<uint8_t>(points.size()));
                for (size_t b = 0; b < seqs.size(); ++b) {
                    for (size_t k = 0; k < points.size(); ++k) {
                        out[b][k] = decoder.decode(truncated(*seqs[b], points[k]));
                    }
                }
                return out;
            }};
}

CurveDecoder neural_curve_decoder(const DecoderModel& model) {
    return {"nn", [&model](const std::vector<const SyndromeSequence*>& seqs, const std::vector<int>& points) {
                const auto p = curve_probabilities(model, seqs, points);
                std::vector<std::vector<uint8_t>> out(seqs.size(), std::vector<uint8_t>(points.size()));
                for (size_t b = 0; b < seqs.size(); ++b) {
                    for (size_t k = 0; k < points.size(); ++k) out[b][k] = p[b][k] >= 0.5 ? 1 : 0;
                }
                return out;
            }};
}

double CorrectnessTable::fidelity(size_t k) const {
    int64_t hits = 0;
    for (int64_t b = 0; b < n_sequences; ++b) hits += at(b, k);
    return static_cast<double>(hits) / static_cast<double>(n_sequences);
}

CorrectnessTable score(const CurveDecoder& decoder, const std::vector<SyndromeSequence>& test_set,
                       const std::vector<int>& points, int threads) {
    if (test_set.empty()) throw std::invalid_argument("score: empty test set");
    for (const SyndromeSequence& s : test_set) {
        if (!s.has_cycle_labels()) throw std::invalid_argument("score: test set lacks per-cycle labels");
        if (s.cycles != test_set.front().cycles) throw std::invalid_argument("score: sequences differ in length");
    }
    for (size_t k = 0; k < points.size(); ++k) {
        if (points[k] < 1 || points[k] > test_set.front().cycles || (k && points[k] <= points[k - 1])) {
            throw std::invalid_argument("score: evaluation points must increase within 1..T");
        }
    }
    CorrectnessTable table;
    table.decoder = decoder.name;
    table.points = points;
    table.n_sequences = static_cast<int64_t>(test_set.size());
    table.correct.assign(test_set.size() * points.size(), 0);
    const size_t chunks = (test_set.size() + kScoreChunk - 1) / kScoreChunk;
    parallel_for(chunks, threads, [&](size_t c) {
        std::vector<const SyndromeSequence*> seqs;
        for (size_t b = c * kScoreChunk; b < std::min(test_set.size(), (c + 1) * kScoreChunk); ++b) {
            seqs.push_back(&test_set[b]);
        }
        const auto parity = decoder.predict(seqs, points);
        for (size_t i = 0; i < seqs.size(); ++i) {
            const size_t b = c * kScoreChunk + i;
            for (size_t k = 0; k < points.size(); ++k) {
                table.correct[b * points.size() + k] = parity[i][k] == seqs[i]->labels_by_cycle[points[k] - 1];
            }
        }
    });
    return table;
}

double bootstrap_sigma(const std::vector<uint8_t>& bits, int resamples, uint64_t seed) {
    if (bits.empty()) throw std::invalid_argument("bootstrap_sigma: no samples");
    if (resamples < 100) throw std::invalid_argument("bootstrap_sigma: need at least 100 resamples");
    Rng rng(seed);
    const int64_t n = static_cast<int64_t>(bits.size());
    double sum = 0, sum2 = 0;
    for (int r = 0; r < resamples; ++r) {
        int64_t hits = 0;
        for (int64_t i = 0; i < n; ++i) hits += bits[rng.uniform_int(0, n - 1)];
        const double m = static_cast<double>(hits) / static_cast<double>(n);
        sum += m;
        sum2 += m * m;
    }
    const double mean = sum / resamples;
    return std::sqrt(std::max(0.0, sum2 / resamples - mean * mean));
}

FidelityCurve fidelity_curve(const CorrectnessTable& table, int resamples, uint64_t seed) {
    FidelityCurve curve;
    curve.decoder = table.decoder;
    curve.n_sequences = table.n_sequences;
    std::vector<uint8_t> bits(table.n_sequences);
    for (size_t k = 0; k < table.points.size(); ++k) {
        for (int64_t b = 0; b < table.n_sequences; ++b) bits[b] = table.at(b, k);
        curve.points.push_back({table.points[k], table.fidelity(k), bootstrap_sigma(bits, resamples, derive_seed(seed, k))});
    }
    return curve;
}

FidelityCurve fidelity_curve(const CurveDecoder& decoder, const std::vector<SyndromeSequence>& test_set,
                             const std::vector<int>& points, int threads, int resamples, uint64_t seed) {
    return fidelity_curve(score(decoder, test_set, points, threads), resamples, seed);
}

double decay_model(double epsilon, double t0, double t) { return 0.5 + 0.5 * std::pow(1 - 2 * epsilon, t - t0); }

DecayFit fit_decay(const FidelityCurve& curve) {
    if (curve.points.size() < 3) throw std::invalid_argument("fit_decay: need at least 3 points");
    const FitData d = fit_data(curve);
    DecayFit fit;
    fit.weighted = d.weighted;

    bool flat_half = true;
    for (double y : d.y) flat_half = flat_half && std::abs(y) < 1e-12;
    if (flat_half) {
        fit.degenerate = true;
        fit.epsilon = 0.5;
        fit.epsilon_ci_low = fit.epsilon_ci_high = 0.5;
        for (size_t i = 0; i < d.y.size(); ++i) fit.residuals.push_back(d.y[i]);
        return fit;
    }

    // Coarse log grid to bracket the profile minimum, then golden section.
    std::vector<double> grid{0.0};
    for (int k = 0; k <= 400; ++k) grid.push_back(std::min(kEpsilonMax, 1e-8 * std::pow(0.5e8, k / 400.0)));
    size_t best = 0;
    double best_chi2 = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < grid.size(); ++k) {
        const double c = profile(d, grid[k]).second;
        if (c < best_chi2) {
            best_chi2 = c;
            best = k;
        }
    }
    double epsilon = grid[best];
    if (best > 0) {
        epsilon = golden_section(d, grid[best - 1], grid[std::min(best + 1, grid.size() - 1)]);
        if (profile(d, 0.0).second <= profile(d, epsilon).second) epsilon = 0;
    }

    if (epsilon == 0) {
        fit.epsilon_at_zero = true;
        fit.t0 = 0;
    } else {
        const double A = profile(d, epsilon).first;
        fit.t0 = -std::log(A) / std::log(1 - 2 * epsilon);
        polish(d, epsilon, fit.t0);
    }
    fit.epsilon = epsilon;
    fit.chi2 = chi2_at(d, epsilon, fit.t0);
    for (size_t i = 0; i < d.t.size(); ++i) fit.residuals.push_back(d.y[i] + 0.5 - decay_model(epsilon, fit.t0, d.t[i]));

    if (!fit.epsilon_at_zero) {
        Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
        for (size_t i = 0; i < d.t.size(); ++i) {
            double je, jt;
            jacobian(epsilon, fit.t0, d.t[i], je, jt);
            const Eigen::Vector2d j(je, jt);
            H += d.w[i] * j * j.transpose();
        }
        Eigen::Matrix2d cov = H.inverse();
        if (!d.weighted && d.t.size() > 2) cov *= fit.chi2 / static_cast<double>(d.t.size() - 2);
        if (cov.allFinite()) {
            fit.sigma_epsilon = std::sqrt(std::max(0.0, cov(0, 0)));
            fit.sigma_t0 = std::sqrt(std::max(0.0, cov(1, 1)));
            fit.covariance = cov(0, 1);
        }
    }
    fit.epsilon_ci_low = std::max(0.0, fit.epsilon - 3 * fit.sigma_epsilon);
    fit.epsilon_ci_high = std::min(0.5, fit.epsilon + 3 * fit.sigma_epsilon);
    return fit;
}

DecayFit fit_resampled(const CorrectnessTable& table, const std::vector<int64_t>& rows,
                       const FidelityCurve& weights_from) {
    if (weights_from.points.size() != table.points.size()) {
        throw std::invalid_argument("fit_resampled: curve and table disagree on points");
    }
    FidelityCurve c = weights_from;
    const std::vector<double> f = resampled_fidelity(table, rows);
    for (size_t k = 0; k < f.size(); ++k) c.points[k].fidelity = f[k];
    return fit_decay(c);
}

double epsilon_bootstrap_sigma(const CorrectnessTable& table, const FidelityCurve& curve, int resamples,
                               uint64_t seed) {
    if (resamples < 2) throw std::invalid_argument("epsilon_bootstrap_sigma: need at least 2 resamples");
    Rng rng(seed);
    double sum = 0, sum2 = 0;
    for (int r = 0; r < resamples; ++r) {
        const double e = fit_resampled(table, resample_rows(table.n_sequences, rng), curve).epsilon;
        sum += e;
        sum2 += e * e;
    }
    const double mean = sum / resamples;
    return std::sqrt(std::max(0.0, sum2 / resamples - mean * mean));
}

PairedComparison paired_epsilon_difference(const CorrectnessTable& a, const FidelityCurve& curve_a,
                                           const CorrectnessTable& b, const FidelityCurve& curve_b, int resamples,
                                           uint64_t seed) {
    check_tables_match(a, b);
    if (resamples < 2) throw std::invalid_argument("paired_epsilon_difference: need at least 2 resamples");
    PairedComparison out;
    out.delta = fit_decay(curve_a).epsilon - fit_decay(curve_b).epsilon;
    Rng rng(seed);
    double sum = 0, sum2 = 0;
    for (int r = 0; r < resamples; ++r) {
        const std::vector<int64_t> rows = resample_rows(a.n_sequences, rng);
        const double delta = fit_resampled(a, rows, curve_a).epsilon - fit_resampled(b, rows, curve_b).epsilon;
        sum += delta;
        sum2 += delta * delta;
    }
    const double mean = sum / resamples;
    out.sigma = std::sqrt(std::max(0.0, sum2 / resamples - mean * mean));
    return out;
}

double decoder_efficiency(double epsilon_opt, double epsilon_decoder) {
    if (!(epsilon_opt > 0) || !(epsilon_decoder > 0)) {
        throw std::invalid_argument("decoder_efficiency: error rates must be positive");
    }
    return epsilon_opt / epsilon_decoder;
}

double relative_improvement(double epsilon_nn, double epsilon_blossom) {
    if (!(epsilon_blossom > 0)) throw std::invalid_argument("relative_improvement: blossom rate must be positive");
    return 1 - epsilon_nn / epsilon_blossom;
}

void write_curve_csv(std::ostream& os, const FidelityCurve& curve) {
    os << "t,fidelity,sigma3\n";
    char buf[96];
    for (const FidelityPoint& p : curve.points) {
        std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g\n", p.t, p.fidelity, 3 * p.sigma);
        os << buf;
    }
}

void write_fits_header(std::ostream& os) { os << "decoder,epsilon,t0,epsilon_ci_low,epsilon_ci_high\n"; }

void write_fit_row(std::ostream& os, const std::string& decoder, const DecayFit& fit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, ",%.10g,%.10g,%.10g,%.10g\n", fit.epsilon, fit.t0, fit.epsilon_ci_low,
                  fit.epsilon_ci_high);
    os << decoder << buf;
}

}  // namespace s17
