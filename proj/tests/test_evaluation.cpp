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

#include "doctest.h"
#include "s17/evaluation.hpp"

using namespace s17;

namespace {

FidelityCurve synthetic_curve(double epsilon, double t0, const std::vector<int>& ts, double sigma = 0) {
    FidelityCurve c;
    c.decoder = "synthetic";
    for (int t : ts) c.points.push_back({t, decay_model(epsilon, t0, t), sigma});
    return c;
}

std::vector<SyndromeSequence> test_set(const ErrorParams& p, int count, int T, uint64_t seed) {
    const CodeLayout layout = build_surface17();
    std::vector<SyndromeSequence> out;
    for (int i = 0; i < count; ++i) out.push_back(run_experiment(layout, T, p, derive_seed(seed, i), true));
    return out;
}

CurveDecoder constant_decoder(uint8_t parity) {
    return {"const", [parity](const std::vector<const SyndromeSequence*>& seqs, const std::vector<int>& points) {
                return std::vector<std::vector<uint8_t>>(seqs.size(), std::vector<uint8_t>(points.size(), parity));
            }};
}

CurveDecoder oracle_decoder() {
    return {"oracle", [](const std::vector<const SyndromeSequence*>& seqs, const std::vector<int>& points) {
                std::vector<std::vector<uint8_t>> out(seqs.size());
                for (size_t b = 0; b < seqs.size(); ++b) {
                    for (int t : points) out[b].push_back(seqs[b]->labels_by_cycle[t - 1]);
                }
                return out;
            }};
}

CurveDecoder coin_decoder(uint64_t seed) {
    return {"coin", [seed](const std::vector<const SyndromeSequence*>& seqs, const std::vector<int>& points) {
                std::vector<std::vector<uint8_t>> out(seqs.size());
                for (size_t b = 0; b < seqs.size(); ++b) {
                    for (size_t k = 0; k < points.size(); ++k) {
                        out[b].push_back(counter_uniform(seed ^ seqs[b]->seed, k) < 0.5);
                    }
                }
                return out;
            }};
}

}  // namespace

TEST_CASE("t_points") {
    CHECK(t_points(3) == std::vector<int>{3});
    CHECK(t_points(12) == std::vector<int>{3, 5, 8, 12});
    CHECK(t_points(16) == std::vector<int>{3, 5, 8, 12});
    const std::vector<int> p300 = t_points(300);
    CHECK(p300.size() == 23);
    CHECK(p300[21] == 255);
    CHECK(p300.back() == 278);
    CHECK_THROWS_AS(t_points(2), std::invalid_argument);
}

TEST_CASE("bootstrap sigma") {
    CHECK(bootstrap_sigma(std::vector<uint8_t>(500, 1)) == 0);
    Rng rng(1);
    std::vector<uint8_t> fair(10000);
    for (auto& b : fair) b = rng.bernoulli(0.5);
    const double s = bootstrap_sigma(fair, 1000, 7);
    CHECK(s == doctest::Approx(0.005).epsilon(0.2));
    CHECK(bootstrap_sigma(fair, 1000, 7) == s);
    CHECK(bootstrap_sigma(fair, 1000, 8) != s);
    CHECK_THROWS_AS(bootstrap_sigma({}), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap_sigma(fair, 99), std::invalid_argument);
}

TEST_CASE("fit recovers exact decay curves") {
    const std::vector<int> ts = t_points(300);
    for (double eps : {1e-4, 1e-3, 1e-2}) {
        for (double t0 : {0.0, 2.0, 5.0}) {
            const DecayFit f = fit_decay(synthetic_curve(eps, t0, ts));
            CHECK(std::abs(f.epsilon - eps) < 1e-6);
            CHECK(std::abs(f.t0 - t0) < 1e-6);
            CHECK_FALSE(f.weighted);
            // Weighted by a realistic sigma profile.
            FidelityCurve c = synthetic_curve(eps, t0, ts);
            for (auto& p : c.points) p.sigma = std::sqrt(std::abs(p.fidelity * (1 - p.fidelity)) / 1e4) + 1e-4;
            const DecayFit w = fit_decay(c);
            CHECK(w.weighted);
            CHECK(std::abs(w.epsilon - eps) < 1e-6);
            CHECK(std::abs(w.t0 - t0) < 1e-6);
            CHECK(w.chi2 < 1e-12);
        }
    }
    const DecayFit f = fit_decay(synthetic_curve(0.002, 1.5, ts));
    CHECK(f.epsilon == doctest::Approx(0.002).epsilon(1e-6));
    CHECK(f.t0 == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("fit edge cases") {
    const std::vector<int> ts = t_points(100);
    const DecayFit flat = fit_decay(synthetic_curve(0, 0, ts));
    CHECK(flat.epsilon == 0);
    CHECK(flat.epsilon_at_zero);

    FidelityCurve half = synthetic_curve(0, 0, ts);
    for (auto& p : half.points) p.fidelity = 0.5;
    const DecayFit d = fit_decay(half);
    CHECK(d.degenerate);
    CHECK(d.epsilon == 0.5);

    CHECK_THROWS_AS(fit_decay(synthetic_curve(0.01, 0, {3, 5})), std::invalid_argument);
}

TEST_CASE("fit on noisy data reports a covering interval") {
    const std::vector<int> ts = t_points(300);
    Rng rng(3);
    int covered = 0;
    const int trials = 40;
    for (int k = 0; k < trials; ++k) {
        FidelityCurve c = synthetic_curve(0.003, 1.0, ts);
        for (auto& p : c.points) {
            p.sigma = std::sqrt(p.fidelity * (1 - p.fidelity) / 1e4);
            // Box-Muller draw.
            const double u1 = rng.uniform() + 1e-300, u2 = rng.uniform();
            p.fidelity += p.sigma * std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
        }
        const DecayFit f = fit_decay(c);
        CHECK(f.sigma_epsilon > 0);
        covered += f.epsilon_ci_low <= 0.003 && 0.003 <= f.epsilon_ci_high;
        for (size_t i = 0; i < c.points.size(); ++i) {
            CHECK(decay_model(f.epsilon, f.t0, c.points[i].t) >= 0.5 - 3 * c.points[i].sigma);
            CHECK(decay_model(f.epsilon, f.t0, c.points[i].t) <= 1.0);
        }
    }
    CHECK(covered >= trials - 2);
}

TEST_CASE("decoder efficiency and relative improvement") {
    CHECK(decoder_efficiency(0.003, 0.003) == 1.0);
    CHECK(decoder_efficiency(0.002, 0.004) == 0.5);
    CHECK_THROWS_AS(decoder_efficiency(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(decoder_efficiency(0.1, -1), std::invalid_argument);
    CHECK(relative_improvement(0.002, 0.004) == 0.5);
    CHECK_THROWS_AS(relative_improvement(0.002, 0), std::invalid_argument);
}

TEST_CASE("fidelity curves of reference decoders") {
    const std::vector<int> points = t_points(30);
    SUBCASE("perfect decoder on noiseless data") {
        const auto seqs = test_set(ErrorParams{}, 50, 30, 1);
        const CodeLayout layout = build_surface17();
        const MatchingDecoder md(layout, ErrorParams::reference(), Basis::Z, {{}, 30});
        for (const CurveDecoder& dec : {oracle_decoder(), blossom_curve_decoder(md), constant_decoder(0)}) {
            const FidelityCurve c = fidelity_curve(dec, seqs, points);
            for (const auto& p : c.points) {
                CHECK(p.fidelity == 1.0);
                CHECK(p.sigma == 0);
            }
        }
    }
    SUBCASE("coin flip decoder") {
        ErrorParams p;
        p.p_x = p.p_y = p.p_z = 0.01;
        p.p_m = 0.01;
        const auto seqs = test_set(p, 2000, 30, 2);
        const FidelityCurve c = fidelity_curve(coin_decoder(5), seqs, points, 2);
        for (const auto& pt : c.points) {
            CHECK(std::abs(pt.fidelity - 0.5) <= 3 * std::sqrt(0.25 / 2000));
            CHECK(pt.sigma == doctest::Approx(std::sqrt(0.25 / 2000)).epsilon(0.2));
        }
    }
    SUBCASE("bad inputs") {
        auto seqs = test_set(ErrorParams{}, 3, 10, 3);
        CHECK_THROWS_AS(score(oracle_decoder(), seqs, {3, 11}), std::invalid_argument);
        CHECK_THROWS_AS(score(oracle_decoder(), {}, {3}), std::invalid_argument);
        seqs[1].labels_by_cycle.clear();
        seqs[1].final_increments_by_cycle.clear();
        CHECK_THROWS_AS(score(oracle_decoder(), seqs, {3}), std::invalid_argument);
    }
}

TEST_CASE("scores are independent of the thread count") {
    ErrorParams p;
    p.p_x = p.p_y = p.p_z = 0.003;
    p.p_m = 0.005;
    const auto seqs = test_set(p, 300, 40, 4);
    const CodeLayout layout = build_surface17();
    const MatchingDecoder md(layout, p, Basis::Z, {{}, 40});
    const CorrectnessTable a = score(blossom_curve_decoder(md), seqs, t_points(40), 1);
    const CorrectnessTable b = score(blossom_curve_decoder(md), seqs, t_points(40), 3);
    CHECK(a.correct == b.correct);
}

TEST_CASE("blossom error rate grows with the physical error rate") {
    const CodeLayout layout = build_surface17();
    const std::vector<int> points = t_points(60);
    double previous = -1;
    for (double scale : {4.0, 8.0}) {
        ErrorParams p = ErrorParams::reference();
        p.p_x *= scale;
        p.p_y *= scale;
        p.p_z *= scale;
        p.p_m *= scale;
        const auto seqs = test_set(p, 1500, 60, 5);
        const MatchingDecoder md(layout, p, Basis::Z, {{}, 60});
        const CorrectnessTable table = score(blossom_curve_decoder(md), seqs, points);
        const FidelityCurve curve = fidelity_curve(table, 200);
        const DecayFit fit = fit_decay(curve);
        const double sigma = epsilon_bootstrap_sigma(table, curve, 50);
        MESSAGE("scale " << scale << ": epsilon " << fit.epsilon << " +- " << sigma);
        CHECK(fit.epsilon > previous);
        previous = fit.epsilon + 3 * sigma;
    }
}

TEST_CASE("paired comparison") {
    ErrorParams p;
    p.p_x = p.p_y = p.p_z = 0.003;
    p.p_m = 0.005;
    const auto seqs = test_set(p, 400, 40, 6);
    const CodeLayout layout = build_surface17();
    const MatchingDecoder md(layout, p, Basis::Z, {{}, 40});
    const CorrectnessTable a = score(blossom_curve_decoder(md), seqs, t_points(40));
    const FidelityCurve ca = fidelity_curve(a, 200);
    const PairedComparison same = paired_epsilon_difference(a, ca, a, ca, 50);
    CHECK(same.delta == 0);
    CHECK(same.sigma == 0);
    const CorrectnessTable o = score(oracle_decoder(), seqs, t_points(40));
    const PairedComparison vs = paired_epsilon_difference(a, ca, o, fidelity_curve(o, 200), 50);
    CHECK(vs.delta > 0);
    CHECK(vs.sigma > 0);
    CorrectnessTable shorter = o;
    shorter.points.pop_back();
    CHECK_THROWS_AS(paired_epsilon_difference(a, ca, shorter, ca, 10), std::invalid_argument);
}

TEST_CASE("csv output") {
    FidelityCurve c = synthetic_curve(0.01, 0, {3, 5, 8});
    c.points[0].sigma = 0.001;
    std::ostringstream os;
    write_curve_csv(os, c);
    CHECK(os.str().rfind("t,fidelity,sigma3\n3,", 0) == 0);
    CHECK(os.str().find(",0.003\n") != std::string::npos);
    std::ostringstream fits;
    write_fits_header(fits);
    DecayFit f;
    f.epsilon = 0.5;
    write_fit_row(fits, "nn", f);
    CHECK(fits.str() == "decoder,epsilon,t0,epsilon_ci_low,epsilon_ci_high\nnn,0.5,0,0,0\n");
}
