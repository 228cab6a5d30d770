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
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "s17/pauli_sim.hpp"

using namespace s17;

namespace {

ExperimentOptions quiet(int cycles) {
    ExperimentOptions opt;
    opt.cycles = cycles;
    opt.seed = 7;
    return opt;
}

uint8_t z_bits(const std::vector<int>& stabs) {
    uint8_t m = 0;
    for (int i : stabs) m |= 1u << i;
    return m;
}

}  // namespace

TEST_CASE("y_error_prob") {
    CHECK(y_error_prob({0, 0, 0, 0}) == 0.0);
    CHECK(y_error_prob({0.1, 0, 0.1, 0}) == doctest::Approx(0.01).epsilon(1e-12));
    // p_y(1-p_x)(1-p_z) + p_x p_z (1-p_y) at 0.048% each.
    CHECK(y_error_prob(ErrorParams::reference()) == doctest::Approx(4.797696e-4).epsilon(1e-10));
}

TEST_CASE("ErrorParams validation") {
    CHECK_NOTHROW(ErrorParams::reference().validate());
    CHECK_THROWS_AS((ErrorParams{0.5, 0.4, 0.2, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ErrorParams{-0.1, 0, 0, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ErrorParams{0, 0, 0, 1.5}.validate()), std::invalid_argument);
}

TEST_CASE("step_errors") {
    std::vector<int> all(17);
    std::iota(all.begin(), all.end(), 0);
    Rng rng(1);

    SUBCASE("zero probabilities leave the frame unchanged") {
        const PauliFrame f{0x155u, 0x0F0u};
        CHECK(step_errors(f, all, {0, 0, 0, 0}, rng) == f);
    }
    SUBCASE("p_x = 1 toggles every listed x bit") {
        const PauliFrame f{0x3u, 0x5u};
        const PauliFrame g = step_errors(f, all, {1, 0, 0, 0}, rng);
        CHECK(g.x == (f.x ^ 0x1FFFFu));
        CHECK(g.z == f.z);
    }
    SUBCASE("Y toggles both frames") {
        const PauliFrame g = step_errors({}, std::vector<int>{4}, {0, 1, 0, 0}, rng);
        CHECK(g.x == (1u << 4));
        CHECK(g.z == (1u << 4));
    }
    SUBCASE("single-step X frequency matches the binomial interval") {
        const int n = 1000000;
        const double p = 0.01;
        std::vector<int> one{0};
        int hits = 0;
        for (int i = 0; i < n; ++i) hits += step_errors({}, one, {p, 0, 0, 0}, rng).x & 1u;
        const double sigma = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(static_cast<double>(hits) / n - p) < 3 * sigma);
    }
}

TEST_CASE("apply_gate conjugation rules") {
    SUBCASE("H swaps X and Z") {
        PauliFrame f;
        f.apply(3, Pauli::X);
        const PauliFrame g = apply_gate(f, {GateKind::Hadamard, 3});
        CHECK_FALSE(g.x_at(3));
        CHECK(g.z_at(3));
        CHECK(apply_gate(g, {GateKind::Hadamard, 3}) == f);
    }
    SUBCASE("CNOT copies X forward") {
        PauliFrame f;
        f.apply(0, Pauli::X);
        const PauliFrame g = apply_gate(f, {GateKind::Cnot, 0, 13});
        CHECK(g.x_at(0));
        CHECK(g.x_at(13));
    }
    SUBCASE("CNOT copies Z backward") {
        PauliFrame f;
        f.apply(13, Pauli::Z);
        const PauliFrame g = apply_gate(f, {GateKind::Cnot, 0, 13});
        CHECK(g.z_at(0));
        CHECK(g.z_at(13));
        CHECK(g.x == 0u);
    }
    SUBCASE("idle and measure are no-ops") {
        const PauliFrame f{0x1234u, 0x4321u};
        CHECK(apply_gate(f, {GateKind::Idle, 2}) == f);
        CHECK(apply_gate(f, {GateKind::Measure, 12}) == f);
    }
    SUBCASE("operands out of range") {
        CHECK_THROWS_AS(apply_gate({}, {GateKind::Hadamard, 17}), std::out_of_range);
        CHECK_THROWS_AS(apply_gate({}, {GateKind::Cnot, 0, -1}), std::out_of_range);
        CHECK_THROWS_AS(apply_gate({}, {GateKind::Cnot, 2, 2}), std::out_of_range);
    }
}

TEST_CASE("measure_ancillas reads ancilla X frames without disturbing them") {
    const CodeLayout layout = build_surface17();
    Rng rng(3);
    PauliFrame f;
    f.apply(9, Pauli::X);   // ancilla of stabilizer 0
    f.apply(16, Pauli::Y);  // ancilla of stabilizer 7
    f.apply(12, Pauli::Z);  // phase on ancilla 3 is invisible
    const PauliFrame before = f;
    CHECK(measure_ancillas(layout, f, {}, rng) == 0x81);
    CHECK(f == before);
    CHECK(measure_ancillas(layout, f, {0, 0, 0, 1}, rng) == static_cast<uint8_t>(~0x81));
}

TEST_CASE("noise-free run is silent") {
    const CodeLayout layout = build_surface17();
    for (int T : {1, 2, 17}) {
        const SyndromeSequence seq = run_experiment(layout, T, {}, 99, true);
        CHECK(seq.cycles == T);
        CHECK(seq.increments == std::vector<uint8_t>(T, 0));
        CHECK(seq.final_increment == 0);
        CHECK(seq.label == 0);
        CHECK(seq.labels_by_cycle == std::vector<uint8_t>(T, 0));
    }
    CHECK_THROWS_AS(run_experiment(layout, 0, {}, 1, false), std::invalid_argument);
}

TEST_CASE("data X injected between cycles fires exactly its single_error_defects") {
    const CodeLayout layout = build_surface17();
    for (int q = 0; q < 9; ++q) {
        for (int cycle = 1; cycle <= 3; ++cycle) {
            ExperimentOptions opt = quiet(4);
            opt.forced.paulis.push_back({cycle, q, Pauli::X});
            const SyndromeSequence seq = run_experiment(layout, opt);
            for (int t = 1; t <= 4; ++t) {
                const uint8_t expected = t == cycle ? z_bits(single_error_defects(layout, q, Pauli::X)) : 0;
                CHECK(seq.increments[t - 1] == expected);
            }
            // A persistent data error is already reflected in s(T), so f agrees with it.
            CHECK(seq.final_increment == 0);
            CHECK(seq.label == 1);
        }
    }
}

TEST_CASE("data Z error is seen by X checks only and never flips the z-basis label") {
    const CodeLayout layout = build_surface17();
    ExperimentOptions opt = quiet(3);
    opt.forced.paulis.push_back({2, 4, Pauli::Z});
    const SyndromeSequence seq = run_experiment(layout, opt);
    CHECK(seq.increments[1] == z_bits(single_error_defects(layout, 4, Pauli::Z)));
    CHECK(seq.label == 0);

    opt.basis = Basis::X;
    const SyndromeSequence xs = run_experiment(layout, opt);
    CHECK(xs.increments == seq.increments);
    CHECK(xs.label == 1);
}

TEST_CASE("error right before the final readout shows up in the final increment") {
    const CodeLayout layout = build_surface17();
    ExperimentOptions opt = quiet(3);
    opt.forced.paulis.push_back({4, 4, Pauli::X});
    const SyndromeSequence seq = run_experiment(layout, opt);
    CHECK(seq.increments == std::vector<uint8_t>(3, 0));
    // Stabilizers 5 and 6 are the 2nd and 3rd Z checks.
    CHECK(seq.final_increment == 0b0110);
    CHECK(seq.label == 1);
}

TEST_CASE("misreport: two unit increments on one stabilizer separated in time, label unchanged") {
    const CodeLayout layout = build_surface17();
    for (int stab = 0; stab < 8; ++stab) {
        ExperimentOptions opt = quiet(6);
        opt.forced.misreports.push_back({2, stab});
        const SyndromeSequence seq = run_experiment(layout, opt);
        // No reset: s(2) and s(3) are both wrong, so ds fires at cycles 2 and 4.
        for (int t = 1; t <= 6; ++t) {
            const uint8_t expected = (t == 2 || t == 4) ? (1u << stab) : 0;
            CHECK(seq.increments[t - 1] == expected);
        }
        CHECK(seq.label == 0);
        CHECK(seq.final_increment == 0);
    }
}

TEST_CASE("misreport in the last cycle pairs with the final increment") {
    const CodeLayout layout = build_surface17();
    ExperimentOptions opt = quiet(4);
    opt.forced.misreports.push_back({4, 5});
    const SyndromeSequence seq = run_experiment(layout, opt);
    CHECK(seq.increments[3] == (1u << 5));
    CHECK(seq.final_increment == 0b0010);
    CHECK(seq.label == 0);
}

TEST_CASE("ancilla bit flip between cycles gives a consecutive-cycle pair") {
    const CodeLayout layout = build_surface17();
    ExperimentOptions opt = quiet(5);
    opt.forced.paulis.push_back({3, 14, Pauli::X});  // ancilla of stabilizer 5
    const SyndromeSequence seq = run_experiment(layout, opt);
    CHECK(seq.increments == std::vector<uint8_t>{0, 0, 1u << 5, 1u << 5, 0});
    CHECK(seq.label == 0);
}

TEST_CASE("forced single X on data at cycle 1, T = 3") {
    const CodeLayout layout = build_surface17();
    ExperimentOptions opt = quiet(3);
    opt.forced.paulis.push_back({1, 0, Pauli::X});
    const SyndromeSequence seq = run_experiment(layout, opt);
    CHECK(seq.label == 1);
    CHECK(seq.increments[0] == z_bits(single_error_defects(layout, 0, Pauli::X)));
    CHECK(seq.increments[1] == 0);
    CHECK(seq.increments[2] == 0);
}

TEST_CASE("determinism and seed sensitivity") {
    const CodeLayout layout = build_surface17();
    const ErrorParams p{0.01, 0.01, 0.01, 0.02};
    const SyndromeSequence a = run_experiment(layout, 40, p, 1234, true);
    const SyndromeSequence b = run_experiment(layout, 40, p, 1234, true);
    const SyndromeSequence c = run_experiment(layout, 40, p, 1235, true);
    CHECK(a == b);
    CHECK_FALSE(a == c);
}

TEST_CASE("per-cycle virtual readout does not perturb the trajectory") {
    const CodeLayout layout = build_surface17();
    const ErrorParams p{0.01, 0.005, 0.01, 0.02};
    for (uint64_t seed = 0; seed < 50; ++seed) {
        const SyndromeSequence with = run_experiment(layout, 25, p, seed, true);
        const SyndromeSequence without = run_experiment(layout, 25, p, seed, false);
        CHECK(with.increments == without.increments);
        CHECK(with.final_increment == without.final_increment);
        CHECK(with.label == without.label);
        CHECK(with.labels_by_cycle.back() == with.label);
        CHECK(with.final_increments_by_cycle.back() == with.final_increment);
        const SyndromeSequence cut = truncated(with, 10);
        CHECK(cut.cycles == 10);
        CHECK(cut.label == with.labels_by_cycle[9]);
        CHECK(cut.final_increment == with.final_increments_by_cycle[9]);
        if (seed == 0) {
            CHECK_THROWS_AS(truncated(without, 3), std::invalid_argument);
            CHECK_THROWS_AS(truncated(with, 26), std::out_of_range);
        }
    }
}

TEST_CASE("per-cycle labels track a persistent error") {
    const CodeLayout layout = build_surface17();
    ExperimentOptions opt = quiet(6);
    opt.record_every_cycle = true;
    opt.forced.paulis.push_back({4, 4, Pauli::X});
    const SyndromeSequence seq = run_experiment(layout, opt);
    CHECK(seq.labels_by_cycle == std::vector<uint8_t>{0, 0, 0, 1, 1, 1});
    CHECK(seq.final_increments_by_cycle == std::vector<uint8_t>(6, 0));
}

TEST_CASE("causality: no new increments once noise stops") {
    const CodeLayout layout = build_surface17();
    const ErrorParams p{0.02, 0.02, 0.02, 0.05};
    for (uint64_t seed = 0; seed < 200; ++seed) {
        ExperimentOptions opt;
        opt.cycles = 12;
        opt.params = p;
        opt.seed = seed;
        opt.quiet_after = 5;
        const SyndromeSequence seq = run_experiment(layout, opt);
        // A misreport at the last noisy cycle t0 is echoed at t0 + 2 (no reset).
        for (int t = 8; t <= 12; ++t) CHECK(seq.increments[t - 1] == 0);
    }
}

TEST_CASE("frame linearity of forced errors") {
    const CodeLayout layout = build_surface17();
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        ExperimentOptions a = quiet(6), b = quiet(6), ab = quiet(6);
        a.record_every_cycle = b.record_every_cycle = ab.record_every_cycle = true;
        for (ExperimentOptions* o : {&a, &b}) {
            const int n = 1 + static_cast<int>(rng.uniform_int(0, 3));
            for (int k = 0; k < n; ++k) {
                const ForcedPauli fp{static_cast<int>(rng.uniform_int(1, 7)), static_cast<int>(rng.uniform_int(0, 16)),
                                     static_cast<Pauli>(rng.uniform_int(1, 3))};
                o->forced.paulis.push_back(fp);
                ab.forced.paulis.push_back(fp);
            }
            if (rng.bernoulli(0.5)) {
                const ForcedMisreport fm{static_cast<int>(rng.uniform_int(1, 6)), static_cast<int>(rng.uniform_int(0, 7))};
                o->forced.misreports.push_back(fm);
                ab.forced.misreports.push_back(fm);
            }
        }
        const auto sa = run_experiment(layout, a);
        const auto sb = run_experiment(layout, b);
        const auto sab = run_experiment(layout, ab);
        for (int t = 0; t < 6; ++t) {
            CHECK(sab.increments[t] == (sa.increments[t] ^ sb.increments[t]));
            CHECK(sab.labels_by_cycle[t] == (sa.labels_by_cycle[t] ^ sb.labels_by_cycle[t]));
            CHECK(sab.final_increments_by_cycle[t] ==
                  (sa.final_increments_by_cycle[t] ^ sb.final_increments_by_cycle[t]));
        }
    }
}

TEST_CASE("reference operating point is about 1% physical error per qubit per cycle") {
    const CodeLayout layout = build_surface17();
    const ErrorParams p = ErrorParams::reference();
    SimStats stats;
    for (uint64_t seed = 0; seed < 2000; ++seed) {
        ExperimentOptions opt;
        opt.cycles = 50;
        opt.params = p;
        opt.seed = seed;
        opt.stats = &stats;
        run_experiment(layout, opt);
    }
    // Data: 7 noisy steps; ancillas: 6 noisy steps plus one readout.
    const double pauli = p.p_x + p.p_y + p.p_z;
    const double expected_per_qubit = (9 * 7 * pauli + 8 * (6 * pauli + p.p_m)) / 17;
    const double observed = static_cast<double>(stats.pauli_events + stats.misreports) / stats.qubit_cycles;
    const double sigma = std::sqrt(expected_per_qubit / stats.qubit_cycles);
    CHECK(std::abs(observed - expected_per_qubit) < 3 * sigma);
    CHECK(observed == doctest::Approx(0.01).epsilon(0.05));
}
