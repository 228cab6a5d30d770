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

#ifndef S17_PAULI_SIM_HPP_
#define S17_PAULI_SIM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "s17/code_layout.hpp"
#include "s17/rng.hpp"

namespace s17 {

/// Pauli error channel. During every coherent step each qubit independently
/// suffers X, Y or Z with probabilities p_x, p_y, p_z; every measurement is
/// misreported with probability p_m.
struct ErrorParams {
    double p_x = 0;
    double p_y = 0;
    double p_z = 0;
    double p_m = 0;

    /// Throws std::invalid_argument if a probability is outside [0,1] or
    /// p_x + p_y + p_z > 1.
    void validate() const;

    /// The Pauli-channel operating point of the reference experiment:
    /// p_x = p_y = p_z = 0.048%, p_m = 0.14%.
    static ErrorParams reference();

    bool operator==(const ErrorParams&) const = default;
};

/// Total probability that a qubit ends up with a net Y error in one step
/// when X, Y and Z components are drawn independently:
/// p_y (1 - p_x)(1 - p_z) + p_x p_z (1 - p_y).
double y_error_prob(const ErrorParams& params);

/// Accumulated X and Z flips on the 17 physical qubits, one bit per qubit.
struct PauliFrame {
    uint32_t x = 0;
    uint32_t z = 0;

    bool x_at(int q) const { return (x >> q) & 1u; }
    bool z_at(int q) const { return (z >> q) & 1u; }
    void apply(int q, Pauli p) {
        if (p == Pauli::X || p == Pauli::Y) x ^= 1u << q;
        if (p == Pauli::Z || p == Pauli::Y) z ^= 1u << q;
    }

    PauliFrame operator^(const PauliFrame& o) const { return {x ^ o.x, z ^ o.z}; }
    bool operator==(const PauliFrame&) const = default;
};

/// Draws one step of the Pauli channel on each listed qubit.
PauliFrame step_errors(PauliFrame frame, std::span<const int> active_qubits, const ErrorParams& params, Rng& rng);

/// Conjugates the frame through a Clifford gate. Idle and Measure leave it
/// unchanged. Throws std::out_of_range on a bad operand.
PauliFrame apply_gate(PauliFrame frame, const Gate& gate);

/// Reads each ancilla's X-frame bit (computational basis, no reset) and
/// misreports it with probability p_m. Bit i of the result is stabilizer i.
/// The frame is not modified by the measurement.
uint8_t measure_ancillas(const CodeLayout& layout, const PauliFrame& frame, const ErrorParams& params, Rng& rng);

/// One cycle's bookkeeping words (bit i = stabilizer i).
struct CycleRecord {
    uint8_t m = 0;   // raw ancilla readout m_i(t)
    uint8_t s = 0;   // syndrome s_i(t) = m_i(t) xor m_i(t-1)
    uint8_t ds = 0;  // increment ds_i(t) = s_i(t) xor s_i(t-1)
};

/// Observable record of one memory experiment.
struct SyndromeSequence {
    int cycles = 0;
    uint64_t seed = 0;
    // Per cycle, bits 0..3 X-stabilizer increments, bits 4..7 Z-stabilizer increments.
    std::vector<uint8_t> increments;
    // Final syndrome increment f xor s(T) on the decoded family (bit j = j-th stabilizer of that family).
    uint8_t final_increment = 0;
    // Parity of the final data readout relative to the prepared state.
    uint8_t label = 0;
    // Virtual readout after every cycle (test sets only); entry t-1 belongs to cycle t.
    std::vector<uint8_t> final_increments_by_cycle;
    std::vector<uint8_t> labels_by_cycle;

    bool has_cycle_labels() const { return !labels_by_cycle.empty(); }

    bool operator==(const SyndromeSequence&) const = default;
};

/// The first `t` cycles of a sequence with per-cycle labels, closed by the
/// virtual readout after cycle t.
SyndromeSequence truncated(const SyndromeSequence& seq, int t);

/// Deterministic error injected just before step 1 of `cycle` (i.e. after the
/// measurement step of cycle-1), or, with after_step = k in 0..6, right after
/// the gates of step k+1 of that cycle. cycle = T+1 places it right before
/// the final data readout.
struct ForcedPauli {
    int cycle;
    int qubit;
    Pauli pauli;
    int after_step = -1;
};

/// Deterministic misreport of stabilizer `stabilizer` at measurement of `cycle`.
struct ForcedMisreport {
    int cycle;
    int stabilizer;
};

struct ForcedFaults {
    std::vector<ForcedPauli> paulis;
    std::vector<ForcedMisreport> misreports;
};

struct SimStats {
    uint64_t pauli_events = 0;   // stochastic X/Y/Z draws that fired
    uint64_t misreports = 0;     // stochastic ancilla misreports
    uint64_t qubit_cycles = 0;   // qubits x cycles simulated
};

struct ExperimentOptions {
    int cycles = 1;
    ErrorParams params;
    uint64_t seed = 0;
    bool record_every_cycle = false;
    Basis basis = Basis::Z;
    ForcedFaults forced;
    // Stochastic noise is switched off for cycles > quiet_after (-1: never).
    // The final readout counts as cycle T+1.
    int quiet_after = -1;
    SimStats* stats = nullptr;
};

/// Simulates `cycles` stabilizer cycles from |0...0> followed by a destructive
/// readout of all data qubits in the decoded basis. Throws
/// std::invalid_argument if cycles < 1 or the params are invalid.
SyndromeSequence run_experiment(const CodeLayout& layout, const ExperimentOptions& options);

SyndromeSequence run_experiment(const CodeLayout& layout, int cycles, const ErrorParams& params, uint64_t seed,
                                bool record_every_cycle);

}  // namespace s17

#endif  // S17_PAULI_SIM_HPP_
