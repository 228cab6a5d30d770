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

#ifndef S17_CODE_LAYOUT_HPP_
#define S17_CODE_LAYOUT_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace s17 {

enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

enum class StabilizerType : uint8_t { X, Z };

/// Decoding basis. Z decodes bit flips (|0>_L memory, Z-stabilizer final
/// syndrome); X decodes phase flips with the stabilizer roles swapped.
enum class Basis : uint8_t { Z, X };

const char* to_string(Pauli p);
const char* to_string(Basis b);
Basis basis_from_string(const std::string& s);

/// Stabilizer type whose defects flag errors relevant to `basis`.
constexpr StabilizerType detecting_type(Basis basis) {
    return basis == Basis::Z ? StabilizerType::Z : StabilizerType::X;
}

/// Corner slots of a plaquette, labeled a..d in row-major order.
enum Corner : int { kNW = 0, kNE = 1, kSW = 2, kSE = 3 };

struct Stabilizer {
    StabilizerType type;
    int index;    // global stabilizer index 0..7, X-type first
    int ancilla;  // physical qubit index of the measuring ancilla
    // Data qubit on each corner, -1 where the plaquette is cut by the boundary.
    std::array<int, 4> corners;
    std::vector<int> support;  // corners in a,b,c,d order, absent ones dropped
    double row, col;           // plaquette center in data-grid coordinates

    bool contains(int qubit) const;
    uint32_t support_mask() const;
};

enum class GateKind : uint8_t { Hadamard, Cnot, Idle, Measure };

struct Gate {
    GateKind kind;
    int q0;       // target of H/Idle/Measure, control of CNOT
    int q1 = -1;  // target of CNOT
};

struct ScheduleStep {
    GateKind kind;  // what the ancillas do in this step
    std::vector<Gate> gates;
};

/// Fixed distance-3 rotated surface code (Surface-17).
///
/// Qubits 0..8 are data qubits in row-major order on the 3x3 grid, 9..12 the
/// X-stabilizer ancillas and 13..16 the Z-stabilizer ancillas, each family
/// ordered row-major by plaquette center. Stabilizer bit i of a syndrome
/// word is the stabilizer with global index i.
struct CodeLayout {
    static constexpr int kDistance = 3;
    static constexpr int kNumData = 9;
    static constexpr int kNumAncilla = 8;
    static constexpr int kNumQubits = kNumData + kNumAncilla;
    static constexpr int kNumStabilizers = kNumAncilla;
    static constexpr int kStepsPerCycle = 7;

    int distance = kDistance;
    int n_data = kNumData;
    int n_ancilla = kNumAncilla;

    std::array<Stabilizer, 4> x_stabilizers;
    std::array<Stabilizer, 4> z_stabilizers;
    std::array<ScheduleStep, kStepsPerCycle> schedule;

    // CNOT corner order used in the four coherent steps.
    std::array<Corner, 4> z_cnot_order;
    std::array<Corner, 4> x_cnot_order;

    std::vector<int> logical_z_support;  // a weight-3 column
    std::vector<int> logical_x_support;  // a weight-3 row
    // Qubits whose readout parity is the labeled observable (all data qubits).
    std::vector<int> readout_support;

    const Stabilizer& stabilizer(int index) const;
    const std::array<Stabilizer, 4>& family(StabilizerType t) const;

    /// Global indices of the four stabilizers of a type (0..3 for X, 4..7 for Z).
    static constexpr int first_index(StabilizerType t) { return t == StabilizerType::X ? 0 : 4; }

    std::string describe() const;
};

CodeLayout build_surface17();

/// Stabilizers (global indices, ascending) that anticommute with a single
/// Pauli error on a data qubit. Throws std::out_of_range for bad qubits and
/// std::invalid_argument for Pauli::I.
std::vector<int> single_error_defects(const CodeLayout& layout, int qubit, Pauli pauli);

}  // namespace s17

#endif  // S17_CODE_LAYOUT_HPP_
