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

#include "s17/code_layout.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace s17 {

const char* to_string(Pauli p) {
    switch (p) {
        case Pauli::I: return "I";
        case Pauli::X: return "X";
        case Pauli::Y: return "Y";
        case Pauli::Z: return "Z";
    }
    return "?";
}

const char* to_string(Basis b) { return b == Basis::Z ? "z" : "x"; }

Basis basis_from_string(const std::string& s) {
    if (s == "z" || s == "Z") return Basis::Z;
    if (s == "x" || s == "X") return Basis::X;
    throw std::invalid_argument("unknown basis '" + s + "' (expected x or z)");
}

bool Stabilizer::contains(int qubit) const {
    return std::find(support.begin(), support.end(), qubit) != support.end();
}

uint32_t Stabilizer::support_mask() const {
    uint32_t m = 0;
    for (int q : support) m |= 1u << q;
    return m;
}

const Stabilizer& CodeLayout::stabilizer(int index) const {
    if (index < 0 || index >= kNumStabilizers) {
        throw std::out_of_range("stabilizer index " + std::to_string(index));
    }
    return index < 4 ? x_stabilizers[index] : z_stabilizers[index - 4];
}

const std::array<Stabilizer, 4>& CodeLayout::family(StabilizerType t) const {
    return t == StabilizerType::X ? x_stabilizers : z_stabilizers;
}

namespace {

Stabilizer make_plaquette(StabilizerType type, int index, double row, double col) {
    Stabilizer s;
    s.type = type;
    s.index = index;
    s.ancilla = CodeLayout::kNumData + index;
    s.row = row;
    s.col = col;
    const double dr[4] = {-0.5, -0.5, 0.5, 0.5};
    const double dc[4] = {-0.5, 0.5, -0.5, 0.5};
    for (int k = 0; k < 4; ++k) {
        const double r = row + dr[k];
        const double c = col + dc[k];
        const bool inside = r >= 0 && r < CodeLayout::kDistance && c >= 0 && c < CodeLayout::kDistance;
        s.corners[k] = inside ? static_cast<int>(std::lround(r)) * CodeLayout::kDistance +
                                    static_cast<int>(std::lround(c))
                              : -1;
        if (s.corners[k] >= 0) s.support.push_back(s.corners[k]);
    }
    return s;
}

}  // namespace

CodeLayout build_surface17() {
    CodeLayout layout;

    // Checkerboard with Z on the top-left bulk square; weight-2 Z checks on the
    // top/bottom edges and weight-2 X checks on the left/right edges. With the
    // CNOT orders below, two-qubit hook errors run perpendicular to the
    // logical operator of the same type.
    layout.x_stabilizers = {
        make_plaquette(StabilizerType::X, 0, 0.5, -0.5),
        make_plaquette(StabilizerType::X, 1, 0.5, 1.5),
        make_plaquette(StabilizerType::X, 2, 1.5, 0.5),
        make_plaquette(StabilizerType::X, 3, 1.5, 2.5),
    };
    layout.z_stabilizers = {
        make_plaquette(StabilizerType::Z, 4, -0.5, 1.5),
        make_plaquette(StabilizerType::Z, 5, 0.5, 0.5),
        make_plaquette(StabilizerType::Z, 6, 1.5, 1.5),
        make_plaquette(StabilizerType::Z, 7, 2.5, 0.5),
    };

    layout.z_cnot_order = {kNW, kNE, kSW, kSE};
    layout.x_cnot_order = {kNW, kSW, kNE, kSE};

    auto idle_rest = [](ScheduleStep& step) {
        std::array<bool, CodeLayout::kNumQubits> busy{};
        for (const Gate& g : step.gates) {
            busy[g.q0] = true;
            if (g.q1 >= 0) busy[g.q1] = true;
        }
        for (int q = 0; q < CodeLayout::kNumQubits; ++q) {
            if (!busy[q]) step.gates.push_back({GateKind::Idle, q});
        }
    };

    auto hadamard_step = [&]() {
        ScheduleStep step{GateKind::Hadamard, {}};
        for (const Stabilizer& s : layout.x_stabilizers) step.gates.push_back({GateKind::Hadamard, s.ancilla});
        idle_rest(step);
        return step;
    };

    layout.schedule[0] = hadamard_step();
    for (int k = 0; k < 4; ++k) {
        ScheduleStep step{GateKind::Cnot, {}};
        for (const Stabilizer& s : layout.x_stabilizers) {
            const int q = s.corners[layout.x_cnot_order[k]];
            if (q >= 0) step.gates.push_back({GateKind::Cnot, s.ancilla, q});
        }
        for (const Stabilizer& s : layout.z_stabilizers) {
            const int q = s.corners[layout.z_cnot_order[k]];
            if (q >= 0) step.gates.push_back({GateKind::Cnot, q, s.ancilla});
        }
        idle_rest(step);
        layout.schedule[1 + k] = std::move(step);
    }
    layout.schedule[5] = hadamard_step();
    {
        ScheduleStep step{GateKind::Measure, {}};
        for (int a = CodeLayout::kNumData; a < CodeLayout::kNumQubits; ++a) {
            step.gates.push_back({GateKind::Measure, a});
        }
        idle_rest(step);
        layout.schedule[6] = std::move(step);
    }

    layout.logical_z_support = {0, 3, 6};
    layout.logical_x_support = {0, 1, 2};
    for (int q = 0; q < CodeLayout::kNumData; ++q) layout.readout_support.push_back(q);
    return layout;
}

std::vector<int> single_error_defects(const CodeLayout& layout, int qubit, Pauli pauli) {
    if (qubit < 0 || qubit >= layout.n_data) {
        throw std::out_of_range("data qubit index " + std::to_string(qubit) + " out of range");
    }
    if (pauli == Pauli::I) throw std::invalid_argument("identity error has no defects");
    std::vector<int> out;
    // X anticommutes with Z checks and vice versa; Y with both.
    const bool has_x = pauli == Pauli::X || pauli == Pauli::Y;
    const bool has_z = pauli == Pauli::Z || pauli == Pauli::Y;
    for (int i = 0; i < CodeLayout::kNumStabilizers; ++i) {
        const Stabilizer& s = layout.stabilizer(i);
        const bool flips = s.type == StabilizerType::Z ? has_x : has_z;
        if (flips && s.contains(qubit)) out.push_back(i);
    }
    return out;
}

std::string CodeLayout::describe() const {
    static const char* kGateNames[] = {"H", "CNOT", "I", "M"};
    std::ostringstream os;
    os << "Surface-17: d=" << distance << ", " << n_data << " data qubits, " << n_ancilla << " ancillas\n";
    for (int i = 0; i < kNumStabilizers; ++i) {
        const Stabilizer& s = stabilizer(i);
        os << "  S" << i << " " << (s.type == StabilizerType::X ? 'X' : 'Z') << " ancilla q" << s.ancilla
           << " center (" << s.row << ", " << s.col << ") support {";
        for (size_t k = 0; k < s.support.size(); ++k) os << (k ? "," : "") << s.support[k];
        os << "}\n";
    }
    for (size_t k = 0; k < schedule.size(); ++k) {
        os << "  step " << k + 1 << ":";
        for (const Gate& g : schedule[k].gates) {
            if (g.kind == GateKind::Idle) continue;
            os << " " << kGateNames[static_cast<int>(g.kind)] << "(" << g.q0;
            if (g.q1 >= 0) os << "," << g.q1;
            os << ")";
        }
        os << "\n";
    }
    os << "  logical Z support {0,3,6}, logical X support {0,1,2}, readout parity over all data qubits\n";
    return os.str();
}

}  // namespace s17
