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

#include "s17/pauli_sim.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace s17 {

void ErrorParams::validate() const {
    for (double p : {p_x, p_y, p_z, p_m}) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("error probability outside [0,1]");
    }
    if (p_x + p_y + p_z > 1.0 + 1e-12) throw std::invalid_argument("p_x + p_y + p_z exceeds 1");
}

ErrorParams ErrorParams::reference() { return {0.00048, 0.00048, 0.00048, 0.0014}; }

double y_error_prob(const ErrorParams& p) {
    return p.p_y * (1 - p.p_x) * (1 - p.p_z) + p.p_x * p.p_z * (1 - p.p_y);
}

PauliFrame step_errors(PauliFrame frame, std::span<const int> active_qubits, const ErrorParams& params, Rng& rng) {
    const double cx = params.p_x;
    const double cy = cx + params.p_y;
    const double cz = cy + params.p_z;
    for (int q : active_qubits) {
        const double u = rng.uniform();
        if (u >= cz) continue;
        if (u < cx) {
            frame.x ^= 1u << q;
        } else if (u < cy) {
            frame.x ^= 1u << q;
            frame.z ^= 1u << q;
        } else {
            frame.z ^= 1u << q;
        }
    }
    return frame;
}

PauliFrame apply_gate(PauliFrame frame, const Gate& gate) {
    auto check = [](int q) {
        if (q < 0 || q >= CodeLayout::kNumQubits) throw std::out_of_range("gate operand " + std::to_string(q));
    };
    check(gate.q0);
    switch (gate.kind) {
        case GateKind::Hadamard: {
            const uint32_t bit = 1u << gate.q0;
            const bool xb = frame.x & bit;
            const bool zb = frame.z & bit;
            frame.x = (frame.x & ~bit) | (zb ? bit : 0u);
            frame.z = (frame.z & ~bit) | (xb ? bit : 0u);
            break;
        }
        case GateKind::Cnot: {
            check(gate.q1);
            if (gate.q0 == gate.q1) throw std::out_of_range("CNOT control equals target");
            if (frame.x_at(gate.q0)) frame.x ^= 1u << gate.q1;
            if (frame.z_at(gate.q1)) frame.z ^= 1u << gate.q0;
            break;
        }
        case GateKind::Idle:
        case GateKind::Measure:
            break;
    }
    return frame;
}

uint8_t measure_ancillas(const CodeLayout& layout, const PauliFrame& frame, const ErrorParams& params, Rng& rng) {
    uint8_t m = 0;
    for (int i = 0; i < CodeLayout::kNumStabilizers; ++i) {
        bool bit = frame.x_at(layout.stabilizer(i).ancilla);
        if (rng.bernoulli(params.p_m)) bit = !bit;
        m |= static_cast<uint8_t>(bit) << i;
    }
    return m;
}

SyndromeSequence truncated(const SyndromeSequence& seq, int t) {
    if (!seq.has_cycle_labels()) throw std::invalid_argument("sequence has no per-cycle labels");
    if (t < 1 || t > seq.cycles) throw std::out_of_range("truncation cycle " + std::to_string(t));
    SyndromeSequence out;
    out.cycles = t;
    out.seed = seq.seed;
    out.increments.assign(seq.increments.begin(), seq.increments.begin() + t);
    out.final_increment = seq.final_increments_by_cycle[t - 1];
    out.label = seq.labels_by_cycle[t - 1];
    return out;
}

namespace {

constexpr uint32_t kDataMask = (1u << CodeLayout::kNumData) - 1;

struct CompiledStep {
    std::vector<int> hadamards;
    std::vector<std::pair<int, int>> cnots;
    std::vector<int> noisy;  // qubits receiving the Pauli channel after the gates
    bool measure = false;
};

std::vector<CompiledStep> compile(const CodeLayout& layout) {
    std::vector<CompiledStep> steps;
    for (const ScheduleStep& s : layout.schedule) {
        CompiledStep c;
        for (const Gate& g : s.gates) {
            if (g.kind == GateKind::Hadamard) c.hadamards.push_back(g.q0);
            if (g.kind == GateKind::Cnot) c.cnots.emplace_back(g.q0, g.q1);
        }
        c.measure = s.kind == GateKind::Measure;
        // Ancillas projected by the measurement only see the misreport channel.
        const int n = c.measure ? CodeLayout::kNumData : CodeLayout::kNumQubits;
        for (int q = 0; q < n; ++q) c.noisy.push_back(q);
        steps.push_back(std::move(c));
    }
    return steps;
}

inline void hadamard(PauliFrame& f, int q) {
    const uint32_t bit = 1u << q;
    const uint32_t swap = (f.x ^ f.z) & bit;
    f.x ^= swap;
    f.z ^= swap;
}

inline void cnot(PauliFrame& f, int c, int t) {
    f.x ^= ((f.x >> c) & 1u) << t;
    f.z ^= ((f.z >> t) & 1u) << c;
}

struct Readout {
    uint8_t f = 0;  // 4-bit syndrome of the decoded family computed from the data readout
    uint8_t label = 0;
};

Readout read_data(const CodeLayout& layout, const PauliFrame& frame, Basis basis, uint32_t misreport_mask) {
    const uint32_t flips = ((basis == Basis::Z ? frame.x : frame.z) ^ misreport_mask) & kDataMask;
    Readout r;
    const auto& fam = layout.family(detecting_type(basis));
    for (int j = 0; j < 4; ++j) r.f |= static_cast<uint8_t>(std::popcount(flips & fam[j].support_mask()) & 1) << j;
    uint32_t ro = 0;
    for (int q : layout.readout_support) ro |= 1u << q;
    r.label = std::popcount(flips & ro) & 1;
    return r;
}

}  // namespace

SyndromeSequence run_experiment(const CodeLayout& layout, const ExperimentOptions& opt) {
    if (opt.cycles < 1) throw std::invalid_argument("experiment needs at least one cycle");
    opt.params.validate();

    const std::vector<CompiledStep> steps = compile(layout);

    const int T = opt.cycles;
    const int fam_shift = detecting_type(opt.basis) == StabilizerType::Z ? 4 : 0;
    const uint64_t readout_key = derive_seed(opt.seed, 0x7265616430757400ull);
    auto noisy = [&](int cycle) { return opt.quiet_after < 0 || cycle <= opt.quiet_after; };

    SyndromeSequence seq;
    seq.cycles = T;
    seq.seed = opt.seed;
    seq.increments.resize(T);
    if (opt.record_every_cycle) {
        seq.final_increments_by_cycle.resize(T);
        seq.labels_by_cycle.resize(T);
    }

    Rng rng(opt.seed);
    const double cx = opt.params.p_x;
    const double cy = cx + opt.params.p_y;
    const double cz = cy + opt.params.p_z;
    uint64_t events = 0;
    uint64_t misreports = 0;

    PauliFrame frame;
    CycleRecord prev;
    auto inject = [&](int cycle, int after_step) {
        for (const ForcedPauli& fp : opt.forced.paulis) {
            if (fp.cycle != cycle || fp.after_step != after_step) continue;
            if (fp.qubit < 0 || fp.qubit >= CodeLayout::kNumQubits) throw std::out_of_range("forced qubit");
            frame.apply(fp.qubit, fp.pauli);
        }
    };
    auto readout_misreports = [&](int t) {
        uint32_t mask = 0;
        if (!noisy(t + 1) || opt.params.p_m <= 0) return mask;
        for (int q = 0; q < CodeLayout::kNumData; ++q) {
            if (counter_uniform(readout_key, static_cast<uint64_t>(t) * 32 + q) < opt.params.p_m) mask |= 1u << q;
        }
        return mask;
    };

    for (int t = 1; t <= T; ++t) {
        inject(t, -1);
        const bool on = noisy(t);
        uint8_t m = 0;
        for (int k = 0; k < static_cast<int>(steps.size()); ++k) {
            const CompiledStep& st = steps[k];
            for (int q : st.hadamards) hadamard(frame, q);
            for (auto [c, tg] : st.cnots) cnot(frame, c, tg);
            if (on && cz > 0) {
                for (int q : st.noisy) {
                    const double u = rng.uniform();
                    if (u >= cz) continue;
                    ++events;
                    if (u < cx) {
                        frame.x ^= 1u << q;
                    } else if (u < cy) {
                        frame.x ^= 1u << q;
                        frame.z ^= 1u << q;
                    } else {
                        frame.z ^= 1u << q;
                    }
                }
            }
            if (!opt.forced.paulis.empty()) inject(t, k);
            if (st.measure) {
                for (int i = 0; i < CodeLayout::kNumStabilizers; ++i) {
                    bool bit = frame.x_at(CodeLayout::kNumData + i);
                    if (on && opt.params.p_m > 0 && rng.uniform() < opt.params.p_m) {
                        bit = !bit;
                        ++misreports;
                    }
                    for (const ForcedMisreport& fm : opt.forced.misreports) {
                        if (fm.cycle == t && fm.stabilizer == i) bit = !bit;
                    }
                    m |= static_cast<uint8_t>(bit) << i;
                }
            }
        }
        CycleRecord rec;
        rec.m = m;
        rec.s = m ^ prev.m;
        rec.ds = rec.s ^ prev.s;
        seq.increments[t - 1] = rec.ds;
        prev = rec;

        if (t == T) inject(T + 1, -1);
        if (opt.record_every_cycle || t == T) {
            const uint32_t mis = readout_misreports(t);
            const Readout r = read_data(layout, frame, opt.basis, mis);
            const uint8_t df = r.f ^ static_cast<uint8_t>((rec.s >> fam_shift) & 0xF);
            if (opt.record_every_cycle) {
                seq.final_increments_by_cycle[t - 1] = df;
                seq.labels_by_cycle[t - 1] = r.label;
            }
            if (t == T) {
                seq.final_increment = df;
                seq.label = r.label;
            }
        }
    }
    if (opt.stats) {
        opt.stats->pauli_events += events;
        opt.stats->misreports += misreports;
        opt.stats->qubit_cycles += static_cast<uint64_t>(T) * CodeLayout::kNumQubits;
    }
    return seq;
}

SyndromeSequence run_experiment(const CodeLayout& layout, int cycles, const ErrorParams& params, uint64_t seed,
                                bool record_every_cycle) {
    ExperimentOptions opt;
    opt.cycles = cycles;
    opt.params = params;
    opt.seed = seed;
    opt.record_every_cycle = record_every_cycle;
    return run_experiment(layout, opt);
}

}  // namespace s17
