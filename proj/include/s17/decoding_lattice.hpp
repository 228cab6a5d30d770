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

#ifndef S17_DECODING_LATTICE_HPP_
#define S17_DECODING_LATTICE_HPP_

#include <string>
#include <vector>

#include "s17/code_layout.hpp"
#include "s17/pauli_sim.hpp"

namespace s17 {

/// Elementary edge of the space-time error lattice of one stabilizer family.
/// Nodes are (stabilizer j in 0..3, layer). `b < 0` marks a boundary edge.
/// `dt` is the layer of b minus the layer of a.
struct LatticeEdge {
    int a = 0;
    int b = -1;
    int dt = 0;
    double probability = 0;
    bool crossing = false;

    bool is_boundary() const { return b < 0; }
    bool is_space() const { return dt == 0; }
    bool is_time() const { return !is_boundary() && a == b && dt > 0; }
    bool is_diagonal() const { return !is_boundary() && a != b && dt > 0; }
};

enum class EdgeWeighting {
    Uniform,  // one probability per edge class: space, lag-1 time, lag-2 time, diagonal
    PerEdge,  // each edge keeps its own enumerated probability
};

const char* to_string(EdgeWeighting w);
EdgeWeighting edge_weighting_from_string(const std::string& s);

struct LatticeOptions {
    EdgeWeighting weighting = EdgeWeighting::PerEdge;
    bool diagonal_edges = true;
};

/// Single-fault mechanisms summed into lattice edges. Bulk edges are
/// translation invariant with `a` anchored at any layer <= T; final edges end
/// in the final-readout layer T+1 (`a` at layer T+1-dt).
struct DecodingLattice {
    Basis basis = Basis::Z;
    std::vector<LatticeEdge> bulk;
    std::vector<LatticeEdge> final_layer;
    // Aggregates over the bulk edges (Uniform weighting uses them).
    double p_space = 0;
    double p_time = 0;
    double p_time2 = 0;
    double p_diagonal = 0;
    int mechanisms = 0;          // fault mechanisms enumerated
    int dropped_high_weight = 0; // mechanisms with > 2 defects, not representable
};

/// Enumerates every single fault of the circuit (each Pauli after each step
/// on each qubit, each ancilla misreport, each final-readout misreport) with
/// the frame simulator and aggregates the detection events of the family
/// decoding `basis` into lattice edges.
DecodingLattice build_decoding_lattice(const CodeLayout& layout, const ErrorParams& params, Basis basis,
                                       const LatticeOptions& options = {});

/// Shortest-path costs on the lattice, edge cost -ln(p), precomputed for
/// sequences of up to `max_cycles` cycles. Each entry carries the logical
/// crossing parity of its minimal path.
class LatticeDistances {
   public:
    struct Entry {
        double cost = 0;
        bool crossing = false;
    };

    LatticeDistances() = default;
    LatticeDistances(const DecodingLattice& lattice, int max_cycles);

    int max_cycles() const { return max_cycles_; }

    /// Between bulk nodes (j1, t) and (j2, t + dt).
    const Entry& bulk(int j1, int j2, int dt) const { return bulk_[index(j1, j2, dt)]; }
    /// Between final node (j1, T+1) and node (j2, T+1-d); d = 0 pairs two final nodes.
    const Entry& final_to(int j1, int j2, int d) const { return final_[index(j1, j2, d)]; }
    const Entry& bulk_boundary(int j) const { return bulk_boundary_[j]; }
    const Entry& final_boundary(int j) const { return final_boundary_[j]; }

   private:
    size_t index(int j1, int j2, int d) const { return (static_cast<size_t>(j1) * 4 + j2) * (max_cycles_ + 1) + d; }

    int max_cycles_ = 0;
    std::vector<Entry> bulk_;
    std::vector<Entry> final_;
    std::vector<Entry> bulk_boundary_;
    std::vector<Entry> final_boundary_;
};

}  // namespace s17

#endif  // S17_DECODING_LATTICE_HPP_
