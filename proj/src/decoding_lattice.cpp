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

#include "s17/decoding_lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace s17 {

namespace {

// Probability floor so that structurally possible edges stay finite at zero noise.
constexpr double kMinProbability = 1e-30;

// Run length and fault cycle used to observe bulk mechanisms away from both ends.
constexpr int kProbeCycles = 8;
constexpr int kBulkFaultCycle = 3;

struct Node {
    int j;
    int layer;
};

struct Mechanism {
    double probability;
    ForcedFaults fault;
};

double xor_prob(double p, double q) { return p * (1 - q) + q * (1 - p); }

// Detection events of the decoded family for one deterministic fault.
std::vector<Node> signature(const CodeLayout& layout, Basis basis, const ForcedFaults& fault, bool& label) {
    ExperimentOptions opt;
    opt.cycles = kProbeCycles;
    opt.basis = basis;
    opt.forced = fault;
    const SyndromeSequence seq = run_experiment(layout, opt);
    const int shift = basis == Basis::Z ? 4 : 0;
    std::vector<Node> nodes;
    for (int t = 1; t <= kProbeCycles; ++t) {
        const int bits = (seq.increments[t - 1] >> shift) & 0xF;
        for (int j = 0; j < 4; ++j) {
            if ((bits >> j) & 1) nodes.push_back({j, t});
        }
    }
    for (int j = 0; j < 4; ++j) {
        if ((seq.final_increment >> j) & 1) nodes.push_back({j, kProbeCycles + 1});
    }
    label = seq.label;
    return nodes;
}

// All single faults located in `cycle`; cycle = kProbeCycles + 1 yields the
// final-readout misreports.
std::vector<Mechanism> faults_in_cycle(const CodeLayout& layout, const ErrorParams& params, Basis basis, int cycle) {
    std::vector<Mechanism> out;
    if (cycle == kProbeCycles + 1) {
        const Pauli flip = basis == Basis::Z ? Pauli::X : Pauli::Z;
        for (int q = 0; q < CodeLayout::kNumData; ++q) {
            out.push_back({params.p_m, {{{cycle, q, flip}}, {}}});
        }
        return out;
    }
    const std::pair<Pauli, double> paulis[] = {{Pauli::X, params.p_x}, {Pauli::Y, params.p_y}, {Pauli::Z, params.p_z}};
    for (int k = 0; k < static_cast<int>(layout.schedule.size()); ++k) {
        const bool measure = layout.schedule[k].kind == GateKind::Measure;
        const int n = measure ? CodeLayout::kNumData : CodeLayout::kNumQubits;
        for (int q = 0; q < n; ++q) {
            for (const auto& [p, prob] : paulis) out.push_back({prob, {{{cycle, q, p, k}}, {}}});
        }
    }
    for (int i = 0; i < CodeLayout::kNumStabilizers; ++i) out.push_back({params.p_m, {{}, {{cycle, i}}}});
    return out;
}

// Accumulates mechanisms per (a, b, dt), keeping both crossing parities apart.
class EdgeAccumulator {
   public:
    void add(int a, int b, int dt, bool crossing, double p) {
        auto& slot = edges_[{a, b, dt}];
        slot[crossing] = xor_prob(slot[crossing], p);
    }

    std::vector<LatticeEdge> edges() const {
        std::vector<LatticeEdge> out;
        for (const auto& [key, probs] : edges_) {
            const auto [a, b, dt] = key;
            LatticeEdge e;
            e.a = a;
            e.b = b;
            e.dt = dt;
            e.probability = std::max(xor_prob(probs[0], probs[1]), kMinProbability);
            e.crossing = probs[1] > probs[0];
            out.push_back(e);
        }
        return out;
    }

   private:
    std::map<std::tuple<int, int, int>, std::array<double, 2>> edges_;
};

// Adds a mechanism whose nodes are given relative to `top` (final layer) or
// to their lowest layer (bulk).
void accumulate(EdgeAccumulator& acc, std::vector<Node> nodes, bool crossing, double p, bool diagonal) {
    if (nodes.size() == 1) {
        acc.add(nodes[0].j, -1, 0, crossing, p);
        return;
    }
    if (nodes[0].layer > nodes[1].layer || (nodes[0].layer == nodes[1].layer && nodes[0].j > nodes[1].j)) {
        std::swap(nodes[0], nodes[1]);
    }
    const int dt = nodes[1].layer - nodes[0].layer;
    if (dt > 0 && nodes[0].j != nodes[1].j && !diagonal) return;
    acc.add(nodes[0].j, nodes[1].j, dt, crossing, p);
}

double class_mean(const std::vector<LatticeEdge>& edges, bool (LatticeEdge::*pred)() const, int dt) {
    double sum = 0;
    int n = 0;
    for (const LatticeEdge& e : edges) {
        if ((e.*pred)() && (dt < 0 || e.dt == dt)) {
            sum += e.probability;
            ++n;
        }
    }
    return n ? sum / n : 0.0;
}

}  // namespace

const char* to_string(EdgeWeighting w) { return w == EdgeWeighting::Uniform ? "uniform" : "per-edge"; }

EdgeWeighting edge_weighting_from_string(const std::string& s) {
    if (s == "uniform") return EdgeWeighting::Uniform;
    if (s == "per-edge") return EdgeWeighting::PerEdge;
    throw std::invalid_argument("unknown edge weighting '" + s + "'");
}

DecodingLattice build_decoding_lattice(const CodeLayout& layout, const ErrorParams& params, Basis basis,
                                       const LatticeOptions& options) {
    params.validate();
    DecodingLattice lat;
    lat.basis = basis;
    EdgeAccumulator bulk, top;
    const int final_layer = kProbeCycles + 1;

    for (const Mechanism& m : faults_in_cycle(layout, params, basis, kBulkFaultCycle)) {
        bool label = false;
        std::vector<Node> nodes = signature(layout, basis, m.fault, label);
        ++lat.mechanisms;
        if (nodes.empty()) continue;
        if (nodes.size() > 2) {
            ++lat.dropped_high_weight;
            continue;
        }
        for (const Node& n : nodes) {
            if (n.layer == final_layer) throw std::logic_error("bulk probe reached the final layer");
        }
        accumulate(bulk, nodes, label, m.probability, options.diagonal_edges);
    }
    for (int c = kProbeCycles - 2; c <= kProbeCycles + 1; ++c) {
        for (const Mechanism& m : faults_in_cycle(layout, params, basis, c)) {
            bool label = false;
            std::vector<Node> nodes = signature(layout, basis, m.fault, label);
            bool touches_final = false;
            for (const Node& n : nodes) touches_final |= n.layer == final_layer;
            if (!touches_final) continue;
            ++lat.mechanisms;
            if (nodes.size() > 2) {
                ++lat.dropped_high_weight;
                continue;
            }
            // Final-layer node goes second so that dt counts down from T+1.
            if (nodes.size() == 2 && nodes[0].layer == final_layer && nodes[1].layer != final_layer) {
                std::swap(nodes[0], nodes[1]);
            }
            accumulate(top, nodes, label, m.probability, options.diagonal_edges);
        }
    }
    lat.bulk = bulk.edges();
    lat.final_layer = top.edges();

    lat.p_space = class_mean(lat.bulk, &LatticeEdge::is_space, -1);
    lat.p_time = class_mean(lat.bulk, &LatticeEdge::is_time, 1);
    lat.p_time2 = class_mean(lat.bulk, &LatticeEdge::is_time, 2);
    lat.p_diagonal = class_mean(lat.bulk, &LatticeEdge::is_diagonal, -1);
    if (options.weighting == EdgeWeighting::Uniform) {
        auto assign = [&](LatticeEdge& e) {
            if (e.is_boundary() || e.is_space()) {
                e.probability = lat.p_space;
            } else if (e.is_time()) {
                e.probability = e.dt == 1 ? lat.p_time : lat.p_time2;
            } else {
                e.probability = lat.p_diagonal;
            }
            e.probability = std::max(e.probability, kMinProbability);
        };
        for (LatticeEdge& e : lat.bulk) assign(e);
        for (LatticeEdge& e : lat.final_layer) assign(e);
    }
    return lat;
}

namespace {

struct Arc {
    int to;
    double cost;
    bool crossing;
};

// Lattice of `layers` bulk layers, optionally topped by a final layer. Node
// (j, layer) has id (layer-1)*4 + j; the boundary is the last node.
class LayeredGraph {
   public:
    LayeredGraph(const DecodingLattice& lat, int layers, bool with_final)
        : layers_(layers), with_final_(with_final), adj_(static_cast<size_t>(layers + with_final) * 4 + 1) {
        for (const LatticeEdge& e : lat.bulk) {
            for (int la = 1; la + e.dt <= layers; ++la) {
                link(id(e.a, la), e.is_boundary() ? boundary() : id(e.b, la + e.dt), e);
            }
        }
        if (!with_final) return;
        const int top = layers + 1;
        for (const LatticeEdge& e : lat.final_layer) {
            if (e.is_boundary()) {
                link(id(e.a, top), boundary(), e);
            } else if (top - e.dt >= 1) {
                link(id(e.a, top - e.dt), id(e.b, top), e);
            }
        }
    }

    int id(int j, int layer) const { return (layer - 1) * 4 + j; }
    int boundary() const { return static_cast<int>(adj_.size()) - 1; }

    // Dijkstra that never relaxes out of the boundary node.
    void shortest(int source, std::vector<double>& cost, std::vector<char>& crossing) const {
        const double inf = std::numeric_limits<double>::infinity();
        cost.assign(adj_.size(), inf);
        crossing.assign(adj_.size(), 0);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        cost[source] = 0;
        pq.push({0.0, source});
        while (!pq.empty()) {
            const auto [c, u] = pq.top();
            pq.pop();
            if (c > cost[u] || u == boundary()) continue;
            for (const Arc& a : adj_[u]) {
                const double nc = c + a.cost;
                if (nc < cost[a.to]) {
                    cost[a.to] = nc;
                    crossing[a.to] = crossing[u] ^ a.crossing;
                    pq.push({nc, a.to});
                }
            }
        }
    }

   private:
    void link(int u, int v, const LatticeEdge& e) {
        const double c = -std::log(e.probability);
        adj_[u].push_back({v, c, e.crossing});
        adj_[v].push_back({u, c, e.crossing});
    }

    int layers_;
    bool with_final_;
    std::vector<std::vector<Arc>> adj_;
};

constexpr int kMargin = 4;

}  // namespace

LatticeDistances::LatticeDistances(const DecodingLattice& lattice, int max_cycles) : max_cycles_(max_cycles) {
    if (max_cycles < 1) throw std::invalid_argument("max_cycles must be >= 1");
    const size_t n = static_cast<size_t>(16) * (max_cycles + 1);
    bulk_.resize(n);
    final_.resize(n);
    bulk_boundary_.resize(4);
    final_boundary_.resize(4);
    std::vector<double> cost;
    std::vector<char> crossing;

    const LayeredGraph bulk(lattice, max_cycles + 2 * kMargin + 1, false);
    const int start = kMargin + 1;
    for (int j1 = 0; j1 < 4; ++j1) {
        bulk.shortest(bulk.id(j1, start), cost, crossing);
        for (int j2 = 0; j2 < 4; ++j2) {
            for (int dt = 0; dt <= max_cycles; ++dt) {
                const int v = bulk.id(j2, start + dt);
                bulk_[index(j1, j2, dt)] = {cost[v], crossing[v] != 0};
            }
        }
        bulk_boundary_[j1] = {cost[bulk.boundary()], crossing[bulk.boundary()] != 0};
    }

    const int layers = max_cycles + kMargin;
    const LayeredGraph top(lattice, layers, true);
    for (int j1 = 0; j1 < 4; ++j1) {
        top.shortest(top.id(j1, layers + 1), cost, crossing);
        for (int j2 = 0; j2 < 4; ++j2) {
            for (int d = 0; d <= max_cycles; ++d) {
                const int v = top.id(j2, layers + 1 - d);
                final_[index(j1, j2, d)] = {cost[v], crossing[v] != 0};
            }
        }
        final_boundary_[j1] = {cost[top.boundary()], crossing[top.boundary()] != 0};
    }
}

}  // namespace s17
