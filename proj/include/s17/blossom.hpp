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

#ifndef S17_BLOSSOM_HPP_
#define S17_BLOSSOM_HPP_

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace s17 {

/// Resolution of matching weights. Weights are stored as exact multiples of
/// this quantum so that sums are exact and integer arithmetic is lossless.
inline constexpr double kWeightQuantum = 0x1.0p-20;

double quantize_weight(double w);

struct Defect {
    int stabilizer = 0;  // index within the decoded family, 0..3
    int cycle = 0;       // 1..T, or T+1 for the final readout

    bool operator==(const Defect&) const = default;
};

struct MatchingEdge {
    int u = 0;
    int v = 0;  // == MatchingGraph::boundary() for a boundary edge
    double weight = 0;
    bool crossing = false;
};

/// Defect graph with a single boundary vertex. The matching treats the
/// boundary as an unlimited supply of partners; boundary-boundary pairs are
/// free. Edges with u == v == boundary() are accepted and ignored.
struct MatchingGraph {
    std::vector<Defect> defects;
    std::vector<MatchingEdge> edges;

    int num_defects() const { return static_cast<int>(defects.size()); }
    int boundary() const { return num_defects(); }

    void add_edge(int u, int v, double weight, bool crossing = false);
};

struct Matching {
    // Pairs (u, v) with u < v; v == boundary for defects matched to it.
    std::vector<std::pair<int, int>> pairs;
    double weight = 0;
    bool parity = false;  // XOR of crossing parities of the matched edges
};

class MatchingError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Exact minimum-weight perfect matching via primal-dual Edmonds blossom
/// shrinking, O(V^3). Every defect is matched to another defect or to the
/// boundary. Throws MatchingError if no perfect matching exists (a defect
/// without any edge) or an edge weight is negative or not quantized.
Matching mwpm(const MatchingGraph& graph);

/// Exhaustive minimum over all perfect matchings; for testing only.
inline constexpr int kBruteForceMaxDefects = 12;
Matching brute_force_mwpm(const MatchingGraph& graph);

/// Maximum-weight matching on a general graph with integer weights. With
/// `max_cardinality`, the maximum-weight matching among those of maximum
/// cardinality. Returns mate[v] (or -1) for v in [0, num_vertices).
std::vector<int> max_weight_matching(int num_vertices, const std::vector<std::pair<int, int>>& endpoints,
                                     const std::vector<int64_t>& weights, bool max_cardinality);

}  // namespace s17

#endif  // S17_BLOSSOM_HPP_
