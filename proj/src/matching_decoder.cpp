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

#include "s17/matching_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace s17 {

MatchingDecoder::MatchingDecoder(const CodeLayout& layout, const ErrorParams& params, Basis basis,
                                 const MatchingDecoderOptions& options)
    : lattice_(build_decoding_lattice(layout, params, basis, options.lattice)),
      distances_(lattice_, options.max_cycles),
      weighting_(options.lattice.weighting),
      diagonal_(options.lattice.diagonal_edges) {}

MatchingGraph MatchingDecoder::build_graph(const SyndromeSequence& seq) const {
    const int T = seq.cycles;
    if (T > max_cycles()) {
        throw std::invalid_argument("sequence of " + std::to_string(T) + " cycles exceeds decoder horizon " +
                                    std::to_string(max_cycles()));
    }
    MatchingGraph g;
    const int shift = basis() == Basis::Z ? 4 : 0;
    for (int t = 1; t <= T; ++t) {
        const int bits = (seq.increments[t - 1] >> shift) & 0xF;
        for (int j = 0; j < 4; ++j) {
            if ((bits >> j) & 1) g.defects.push_back({j, t});
        }
    }
    for (int j = 0; j < 4; ++j) {
        if ((seq.final_increment >> j) & 1) g.defects.push_back({j, T + 1});
    }

    const int n = g.num_defects();
    auto add = [&](int u, int v, const LatticeDistances::Entry& e) {
        if (std::isfinite(e.cost)) g.add_edge(u, v, quantize_weight(e.cost), e.crossing);
    };
    for (int u = 0; u < n; ++u) {
        const Defect& a = g.defects[u];
        const bool a_final = a.cycle == T + 1;
        add(u, n, a_final ? distances_.final_boundary(a.stabilizer) : distances_.bulk_boundary(a.stabilizer));
        for (int v = u + 1; v < n; ++v) {
            // Defects are ordered by cycle, so b is never earlier than a.
            const Defect& b = g.defects[v];
            if (b.cycle == T + 1) {
                add(u, v, distances_.final_to(b.stabilizer, a.stabilizer, T + 1 - a.cycle));
            } else {
                add(u, v, distances_.bulk(a.stabilizer, b.stabilizer, b.cycle - a.cycle));
            }
        }
    }
    return g;
}

Matching MatchingDecoder::decode_matching(const SyndromeSequence& seq) const { return mwpm(build_graph(seq)); }

std::string MatchingDecoder::describe() const {
    std::ostringstream os;
    os << "basis=" << to_string(basis()) << " weighting=" << to_string(weighting_)
       << " diagonal_edges=" << (diagonal_ ? 1 : 0) << " p_space=" << lattice_.p_space << " p_time=" << lattice_.p_time
       << " p_time2=" << lattice_.p_time2 << " p_diagonal=" << lattice_.p_diagonal << " bulk_edges=" << lattice_.bulk.size()
       << " final_edges=" << lattice_.final_layer.size() << " mechanisms=" << lattice_.mechanisms
       << " dropped=" << lattice_.dropped_high_weight;
    return os.str();
}

MatchingGraph build_graph(const SyndromeSequence& seq, Basis basis, const CodeLayout& layout,
                          const ErrorParams& params) {
    MatchingDecoderOptions opt;
    opt.max_cycles = std::max(seq.cycles, 1);
    return MatchingDecoder(layout, params, basis, opt).build_graph(seq);
}

uint8_t decode(const SyndromeSequence& seq, Basis basis, const CodeLayout& layout, const ErrorParams& params) {
    MatchingDecoderOptions opt;
    opt.max_cycles = std::max(seq.cycles, 1);
    return MatchingDecoder(layout, params, basis, opt).decode(seq);
}

}  // namespace s17
