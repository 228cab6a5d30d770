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

#ifndef S17_MATCHING_DECODER_HPP_
#define S17_MATCHING_DECODER_HPP_

#include <string>

#include "s17/blossom.hpp"
#include "s17/code_layout.hpp"
#include "s17/decoding_lattice.hpp"
#include "s17/pauli_sim.hpp"

namespace s17 {

struct MatchingDecoderOptions {
    LatticeOptions lattice;
    int max_cycles = 320;
};

/// MWPM decoder for one basis. Builds the lattice and its distance tables
/// once; decoding is const and thread safe.
class MatchingDecoder {
   public:
    MatchingDecoder(const CodeLayout& layout, const ErrorParams& params, Basis basis,
                    const MatchingDecoderOptions& options = {});

    Basis basis() const { return lattice_.basis; }
    int max_cycles() const { return distances_.max_cycles(); }
    const DecodingLattice& lattice() const { return lattice_; }
    const LatticeDistances& distances() const { return distances_; }

    /// Defects of the decoded family: increments at cycles 1..T and the final
    /// increment at T+1. Throws std::invalid_argument if T > max_cycles().
    MatchingGraph build_graph(const SyndromeSequence& seq) const;

    /// Predicted parity of logical flips (XOR of matched crossing parities).
    uint8_t decode(const SyndromeSequence& seq) const { return decode_matching(seq).parity; }
    Matching decode_matching(const SyndromeSequence& seq) const;

    /// Metadata line describing the weighting in use.
    std::string describe() const;

   private:
    DecodingLattice lattice_;
    LatticeDistances distances_;
    EdgeWeighting weighting_;
    bool diagonal_;
};

/// Convenience forms that construct a decoder per call.
MatchingGraph build_graph(const SyndromeSequence& seq, Basis basis, const CodeLayout& layout,
                          const ErrorParams& params);
uint8_t decode(const SyndromeSequence& seq, Basis basis, const CodeLayout& layout, const ErrorParams& params);

}  // namespace s17

#endif  // S17_MATCHING_DECODER_HPP_
