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

#ifndef S17_DATASETS_HPP_
#define S17_DATASETS_HPP_

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "s17/code_layout.hpp"
#include "s17/pauli_sim.hpp"

namespace s17 {

/// Malformed or missing input data (CLI exit code 2).
class DataError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class DatasetKind { Train, Validation, Test };

const char* to_string(DatasetKind k);
DatasetKind dataset_kind_from_string(const std::string& s);

inline constexpr int kDatasetFormatVersion = 1;
inline constexpr const char* kDatasetFormat = "s17-syndromes";
inline constexpr const char* kLayoutId = "surface17-v1";

/// Sidecar description of a dataset file. Test sets always carry per-cycle
/// labels; training and validation sets only the final one.
struct DatasetManifest {
    DatasetKind kind = DatasetKind::Train;
    int64_t count = 0;
    int t_min = 1;
    int t_max = 1;
    ErrorParams params;
    uint64_t base_seed = 0;
    Basis basis = Basis::Z;
    int format_version = kDatasetFormatVersion;
    std::string rng_algorithm = kRngAlgorithm;

    bool per_cycle_labels() const { return kind == DatasetKind::Test; }

    /// Throws std::invalid_argument on count <= 0, empty/invalid T range or
    /// bad error params.
    void validate() const;

    std::string to_json() const;
    static DatasetManifest from_json(const std::string& text);

    bool operator==(const DatasetManifest&) const = default;
};

/// Named dataset shapes. "paper-*" are the full-size sets of the reference
/// protocol, "desk-*" the reduced sets used by the acceptance pipeline.
/// Names: {paper,desk}-{train,validation,test}.
DatasetManifest dataset_preset(const std::string& name, const ErrorParams& params, uint64_t base_seed);

std::string manifest_path(const std::string& data_path);

/// One newline-free JSON object; see docs/dataset_format.md.
std::string encode_record(const SyndromeSequence& seq);
SyndromeSequence decode_record(const std::string& line, int64_t index);

/// Cycle count and seed of sequence `index`, derived from the manifest alone.
int sequence_cycles(const DatasetManifest& manifest, int64_t index);
uint64_t sequence_seed(const DatasetManifest& manifest, int64_t index);

SyndromeSequence generate_sequence(const CodeLayout& layout, const DatasetManifest& manifest, int64_t index);

/// Writes `manifest.count` records to `path` and the manifest next to it.
/// The manifest is written last; on failure no manifest is left behind.
/// Throws DataError on I/O failure (including a missing parent directory).
void generate(const CodeLayout& layout, const DatasetManifest& manifest, const std::string& path, int threads = 1);

DatasetManifest read_manifest(const std::string& data_path);

/// Streaming reader; holds one record in memory at a time.
class DatasetReader {
   public:
    explicit DatasetReader(const std::string& path);

    const DatasetManifest& manifest() const { return manifest_; }

    /// Reads the next record; returns false at a clean end of file. Throws
    /// DataError for a corrupt or truncated record, or when the file holds a
    /// different number of records than the manifest declares.
    bool next(SyndromeSequence& out);

    int64_t records_read() const { return index_; }

   private:
    std::string path_;
    DatasetManifest manifest_;
    std::ifstream in_;
    int64_t index_ = 0;
};

std::vector<SyndromeSequence> load_all(const std::string& path);

}  // namespace s17

#endif  // S17_DATASETS_HPP_
