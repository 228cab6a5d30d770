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

#include "s17/datasets.hpp"

#include <cstdio>
#include <filesystem>
#include <thread>

#include "json.hpp"

namespace s17 {

using nlohmann::json;

const char* to_string(DatasetKind k) {
    switch (k) {
        case DatasetKind::Train: return "train";
        case DatasetKind::Validation: return "validation";
        case DatasetKind::Test: return "test";
    }
    return "?";
}

DatasetKind dataset_kind_from_string(const std::string& s) {
    if (s == "train") return DatasetKind::Train;
    if (s == "validation") return DatasetKind::Validation;
    if (s == "test") return DatasetKind::Test;
    throw std::invalid_argument("unknown dataset kind '" + s + "'");
}

void DatasetManifest::validate() const {
    if (count <= 0) throw std::invalid_argument("dataset count must be positive");
    if (t_min < 1 || t_max < t_min) throw std::invalid_argument("invalid cycle range");
    params.validate();
}

namespace {

std::string hex_u64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

uint64_t parse_u64(const std::string& s) {
    size_t pos = 0;
    const uint64_t v = std::stoull(s, &pos, 0);
    if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

constexpr char kHex[] = "0123456789abcdef";

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw std::invalid_argument(std::string("bad hex digit '") + c + "'");
}

}  // namespace

std::string DatasetManifest::to_json() const {
    json j;
    j["format"] = kDatasetFormat;
    j["format_version"] = format_version;
    j["layout"] = kLayoutId;
    j["kind"] = to_string(kind);
    j["count"] = count;
    j["t_min"] = t_min;
    j["t_max"] = t_max;
    j["basis"] = to_string(basis);
    j["params"] = {{"p_x", params.p_x}, {"p_y", params.p_y}, {"p_z", params.p_z}, {"p_m", params.p_m}};
    j["base_seed"] = hex_u64(base_seed);
    j["rng"] = rng_algorithm;
    j["per_cycle_labels"] = per_cycle_labels();
    return j.dump(2) + "\n";
}

DatasetManifest DatasetManifest::from_json(const std::string& text) {
    DatasetManifest m;
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != kDatasetFormat) throw DataError("not an s17 dataset manifest");
        m.format_version = j.at("format_version").get<int>();
        if (m.format_version != kDatasetFormatVersion) {
            throw DataError("unsupported dataset format version " + std::to_string(m.format_version));
        }
        if (j.at("layout").get<std::string>() != kLayoutId) throw DataError("dataset built for another layout");
        m.kind = dataset_kind_from_string(j.at("kind").get<std::string>());
        m.count = j.at("count").get<int64_t>();
        m.t_min = j.at("t_min").get<int>();
        m.t_max = j.at("t_max").get<int>();
        m.basis = basis_from_string(j.at("basis").get<std::string>());
        const json& p = j.at("params");
        m.params = {p.at("p_x").get<double>(), p.at("p_y").get<double>(), p.at("p_z").get<double>(),
                    p.at("p_m").get<double>()};
        m.base_seed = parse_u64(j.at("base_seed").get<std::string>());
        m.rng_algorithm = j.at("rng").get<std::string>();
        m.validate();
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(std::string("invalid manifest: ") + e.what());
    }
    return m;
}

DatasetManifest dataset_preset(const std::string& name, const ErrorParams& params, uint64_t base_seed) {
    DatasetManifest m;
    m.params = params;
    m.base_seed = base_seed;
    const auto dash = name.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("unknown preset '" + name + "'");
    const std::string scale = name.substr(0, dash);
    const std::string kind = name.substr(dash + 1);
    if (scale != "paper" && scale != "desk") throw std::invalid_argument("unknown preset '" + name + "'");
    const bool paper = scale == "paper";
    m.kind = dataset_kind_from_string(kind);
    switch (m.kind) {
        case DatasetKind::Train:
            m.count = paper ? 4'000'000 : 200'000;
            m.t_min = 11;
            m.t_max = 20;
            break;
        case DatasetKind::Validation:
            m.count = 10'000;
            m.t_min = 81;
            m.t_max = 100;
            break;
        case DatasetKind::Test:
            m.count = paper ? 50'000 : 10'000;
            m.t_min = m.t_max = 300;
            break;
    }
    return m;
}

std::string manifest_path(const std::string& data_path) { return data_path + ".manifest.json"; }

std::string encode_record(const SyndromeSequence& seq) {
    std::string inc;
    inc.reserve(2 * seq.increments.size());
    for (uint8_t b : seq.increments) {
        inc += kHex[b >> 4];
        inc += kHex[b & 0xF];
    }
    json j;
    j["T"] = seq.cycles;
    j["seed"] = hex_u64(seq.seed);
    j["inc"] = inc;
    j["fin"] = std::string(1, kHex[seq.final_increment & 0xF]);
    j["label"] = static_cast<int>(seq.label);
    if (seq.has_cycle_labels()) {
        std::string fin_t, label_t;
        for (uint8_t f : seq.final_increments_by_cycle) fin_t += kHex[f & 0xF];
        for (uint8_t l : seq.labels_by_cycle) label_t += l ? '1' : '0';
        j["fin_t"] = fin_t;
        j["label_t"] = label_t;
    }
    return j.dump();
}

SyndromeSequence decode_record(const std::string& line, int64_t index) {
    SyndromeSequence seq;
    try {
        const json j = json::parse(line);
        seq.cycles = j.at("T").get<int>();
        if (seq.cycles < 1) throw std::invalid_argument("T < 1");
        seq.seed = parse_u64(j.at("seed").get<std::string>());
        const std::string inc = j.at("inc").get<std::string>();
        if (inc.size() != 2 * static_cast<size_t>(seq.cycles)) throw std::invalid_argument("increment length != 2T");
        seq.increments.resize(seq.cycles);
        for (int t = 0; t < seq.cycles; ++t) {
            seq.increments[t] = static_cast<uint8_t>(hex_digit(inc[2 * t]) << 4 | hex_digit(inc[2 * t + 1]));
        }
        const std::string fin = j.at("fin").get<std::string>();
        if (fin.size() != 1) throw std::invalid_argument("final increment must be one hex digit");
        seq.final_increment = static_cast<uint8_t>(hex_digit(fin[0]));
        const int label = j.at("label").get<int>();
        if (label != 0 && label != 1) throw std::invalid_argument("label must be 0 or 1");
        seq.label = static_cast<uint8_t>(label);
        if (j.contains("fin_t")) {
            const std::string fin_t = j.at("fin_t").get<std::string>();
            const std::string label_t = j.at("label_t").get<std::string>();
            if (fin_t.size() != static_cast<size_t>(seq.cycles) || label_t.size() != static_cast<size_t>(seq.cycles)) {
                throw std::invalid_argument("per-cycle field length != T");
            }
            for (char c : fin_t) seq.final_increments_by_cycle.push_back(static_cast<uint8_t>(hex_digit(c)));
            for (char c : label_t) {
                if (c != '0' && c != '1') throw std::invalid_argument("per-cycle label must be 0/1");
                seq.labels_by_cycle.push_back(c == '1');
            }
        }
    } catch (const std::exception& e) {
        throw DataError("corrupt record " + std::to_string(index) + ": " + e.what());
    }
    return seq;
}

int sequence_cycles(const DatasetManifest& m, int64_t index) {
    if (m.t_min == m.t_max) return m.t_min;
    Rng rng(derive_seed(m.base_seed, ~static_cast<uint64_t>(index)));
    return static_cast<int>(rng.uniform_int(m.t_min, m.t_max));
}

uint64_t sequence_seed(const DatasetManifest& m, int64_t index) {
    return derive_seed(m.base_seed, static_cast<uint64_t>(index));
}

SyndromeSequence generate_sequence(const CodeLayout& layout, const DatasetManifest& m, int64_t index) {
    ExperimentOptions opt;
    opt.cycles = sequence_cycles(m, index);
    opt.params = m.params;
    opt.seed = sequence_seed(m, index);
    opt.record_every_cycle = m.per_cycle_labels();
    opt.basis = m.basis;
    return run_experiment(layout, opt);
}

void generate(const CodeLayout& layout, const DatasetManifest& m, const std::string& path, int threads) {
    m.validate();
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path parent = target.has_parent_path() ? target.parent_path() : fs::path(".");
    if (!fs::is_directory(parent)) throw DataError("output directory does not exist: " + parent.string());
    const std::string mpath = manifest_path(path);
    std::error_code ec;
    fs::remove(mpath, ec);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");

    threads = std::max(1, threads);
    constexpr int64_t kChunk = 4096;
    std::vector<std::string> lines(kChunk);
    for (int64_t begin = 0; begin < m.count; begin += kChunk) {
        const int64_t end = std::min(m.count, begin + kChunk);
        auto work = [&](int w) {
            for (int64_t i = begin + w; i < end; i += threads) {
                lines[i - begin] = encode_record(generate_sequence(layout, m, i));
            }
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
            for (auto& th : pool) th.join();
        }
        for (int64_t i = begin; i < end; ++i) out << lines[i - begin] << '\n';
        if (!out) throw DataError("write failed on " + path);
    }
    out.close();
    if (!out) throw DataError("write failed on " + path);

    const std::string tmp = mpath + ".tmp";
    {
        std::ofstream mf(tmp, std::ios::binary | std::ios::trunc);
        mf << m.to_json();
        if (!mf) throw DataError("cannot write manifest " + mpath);
    }
    fs::rename(tmp, mpath, ec);
    if (ec) throw DataError("cannot write manifest " + mpath + ": " + ec.message());
}

DatasetManifest read_manifest(const std::string& data_path) {
    const std::string mpath = manifest_path(data_path);
    std::ifstream in(mpath, std::ios::binary);
    if (!in) throw DataError("missing manifest " + mpath);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return DatasetManifest::from_json(text);
}

DatasetReader::DatasetReader(const std::string& path) : path_(path), manifest_(read_manifest(path)) {
    in_.open(path, std::ios::binary);
    if (!in_) throw DataError("cannot open dataset " + path);
}

bool DatasetReader::next(SyndromeSequence& out) {
    std::string line;
    if (!std::getline(in_, line)) {
        if (index_ != manifest_.count) {
            throw DataError(path_ + ": file ends after " + std::to_string(index_) + " records, manifest declares " +
                            std::to_string(manifest_.count) + " (last complete record " +
                            std::to_string(index_ - 1) + ")");
        }
        return false;
    }
    if (in_.eof()) {
        throw DataError(path_ + ": record " + std::to_string(index_) + " is truncated (last complete record " +
                        std::to_string(index_ - 1) + ")");
    }
    if (index_ >= manifest_.count) {
        throw DataError(path_ + ": more records than the manifest declares (" + std::to_string(manifest_.count) + ")");
    }
    out = decode_record(line, index_);
    if (out.cycles < manifest_.t_min || out.cycles > manifest_.t_max) {
        throw DataError("corrupt record " + std::to_string(index_) + ": T outside manifest range");
    }
    if (manifest_.per_cycle_labels() && !out.has_cycle_labels()) {
        throw DataError("corrupt record " + std::to_string(index_) + ": missing per-cycle labels");
    }
    ++index_;
    return true;
}

std::vector<SyndromeSequence> load_all(const std::string& path) {
    DatasetReader reader(path);
    std::vector<SyndromeSequence> out;
    out.reserve(static_cast<size_t>(reader.manifest().count));
    SyndromeSequence seq;
    while (reader.next(seq)) out.push_back(std::move(seq));
    return out;
}

}  // namespace s17
