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

#include "s17/recurrent_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

#include "json.hpp"
#include "s17/datasets.hpp"
#include "s17/nn/adam.hpp"
#include "s17/nn/serialize.hpp"
#include "s17/parallel.hpp"

namespace s17 {

using nlohmann::json;
using Mat = DecoderModel::Mat;

namespace {

constexpr const char* kCheckpointFormat = "s17-decoder";
constexpr int kCheckpointVersion = 1;
constexpr Eigen::Index kInferenceBatch = 256;

std::string hex_u64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

uint64_t parse_u64(const std::string& s) { return std::stoull(s, nullptr, 0); }

/// Indices of `seqs` grouped by cycle count, in ascending length order.
std::map<int, std::vector<size_t>> group_by_length(const std::vector<SyndromeSequence>& seqs) {
    std::map<int, std::vector<size_t>> groups;
    for (size_t i = 0; i < seqs.size(); ++i) groups[seqs[i].cycles].push_back(i);
    return groups;
}

/// Work items of at most kInferenceBatch equally long sequences.
std::vector<std::vector<size_t>> inference_chunks(const std::vector<SyndromeSequence>& seqs) {
    std::vector<std::vector<size_t>> chunks;
    for (const auto& [T, idx] : group_by_length(seqs)) {
        for (size_t k = 0; k < idx.size(); k += kInferenceBatch) {
            chunks.emplace_back(idx.begin() + k, idx.begin() + std::min(idx.size(), k + kInferenceBatch));
        }
    }
    return chunks;
}

/// Draws mini-batches of one length at a time. A length group is chosen with
/// probability proportional to its size; each group is walked through a
/// private permutation that is reshuffled when exhausted.
class BatchSampler {
   public:
    BatchSampler(const std::vector<SyndromeSequence>& seqs, int batch_size, uint64_t seed)
        : seqs_(seqs), batch_size_(batch_size), rng_(seed) {
        for (auto& [T, idx] : group_by_length(seqs)) groups_.push_back({std::move(idx), 0});
        for (auto& g : groups_) shuffle(g.order);
    }

    std::vector<const SyndromeSequence*> next() {
        int64_t r = rng_.uniform_int(0, static_cast<int64_t>(seqs_.size()) - 1);
        size_t gi = 0;
        while (r >= static_cast<int64_t>(groups_[gi].order.size())) r -= groups_[gi++].order.size();
        Group& g = groups_[gi];
        std::vector<const SyndromeSequence*> batch;
        const size_t want = std::min<size_t>(batch_size_, g.order.size());
        while (batch.size() < want) {
            if (g.cursor == g.order.size()) {
                shuffle(g.order);
                g.cursor = 0;
            }
            batch.push_back(&seqs_[g.order[g.cursor++]]);
        }
        return batch;
    }

   private:
    struct Group {
        std::vector<size_t> order;
        size_t cursor;
    };

    void shuffle(std::vector<size_t>& v) {
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_.uniform_int(0, static_cast<int64_t>(i) - 1)]);
    }

    const std::vector<SyndromeSequence>& seqs_;
    int batch_size_;
    Rng rng_;
    std::vector<Group> groups_;
};

json history_to_json(const std::vector<EpochRecord>& history) {
    json h = json::array();
    for (const EpochRecord& r : history) {
        h.push_back({{"epoch", r.epoch},
                     {"train_loss", r.train_loss},
                     {"validation_error", r.validation_error},
                     {"checkpointed", r.checkpointed}});
    }
    return h;
}

bool finite_parameters(DecoderModel& model) {
    bool ok = true;
    model.visit("", [&](const std::string&, Mat& v, Mat&) { ok = ok && v.allFinite(); });
    return ok;
}

}  // namespace

TrainConfig TrainConfig::paper() { return TrainConfig{}; }

TrainConfig TrainConfig::desk() {
    TrainConfig c;
    c.epoch_batches = 500;
    c.learning_rate = 3e-3;
    c.patience = 20;
    c.max_epochs = 150;
    return c;
}

TrainConfig TrainConfig::preset(const std::string& name) {
    if (name == "paper") return paper();
    if (name == "desk") return desk();
    throw std::invalid_argument("unknown training preset '" + name + "' (expected paper or desk)");
}

void TrainConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("train config: ") + what);
    };
    require(batch_size >= 1, "batch_size must be >= 1");
    require(epoch_batches >= 1, "epoch_batches must be >= 1");
    require(learning_rate > 0 && std::isfinite(learning_rate), "learning_rate must be > 0");
    require(keep_prob > 0 && keep_prob <= 1, "keep_prob must be in (0, 1]");
    require(weight_decay >= 0 && std::isfinite(weight_decay), "weight_decay must be >= 0");
    require(patience >= 1, "patience must be >= 1");
    require(restarts >= 1, "restarts must be >= 1");
    require(max_epochs >= 0, "max_epochs must be >= 0");
    require(hidden >= 1 && eval_units >= 1, "layer sizes must be >= 1");
    require(window >= 1, "window must be >= 1");
}

std::string TrainConfig::to_json() const {
    json j{{"batch_size", batch_size},       {"epoch_batches", epoch_batches}, {"learning_rate", learning_rate},
           {"keep_prob", keep_prob},         {"weight_decay", weight_decay},   {"patience", patience},
           {"restarts", restarts},           {"max_epochs", max_epochs},       {"hidden", hidden},
           {"eval_units", eval_units},       {"window", window},               {"seed", hex_u64(seed)}};
    return j.dump();
}

TrainConfig TrainConfig::from_json(const std::string& text) {
    const json j = json::parse(text);
    TrainConfig c;
    c.batch_size = j.at("batch_size").get<int>();
    c.epoch_batches = j.at("epoch_batches").get<int>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.keep_prob = j.at("keep_prob").get<double>();
    c.weight_decay = j.at("weight_decay").get<double>();
    c.patience = j.at("patience").get<int>();
    c.restarts = j.at("restarts").get<int>();
    c.max_epochs = j.at("max_epochs").get<int>();
    c.hidden = j.at("hidden").get<int>();
    c.eval_units = j.at("eval_units").get<int>();
    c.window = j.at("window").get<int>();
    c.seed = parse_u64(j.at("seed").get<std::string>());
    c.validate();
    return c;
}

std::vector<std::vector<double>> curve_probabilities(const DecoderModel& model,
                                                     const std::vector<const SyndromeSequence*>& seqs,
                                                     const std::vector<int>& points) {
    if (seqs.empty()) return {};
    const int T = seqs.front()->cycles;
    for (const SyndromeSequence* s : seqs) {
        if (s->cycles != T) throw std::invalid_argument("curve_probabilities: sequences differ in length");
        if (!s->has_cycle_labels()) throw std::invalid_argument("curve_probabilities: per-cycle records missing");
    }
    for (size_t k = 0; k < points.size(); ++k) {
        if (points[k] < model.window() || points[k] > T || (k && points[k] <= points[k - 1])) {
            throw std::invalid_argument("curve_probabilities: bad evaluation points");
        }
    }
    const Eigen::Index B = static_cast<Eigen::Index>(seqs.size());
    std::vector<Mat> xs(T);
    for (int t = 0; t < T; ++t) xs[t] = increment_column_block<float>(seqs, t);

    std::vector<std::vector<double>> result(seqs.size(), std::vector<double>(points.size()));
    auto state1 = model.net1.zero_state(B);
    int done = 0;
    const Mat none;
    for (size_t k = 0; k < points.size(); ++k) {
        const int t = points[k];
        for (; done < t; ++done) model.net1.advance(state1, xs[done]);
        const Mat p1 = model.net1.readout(state1, none);

        std::vector<uint8_t> finals(seqs.size());
        for (size_t b = 0; b < seqs.size(); ++b) finals[b] = seqs[b]->final_increments_by_cycle[t - 1];
        auto state2 = model.net2.zero_state(B);
        for (int u = t - model.window(); u < t; ++u) model.net2.advance(state2, xs[u]);
        const Mat p2 = model.net2.readout(state2, final_column_block<float>(finals));
        for (Eigen::Index b = 0; b < B; ++b) result[b][k] = combine(p1(0, b), p2(0, b));
    }
    return result;
}

std::vector<double> predict(const DecoderModel& model, const std::vector<SyndromeSequence>& seqs, int threads) {
    std::vector<double> p(seqs.size());
    const auto chunks = inference_chunks(seqs);
    parallel_for(chunks.size(), threads, [&](size_t c) {
        std::vector<const SyndromeSequence*> ptrs;
        for (size_t i : chunks[c]) ptrs.push_back(&seqs[i]);
        const auto out = model.forward(make_batch<float>(ptrs));
        for (size_t k = 0; k < chunks[c].size(); ++k) p[chunks[c][k]] = out[k].p;
    });
    return p;
}

double logical_error_rate(const DecoderModel& model, const std::vector<SyndromeSequence>& seqs, int threads) {
    if (seqs.empty()) throw std::invalid_argument("logical_error_rate: empty dataset");
    const std::vector<double> p = predict(model, seqs, threads);
    int64_t wrong = 0;
    for (size_t i = 0; i < seqs.size(); ++i) wrong += (p[i] >= 0.5 ? 1 : 0) != seqs[i].label;
    return static_cast<double>(wrong) / static_cast<double>(seqs.size());
}

DecoderModel train_single(const TrainConfig& config, const std::vector<SyndromeSequence>& train_set,
                          const std::vector<SyndromeSequence>& validation_set, Basis basis, uint64_t seed,
                          int restart, const EpochCallback& on_epoch) {
    config.validate();
    if (train_set.empty()) throw std::invalid_argument("train: empty training set");
    if (validation_set.empty()) throw std::invalid_argument("train: empty validation set");
    for (const auto* set : {&train_set, &validation_set}) {
        for (const SyndromeSequence& s : *set) {
            if (s.cycles < config.window) {
                throw std::invalid_argument("train: sequence shorter than the window (" + std::to_string(s.cycles) +
                                            " cycles)");
            }
        }
    }

    DecoderModel model(config.hidden, config.eval_units, config.window, basis);
    Rng init_rng(derive_seed(seed, 0));
    model.init(init_rng);
    model.config = config;
    model.info.seed = seed;
    model.info.restart = restart;

    BatchSampler sampler(train_set, config.batch_size, derive_seed(seed, 1));
    Rng drop_rng(derive_seed(seed, 2));
    const DropoutSpec drop{config.keep_prob, &drop_rng};
    nn::Adam<float> adam(nn::AdamConfig{config.learning_rate});

    DecoderModel best = model;
    double best_error = std::numeric_limits<double>::infinity();
    int since_best = 0;
    for (int epoch = 1;; ++epoch) {
        double loss_sum = 0;
        for (int k = 0; k < config.epoch_batches; ++k) {
            const DecoderBatch<float> batch = make_batch<float>(sampler.next());
            model.zero_gradients();
            const double loss = model.loss_and_gradient(batch, drop);
            if (!std::isfinite(loss)) {
                throw NumericError("non-finite training loss at restart " + std::to_string(restart) + ", epoch " +
                                   std::to_string(epoch) + ", batch " + std::to_string(k));
            }
            model.add_decay_gradient(config.weight_decay);
            adam.step(model);
            loss_sum += loss;
        }
        if (!finite_parameters(model)) {
            throw NumericError("non-finite parameters after epoch " + std::to_string(epoch) + " of restart " +
                               std::to_string(restart));
        }
        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_sum / config.epoch_batches;
        rec.validation_error = logical_error_rate(model, validation_set);
        rec.checkpointed = rec.validation_error < best_error;
        model.info.history.push_back(rec);
        model.info.epochs = epoch;
        if (on_epoch) on_epoch(restart, rec);
        if (rec.checkpointed) {
            best_error = rec.validation_error;
            since_best = 0;
            best = model;
            best.info.best_epoch = epoch;
            best.info.validation_error = best_error;
        } else {
            ++since_best;
        }
        if (since_best >= config.patience || (config.max_epochs && epoch >= config.max_epochs)) break;
    }
    best.info.history = model.info.history;
    best.info.epochs = model.info.epochs;
    return best;
}

size_t select_best(const std::vector<DecoderModel>& models, const std::vector<SyndromeSequence>& validation_set) {
    if (models.empty()) throw std::invalid_argument("select_best: no models");
    size_t best = 0;
    double best_rate = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < models.size(); ++i) {
        const double r = logical_error_rate(models[i], validation_set);
        if (r < best_rate) {
            best_rate = r;
            best = i;
        }
    }
    return best;
}

DecoderModel train(const TrainConfig& config, const std::vector<SyndromeSequence>& train_set,
                   const std::vector<SyndromeSequence>& validation_set, Basis basis, const EpochCallback& on_epoch) {
    config.validate();
    std::vector<DecoderModel> models;
    for (int r = 0; r < config.restarts; ++r) {
        models.push_back(train_single(config, train_set, validation_set, basis, derive_seed(config.seed, r), r,
                                      on_epoch));
    }
    return models[select_best(models, validation_set)];
}

std::string checkpoint_metadata(const DecoderModel& model) {
    const TrainingInfo& info = model.info;
    json j{{"format", kCheckpointFormat},
           {"format_version", kCheckpointVersion},
           {"layout", kLayoutId},
           {"basis", to_string(model.basis())},
           {"hidden", model.hidden()},
           {"eval_units", model.eval_units()},
           {"window", model.window()},
           {"scalar", "float32"},
           {"init", "uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)); biases 0; lstm forget bias 1; output bias -2"},
           {"train_config", json::parse(model.config.to_json())},
           {"training",
            {{"seed", hex_u64(info.seed)},
             {"restart", info.restart},
             {"epochs", info.epochs},
             {"best_epoch", info.best_epoch},
             {"validation_error", std::isnan(info.validation_error) ? json(nullptr) : json(info.validation_error)},
             {"history", history_to_json(info.history)}}}};
    return j.dump();
}

void save_checkpoint(const DecoderModel& model, const std::string& path) {
    nn::TensorArchive archive;
    archive.metadata = checkpoint_metadata(model);
    auto& m = const_cast<DecoderModel&>(model);
    m.visit("", [&](const std::string& name, Mat& v, Mat&) { archive.put(name, v); });
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    try {
        archive.write(out);
    } catch (const std::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

DecoderModel load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("checkpoint not found: " + path);
    try {
        const nn::TensorArchive archive = nn::TensorArchive::read(in);
        const json j = json::parse(archive.metadata);
        if (j.at("format").get<std::string>() != kCheckpointFormat) throw DataError("not an s17 decoder checkpoint");
        if (j.at("format_version").get<int>() != kCheckpointVersion) throw DataError("unsupported checkpoint version");
        if (j.at("layout").get<std::string>() != kLayoutId) throw DataError("checkpoint built for another layout");
        DecoderModel model(j.at("hidden").get<int>(), j.at("eval_units").get<int>(), j.at("window").get<int>(),
                           basis_from_string(j.at("basis").get<std::string>()));
        model.config = TrainConfig::from_json(j.at("train_config").dump());
        const json& t = j.at("training");
        model.info.seed = parse_u64(t.at("seed").get<std::string>());
        model.info.restart = t.at("restart").get<int>();
        model.info.epochs = t.at("epochs").get<int>();
        model.info.best_epoch = t.at("best_epoch").get<int>();
        if (!t.at("validation_error").is_null()) model.info.validation_error = t.at("validation_error").get<double>();
        for (const json& r : t.at("history")) {
            model.info.history.push_back({r.at("epoch").get<int>(), r.at("train_loss").get<double>(),
                                          r.at("validation_error").get<double>(), r.at("checkpointed").get<bool>()});
        }
        model.visit("", [&](const std::string& name, Mat& v, Mat&) { archive.get(name, v); });
        return model;
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

}  // namespace s17
