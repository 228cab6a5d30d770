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

// Command line front end: generate, train, decode, evaluate, sweep, layout.
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "s17/datasets.hpp"
#include "s17/evaluation.hpp"
#include "s17/matching_decoder.hpp"
#include "s17/parallel.hpp"
#include "s17/recurrent_decoder.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace s17;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string hex_u64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Writes `text` to `path` through a temporary file so a failed run leaves
/// no partial manifest.
void write_text(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + path);
        out << text;
        if (!out) throw DataError("write failed on " + path);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw DataError("cannot write " + path + ": " + ec.message());
}

void require_parent_dir(const std::string& path) {
    const fs::path p(path);
    const fs::path parent = p.has_parent_path() ? p.parent_path() : fs::path(".");
    if (!fs::is_directory(parent)) throw DataError("output directory does not exist: " + parent.string());
}

void require_file(const std::string& path, const std::string& what) {
    if (!fs::exists(path)) throw DataError(what + " not found: " + path);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::string preset;
    std::string kind;
    std::string out;
    int64_t count = 0;
    int t_min = 0, t_max = 0;
    std::string params = "reference";
    std::optional<double> p_x, p_y, p_z, p_m;
    uint64_t seed = 1;
    std::string basis = "z";
    int threads = 1;
};

ErrorParams resolve_params(const std::string& name, const std::optional<double>& px, const std::optional<double>& py,
                           const std::optional<double>& pz, const std::optional<double>& pm) {
    ErrorParams p;
    if (name == "reference") {
        p = ErrorParams::reference();
    } else if (name != "zero") {
        throw UsageError("unknown --params '" + name + "' (expected reference or zero)");
    }
    if (px) p.p_x = *px;
    if (py) p.p_y = *py;
    if (pz) p.p_z = *pz;
    if (pm) p.p_m = *pm;
    p.validate();
    return p;
}

int run_generate(const GenerateArgs& a) {
    const ErrorParams params = resolve_params(a.params, a.p_x, a.p_y, a.p_z, a.p_m);
    DatasetManifest m;
    if (!a.preset.empty()) {
        m = dataset_preset(a.preset, params, a.seed);
    } else {
        if (a.kind.empty()) throw UsageError("either --preset or --kind is required");
        m.kind = dataset_kind_from_string(a.kind);
        m.params = params;
        m.base_seed = a.seed;
    }
    if (a.count) m.count = a.count;
    if (a.t_min) m.t_min = a.t_min;
    if (a.t_max) m.t_max = a.t_max;
    m.basis = basis_from_string(a.basis);
    m.validate();
    generate(build_surface17(), m, a.out, a.threads);
    std::cout << "generated " << m.count << " " << to_string(m.kind) << " sequences (T " << m.t_min << ".."
              << m.t_max << ") -> " << a.out << "\nmanifest -> " << manifest_path(a.out) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string train, validation, out, log;
    std::string preset = "desk";
    std::optional<int> batch_size, epoch_batches, patience, restarts, max_epochs, hidden, eval_units;
    std::optional<double> learning_rate, keep_prob, weight_decay;
    uint64_t seed = 1;
};

int run_train(const TrainArgs& a) {
    TrainConfig c = TrainConfig::preset(a.preset);
    if (a.batch_size) c.batch_size = *a.batch_size;
    if (a.epoch_batches) c.epoch_batches = *a.epoch_batches;
    if (a.patience) c.patience = *a.patience;
    if (a.restarts) c.restarts = *a.restarts;
    if (a.max_epochs) c.max_epochs = *a.max_epochs;
    if (a.hidden) c.hidden = *a.hidden;
    if (a.eval_units) c.eval_units = *a.eval_units;
    if (a.learning_rate) c.learning_rate = *a.learning_rate;
    if (a.keep_prob) c.keep_prob = *a.keep_prob;
    if (a.weight_decay) c.weight_decay = *a.weight_decay;
    c.seed = a.seed;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    require_file(a.train, "training set");
    require_file(a.validation, "validation set");
    require_parent_dir(a.out);
    const DatasetManifest mt = read_manifest(a.train), mv = read_manifest(a.validation);
    if (mt.basis != mv.basis) throw DataError("training and validation sets decode different bases");
    const std::vector<SyndromeSequence> train_set = load_all(a.train);
    const std::vector<SyndromeSequence> validation_set = load_all(a.validation);

    const std::string log_path = a.log.empty() ? a.out + ".log.csv" : a.log;
    std::ofstream log(log_path, std::ios::trunc);
    if (!log) throw DataError("cannot write " + log_path);
    log << "restart,epoch,train_loss,validation_error,checkpointed\n";
    auto on_epoch = [&](int restart, const EpochRecord& r) {
        log << restart << "," << r.epoch << "," << fmt(r.train_loss) << "," << fmt(r.validation_error) << ","
            << (r.checkpointed ? 1 : 0) << "\n";
        log.flush();
        std::cout << "restart " << restart << " epoch " << r.epoch << " loss " << fmt(r.train_loss)
                  << " validation error " << fmt(r.validation_error) << (r.checkpointed ? " *" : "") << "\n";
    };

    std::vector<DecoderModel> models;
    for (int r = 0; r < c.restarts; ++r) {
        models.push_back(train_single(c, train_set, validation_set, mt.basis, derive_seed(c.seed, r), r, on_epoch));
    }
    const size_t best = select_best(models, validation_set);
    save_checkpoint(models[best], a.out);

    json restarts = json::array();
    for (const DecoderModel& m : models) {
        restarts.push_back({{"restart", m.info.restart},
                            {"seed", hex_u64(m.info.seed)},
                            {"epochs", m.info.epochs},
                            {"best_epoch", m.info.best_epoch},
                            {"validation_error", m.info.validation_error}});
    }
    json manifest{{"command", "train"},
                  {"train_config", json::parse(c.to_json())},
                  {"preset", a.preset},
                  {"train_data", a.train},
                  {"train_manifest", json::parse(mt.to_json())},
                  {"validation_data", a.validation},
                  {"validation_manifest", json::parse(mv.to_json())},
                  {"restarts", restarts},
                  {"selected_restart", best},
                  {"checkpoint", a.out},
                  {"log", log_path}};
    write_text(a.out + ".manifest.json", manifest.dump(2) + "\n");
    std::cout << "selected restart " << best << " (validation error " << fmt(models[best].info.validation_error)
              << ") -> " << a.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- decode

struct DecodeArgs {
    std::string data, decoder = "blossom", checkpoint, out;
    std::string weighting = "per-edge";
    bool no_diagonal = false;
    int threads = 1;
};

MatchingDecoderOptions matching_options(const std::string& weighting, bool no_diagonal, int max_cycles) {
    MatchingDecoderOptions o;
    try {
        o.lattice.weighting = edge_weighting_from_string(weighting);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    o.lattice.diagonal_edges = !no_diagonal;
    o.max_cycles = max_cycles;
    return o;
}

int run_decode(const DecodeArgs& a) {
    if (a.decoder != "blossom" && a.decoder != "nn") throw UsageError("--decoder must be blossom or nn");
    require_file(a.data, "dataset");
    if (a.decoder == "nn") {
        if (a.checkpoint.empty()) throw UsageError("--checkpoint is required for --decoder nn");
        require_file(a.checkpoint, "checkpoint");
    }
    require_parent_dir(a.out);
    const DatasetManifest m = read_manifest(a.data);
    const std::vector<SyndromeSequence> seqs = load_all(a.data);

    std::vector<uint8_t> parity(seqs.size());
    std::vector<double> weight(seqs.size(), 0);
    std::string describe;
    if (a.decoder == "blossom") {
        const MatchingDecoder md(build_surface17(), m.params, m.basis,
                                 matching_options(a.weighting, a.no_diagonal, m.t_max));
        describe = md.describe();
        parallel_for(seqs.size(), a.threads, [&](size_t i) {
            const Matching match = md.decode_matching(seqs[i]);
            parity[i] = match.parity;
            weight[i] = match.weight;
        });
    } else {
        const DecoderModel model = load_checkpoint(a.checkpoint);
        if (model.basis() != m.basis) throw DataError("checkpoint and dataset decode different bases");
        describe = checkpoint_metadata(model);
        const std::vector<double> p = predict(model, seqs, a.threads);
        for (size_t i = 0; i < seqs.size(); ++i) parity[i] = p[i] >= 0.5 ? 1 : 0;
    }

    std::ofstream out(a.out, std::ios::trunc);
    if (!out) throw DataError("cannot write " + a.out);
    out << "index,decoder,predicted_parity,true_parity,correct,matching_weight\n";
    int64_t correct = 0;
    for (size_t i = 0; i < seqs.size(); ++i) {
        const bool ok = parity[i] == seqs[i].label;
        correct += ok;
        out << i << "," << a.decoder << "," << int(parity[i]) << "," << int(seqs[i].label) << "," << int(ok) << ","
            << (a.decoder == "blossom" ? fmt(weight[i]) : "") << "\n";
    }
    out.close();
    if (!out) throw DataError("write failed on " + a.out);

    json manifest{{"command", "decode"},     {"decoder", a.decoder},
                  {"data", a.data},          {"data_manifest", json::parse(m.to_json())},
                  {"checkpoint", a.checkpoint}, {"decoder_description", describe},
                  {"output", a.out},         {"sequences", seqs.size()},
                  {"correct", correct}};
    write_text(a.out + ".manifest.json", manifest.dump(2) + "\n");
    std::cout << a.decoder << ": " << correct << "/" << seqs.size() << " correct -> " << a.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string data, checkpoint, out_dir;
    std::vector<std::string> decoders{"blossom"};
    std::string weighting = "per-edge";
    bool no_diagonal = false;
    int resamples = kDefaultResamples;
    int fit_resamples = 200;
    uint64_t seed = 1;
    int threads = 1;
};

int run_evaluate(const EvaluateArgs& a) {
    for (const std::string& d : a.decoders) {
        if (d != "blossom" && d != "nn") throw UsageError("--decoder must be blossom or nn");
    }
    const bool want_nn = std::count(a.decoders.begin(), a.decoders.end(), "nn") > 0;
    require_file(a.data, "test set");
    if (want_nn) {
        if (a.checkpoint.empty()) throw UsageError("--checkpoint is required for --decoder nn");
        require_file(a.checkpoint, "checkpoint");
    }
    if (!fs::is_directory(a.out_dir)) throw DataError("output directory does not exist: " + a.out_dir);
    const DatasetManifest m = read_manifest(a.data);
    if (!m.per_cycle_labels()) throw DataError(a.data + " has no per-cycle labels (need a test set)");
    const std::vector<SyndromeSequence> seqs = load_all(a.data);
    if (seqs.front().cycles < 3) throw DataError("test sequences need at least 3 cycles");
    for (const auto& s : seqs) {
        if (s.cycles != seqs.front().cycles) throw DataError("test sequences must share one length");
    }
    const std::vector<int> points = t_points(seqs.front().cycles);

    std::optional<MatchingDecoder> md;
    std::optional<DecoderModel> model;
    std::map<std::string, CorrectnessTable> tables;
    std::map<std::string, FidelityCurve> curves;
    std::map<std::string, DecayFit> fits;
    std::map<std::string, double> eps_sigma;
    json decoders = json::object();
    for (const std::string& name : a.decoders) {
        CurveDecoder dec;
        if (name == "blossom") {
            md.emplace(build_surface17(), m.params, m.basis, matching_options(a.weighting, a.no_diagonal, m.t_max));
            dec = blossom_curve_decoder(*md);
            decoders[name] = md->describe();
        } else {
            model.emplace(load_checkpoint(a.checkpoint));
            if (model->basis() != m.basis) throw DataError("checkpoint and test set decode different bases");
            dec = neural_curve_decoder(*model);
            decoders[name] = json::parse(checkpoint_metadata(*model));
        }
        tables[name] = score(dec, seqs, points, a.threads);
        curves[name] = fidelity_curve(tables[name], a.resamples, a.seed);
        fits[name] = fit_decay(curves[name]);
        eps_sigma[name] = epsilon_bootstrap_sigma(tables[name], curves[name], a.fit_resamples, a.seed);
        std::ofstream c(a.out_dir + "/curve_" + name + ".csv", std::ios::trunc);
        write_curve_csv(c, curves[name]);
        if (!c) throw DataError("write failed in " + a.out_dir);
        std::cout << name << ": epsilon " << fmt(fits[name].epsilon) << " (bootstrap sigma " << fmt(eps_sigma[name])
                  << "), t0 " << fmt(fits[name].t0) << "\n";
    }
    {
        std::ofstream f(a.out_dir + "/fits.csv", std::ios::trunc);
        write_fits_header(f);
        for (const std::string& name : a.decoders) write_fit_row(f, name, fits[name]);
        if (!f) throw DataError("write failed in " + a.out_dir);
    }
    json manifest{{"command", "evaluate"},
                  {"data", a.data},
                  {"data_manifest", json::parse(m.to_json())},
                  {"checkpoint", a.checkpoint},
                  {"decoders", decoders},
                  {"points", points},
                  {"resamples", a.resamples},
                  {"fit_resamples", a.fit_resamples},
                  {"seed", hex_u64(a.seed)}};
    if (tables.count("blossom") && tables.count("nn")) {
        const PairedComparison pc = paired_epsilon_difference(tables["blossom"], curves["blossom"], tables["nn"],
                                                              curves["nn"], a.fit_resamples, a.seed);
        const double eb = fits["blossom"].epsilon, en = fits["nn"].epsilon;
        std::ofstream c(a.out_dir + "/comparison.csv", std::ios::trunc);
        c << "p_x,p_y,p_z,p_m,epsilon_blossom,epsilon_nn,sigma_blossom,sigma_nn,ratio_nn_blossom,improvement,"
             "delta_blossom_minus_nn,delta_sigma\n";
        c << fmt(m.params.p_x) << "," << fmt(m.params.p_y) << "," << fmt(m.params.p_z) << "," << fmt(m.params.p_m)
          << "," << fmt(eb) << "," << fmt(en) << "," << fmt(eps_sigma["blossom"]) << "," << fmt(eps_sigma["nn"])
          << "," << fmt(eb > 0 ? en / eb : 0) << "," << fmt(eb > 0 ? relative_improvement(en, eb) : 0) << ","
          << fmt(pc.delta) << "," << fmt(pc.sigma) << "\n";
        if (!c) throw DataError("write failed in " + a.out_dir);
        std::cout << "blossom - nn: " << fmt(pc.delta) << " (paired bootstrap sigma " << fmt(pc.sigma) << ")\n";
    }
    write_text(a.out_dir + "/manifest.json", manifest.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

int run_sweep(const std::vector<std::string>& dirs, const std::string& out_path) {
    std::vector<std::pair<double, std::string>> rows;
    std::string header;
    for (const std::string& d : dirs) {
        const std::string path = d + "/comparison.csv";
        std::ifstream in(path);
        if (!in) throw DataError("missing " + path + " (run evaluate with both decoders first)");
        std::string h, row;
        if (!std::getline(in, h) || !std::getline(in, row)) throw DataError("malformed " + path);
        if (!header.empty() && h != header) throw DataError("inconsistent comparison tables");
        header = h;
        std::vector<std::string> cells;
        std::stringstream ss(row);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        rows.emplace_back(std::stod(cells.at(1)), row);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    require_parent_dir(out_path);
    std::ofstream out(out_path, std::ios::trunc);
    out << header << "\n";
    for (const auto& r : rows) out << r.second << "\n";
    if (!out) throw DataError("write failed on " + out_path);
    std::cout << "p_y sweep over " << rows.size() << " runs -> " << out_path << "\n";
    return kExitOk;
}

/// Reads `key=value` lines ('#' comments) into options of `cmd` that were
/// not given on the command line.
void apply_config(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw DataError("cannot read config file " + path);
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const auto trim = [](std::string x) {
            const size_t b = x.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            return x.substr(b, x.find_last_not_of(" \t\r") - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        std::replace(key.begin(), key.end(), '_', '-');
        CLI::Option* opt = key == "config" ? nullptr : cmd->get_option_no_throw("--" + key);
        if (opt == nullptr) throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

void add_params_flags(CLI::App* cmd, std::string& params, std::optional<double>& px, std::optional<double>& py,
                      std::optional<double>& pz, std::optional<double>& pm) {
    cmd->add_option("--params", params, "Base error parameters: reference or zero")->capture_default_str();
    cmd->add_option("--px", px, "Override p_x");
    cmd->add_option("--py", py, "Override p_y");
    cmd->add_option("--pz", pz, "Override p_z");
    cmd->add_option("--pm", pm, "Override p_m");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"s17: Surface-17 memory simulation, matching and recurrent decoders"};
    app.require_subcommand(1);
    std::vector<std::pair<CLI::App*, std::string>> config_paths;
    config_paths.reserve(4);
    auto add_config = [&](CLI::App* cmd) {
        config_paths.emplace_back(cmd, std::string());
        cmd->add_option("--config", config_paths.back().second, "key=value file; flags win");
    };

    GenerateArgs gen;
    CLI::App* g = app.add_subcommand("generate", "Generate a dataset and its manifest");
    add_config(g);
    g->add_option("--preset", gen.preset, "{paper,desk}-{train,validation,test}");
    g->add_option("--kind", gen.kind, "train, validation or test (without --preset)");
    g->add_option("--out", gen.out, "Dataset file")->required();
    g->add_option("--count", gen.count, "Number of sequences");
    g->add_option("--t-min", gen.t_min, "Shortest sequence");
    g->add_option("--t-max", gen.t_max, "Longest sequence");
    add_params_flags(g, gen.params, gen.p_x, gen.p_y, gen.p_z, gen.p_m);
    g->add_option("--seed", gen.seed, "Base seed")->capture_default_str();
    g->add_option("--basis", gen.basis, "Decoded basis: z or x")->capture_default_str();
    g->add_option("--threads", gen.threads, "Worker threads")->capture_default_str();

    TrainArgs tr;
    CLI::App* t = app.add_subcommand("train", "Train the recurrent decoder (restarts + selection)");
    add_config(t);
    t->add_option("--train", tr.train, "Training set")->required();
    t->add_option("--validation", tr.validation, "Validation set")->required();
    t->add_option("--out", tr.out, "Checkpoint file")->required();
    t->add_option("--log", tr.log, "Training log CSV (default <out>.log.csv)");
    t->add_option("--preset", tr.preset, "paper or desk")->capture_default_str();
    t->add_option("--batch-size", tr.batch_size);
    t->add_option("--epoch-batches", tr.epoch_batches);
    t->add_option("--patience", tr.patience);
    t->add_option("--restarts", tr.restarts);
    t->add_option("--max-epochs", tr.max_epochs, "0: no cap");
    t->add_option("--hidden", tr.hidden);
    t->add_option("--eval-units", tr.eval_units);
    t->add_option("--learning-rate", tr.learning_rate);
    t->add_option("--keep-prob", tr.keep_prob);
    t->add_option("--weight-decay", tr.weight_decay);
    t->add_option("--seed", tr.seed, "Base seed of the restarts")->capture_default_str();

    DecodeArgs de;
    CLI::App* d = app.add_subcommand("decode", "Per-sequence predictions as CSV");
    add_config(d);
    d->add_option("--data", de.data, "Dataset")->required();
    d->add_option("--decoder", de.decoder, "blossom or nn")->capture_default_str();
    d->add_option("--checkpoint", de.checkpoint, "Checkpoint (nn)");
    d->add_option("--out", de.out, "Output CSV")->required();
    d->add_option("--weighting", de.weighting, "Matching edge weights: per-edge or uniform")->capture_default_str();
    d->add_flag("--no-diagonal", de.no_diagonal, "Drop diagonal matching edges");
    d->add_option("--threads", de.threads)->capture_default_str();

    EvaluateArgs ev;
    CLI::App* e = app.add_subcommand("evaluate", "Fidelity curves, decay fits and comparison");
    add_config(e);
    e->add_option("--data", ev.data, "Test set with per-cycle labels")->required();
    e->add_option("--decoder", ev.decoders, "blossom and/or nn (repeatable)")->capture_default_str();
    e->add_option("--checkpoint", ev.checkpoint, "Checkpoint (nn)");
    e->add_option("--out-dir", ev.out_dir, "Existing output directory")->required();
    e->add_option("--weighting", ev.weighting)->capture_default_str();
    e->add_flag("--no-diagonal", ev.no_diagonal);
    e->add_option("--resamples", ev.resamples, "Bootstrap resamples per fidelity point")->capture_default_str();
    e->add_option("--fit-resamples", ev.fit_resamples, "Bootstrap resamples for epsilon")->capture_default_str();
    e->add_option("--seed", ev.seed)->capture_default_str();
    e->add_option("--threads", ev.threads)->capture_default_str();

    std::vector<std::string> sweep_dirs;
    std::string sweep_out;
    CLI::App* s = app.add_subcommand("sweep", "Collect comparison rows of several evaluate runs");
    s->add_option("--eval-dir", sweep_dirs, "Evaluate output directory (repeatable)")->required();
    s->add_option("--out", sweep_out, "Output CSV")->required();

    CLI::App* l = app.add_subcommand("layout", "Print the code layout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        for (auto& [cmd, path] : config_paths) {
            if (cmd->parsed()) apply_config(cmd, path);
        }
        if (g->parsed()) return run_generate(gen);
        if (t->parsed()) return run_train(tr);
        if (d->parsed()) return run_decode(de);
        if (e->parsed()) return run_evaluate(ev);
        if (s->parsed()) return run_sweep(sweep_dirs, sweep_out);
        if (l->parsed()) {
            std::cout << build_surface17().describe();
            return kExitOk;
        }
    } catch (const UsageError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const DataError& err) {
        std::cerr << "data error: " << err.what() << "\n";
        return kExitData;
    } catch (const NumericError& err) {
        std::cerr << "numeric failure: " << err.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& err) {
        std::cerr << "data error: " << err.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
