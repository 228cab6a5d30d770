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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Criteria 4-8 are computed here; 1-3 and 9
// read the outputs of two desk pipeline runs, which are produced on demand
// and reused while their DONE markers exist.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../gradcheck.hpp"
#include "CLI11.hpp"
#include "s17/evaluation.hpp"
#include "s17/matching_decoder.hpp"
#include "s17/recurrent_decoder.hpp"
#include "s17/rng.hpp"

namespace fs = std::filesystem;
using namespace s17;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string pct(double x) { return fmt("%.4f%%", 100 * x); }

// ------------------------------------------------------------ live criteria

MatchingGraph random_graph(Rng& rng, int n, double density) {
    MatchingGraph g;
    for (int i = 0; i < n; ++i) g.defects.push_back({i % 4, 1 + i / 4});
    for (int u = 0; u < n; ++u) {
        g.add_edge(u, n, quantize_weight(rng.uniform() * 10), rng.bernoulli(0.5));
        for (int v = u + 1; v < n; ++v) {
            if (rng.uniform() < density) g.add_edge(u, v, quantize_weight(rng.uniform() * 10), rng.bernoulli(0.5));
        }
    }
    return g;
}

Outcome oracle_equivalence() {
    Rng rng(0x5eed0004);
    int agree = 0;
    const int trials = 1000;
    for (int k = 0; k < trials; ++k) {
        const int n = static_cast<int>(rng.uniform_int(0, kBruteForceMaxDefects));
        const MatchingGraph g = random_graph(rng, n, k % 3 == 0 ? 1.0 : 0.2 + 0.6 * rng.uniform());
        agree += mwpm(g).weight == brute_force_mwpm(g).weight;
    }
    return {agree == trials, std::to_string(agree) + "/" + std::to_string(trials) + " random graphs (<= " +
                                 std::to_string(kBruteForceMaxDefects) + " defects) match brute force"};
}

Outcome single_error_exhaustive() {
    const CodeLayout layout = build_surface17();
    const int T = 5;
    int correct = 0, total = 0;
    for (Basis basis : {Basis::Z, Basis::X}) {
        const MatchingDecoder dec(layout, ErrorParams::reference(), basis);
        for (int t = 1; t <= T; ++t) {
            for (int q = 0; q < CodeLayout::kNumData; ++q) {
                for (Pauli pauli : {Pauli::X, Pauli::Z}) {
                    ExperimentOptions opt;
                    opt.cycles = T;
                    opt.basis = basis;
                    opt.forced.paulis.push_back({t, q, pauli});
                    const SyndromeSequence s = run_experiment(layout, opt);
                    correct += dec.decode(s) == s.label;
                    ++total;
                }
            }
        }
    }
    return {correct == total, std::to_string(correct) + "/" + std::to_string(total) +
                                  " single data errors (both bases, t = 1..5) decoded to the frame label"};
}

Outcome gradient_checks() {
    Rng rng(0x5eed0006);
    const int configs = 100;
    double dense = 0, lstm = 0, loss = 0;
    for (int k = 0; k < configs; ++k) {
        dense = std::max(dense, gradcheck::dense_trial(rng));
        lstm = std::max(lstm, gradcheck::lstm_trial(rng));
        loss = std::max(loss, gradcheck::loss_trial(rng));
    }
    const double worst = std::max({dense, lstm, loss});
    return {worst < 1e-4, std::to_string(configs) + " configurations per layer, worst relative error dense " +
                              fmt("%.2e", dense) + ", lstm " + fmt("%.2e", lstm) + ", loss " + fmt("%.2e", loss)};
}

Outcome fit_self_inversion() {
    const std::vector<int> ts = t_points(300);
    double worst = 0;
    for (double eps : {1e-4, 1e-3, 1e-2}) {
        for (double t0 : {0.0, 2.0, 5.0}) {
            FidelityCurve c;
            c.decoder = "exact";
            for (int t : ts) c.points.push_back({t, decay_model(eps, t0, t), 0.0});
            const DecayFit f = fit_decay(c);
            worst = std::max({worst, std::abs(f.epsilon - eps), std::abs(f.t0 - t0)});
        }
    }
    return {worst < 1e-6, "9 exact curves, worst parameter error " + fmt("%.2e", worst)};
}

Outcome combine_properties() {
    double worst = 0;
    bool identity = true;
    for (int i = 0; i < 100; ++i) {
        const double a = i / 99.0;
        identity = identity && combine(a, 0) == a;
        for (int j = 0; j < 100; ++j) {
            const double b = j / 99.0;
            worst = std::max(worst, std::abs(combine(a, b) - combine(b, a)));
            worst = std::max(worst, std::abs(combine(1 - a, 1 - b) - combine(a, b)));
        }
    }
    const double tol = 4 * std::numeric_limits<double>::epsilon();
    return {identity && worst <= tol, "100x100 grid: symmetry and flip invariance within " + fmt("%.1e", worst) +
                                          (identity ? ", combine(p, 0) == p exactly" : ", combine(p, 0) != p")};
}

// ------------------------------------------------------- pipeline criteria

using Row = std::map<std::string, double>;

Row read_comparison(const fs::path& path) {
    std::ifstream in(path);
    std::string header, values;
    if (!std::getline(in, header) || !std::getline(in, values)) throw std::runtime_error("cannot read " + path.string());
    std::stringstream hs(header), vs(values);
    Row row;
    for (std::string h, v; std::getline(hs, h, ',') && std::getline(vs, v, ',');) row[h] = std::stod(v);
    return row;
}

bool ensure_run(const std::string& script, const std::string& s17, const fs::path& dir, int threads) {
    if (fs::exists(dir / "DONE")) return true;
    const std::string log = dir.string() + ".log";
    const std::string cmd = "bash '" + script + "' '" + s17 + "' '" + dir.string() + "' " + std::to_string(threads) +
                            " > '" + log + "' 2>&1";
    std::cout << "running desk pipeline into " << dir << " (log " << log << ")" << std::endl;
    return std::system(cmd.c_str()) == 0 && fs::exists(dir / "DONE");
}

Outcome blossom_baseline(const Row& py1) {
    const double e = py1.at("epsilon_blossom");
    return {e >= 0.0021 && e <= 0.0035, "blossom epsilon " + pct(e) + " (sigma " + pct(py1.at("sigma_blossom")) +
                                            ") on 1e4 sequences of T = 300, band [0.21%, 0.35%]"};
}

Outcome neural_desk(const Row& py1, const Row& py2) {
    const double ratio = py1.at("epsilon_nn") / py1.at("epsilon_blossom");
    const bool a = ratio <= 1.05;
    const double delta = py2.at("delta_blossom_minus_nn"), sigma = py2.at("delta_sigma");
    const double sigma_indep = std::hypot(py2.at("sigma_blossom"), py2.at("sigma_nn"));
    const bool b = delta > 0 && delta >= 3 * sigma;
    std::string d = "(a) p_y = p_x: nn " + pct(py1.at("epsilon_nn")) + " vs blossom " + pct(py1.at("epsilon_blossom")) +
                    ", ratio " + fmt("%.3f", ratio) + " (<= 1.05) " + (a ? "ok" : "not met") +
                    "; (b) p_y = 2p_x: nn " + pct(py2.at("epsilon_nn")) + " vs blossom " +
                    pct(py2.at("epsilon_blossom")) + ", difference " + fmt("%.2f", delta / sigma) +
                    " paired sigma (" + fmt("%.2f", delta / sigma_indep) + " independent) " + (b ? "ok" : "not met");
    return {a && b, d};
}

Outcome py_zero_control(const Row& py0) {
    const double en = py0.at("epsilon_nn"), eb = py0.at("epsilon_blossom");
    const double rel = std::abs(en - eb) / eb;
    return {rel <= 0.15, "p_y = 0: nn " + pct(en) + " vs blossom " + pct(eb) + ", relative difference " +
                             fmt("%.1f%%", 100 * rel) + " (<= 15%)"};
}

bool is_artifact(const fs::path& p) {
    const std::string ext = p.extension().string();
    return ext == ".s17" || ext == ".ckpt" || ext == ".csv";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const fs::path& a, const fs::path& b) {
    std::vector<fs::path> files_a, files_b;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (e.is_regular_file() && is_artifact(e.path())) files_a.push_back(fs::relative(e.path(), a));
    }
    for (const auto& e : fs::recursive_directory_iterator(b)) {
        if (e.is_regular_file() && is_artifact(e.path())) files_b.push_back(fs::relative(e.path(), b));
    }
    std::sort(files_a.begin(), files_a.end());
    std::sort(files_b.begin(), files_b.end());
    if (files_a != files_b) return {false, "the two runs produced different file sets"};
    int identical = 0;
    std::uintmax_t bytes = 0;
    std::string first_diff;
    for (const fs::path& rel : files_a) {
        const bool same = slurp(a / rel) == slurp(b / rel);
        identical += same;
        bytes += same ? fs::file_size(a / rel) : 0;
        if (!same && first_diff.empty()) first_diff = rel.string();
    }
    const bool ok = !files_a.empty() && identical == static_cast<int>(files_a.size());
    std::string d = std::to_string(identical) + "/" + std::to_string(files_a.size()) +
                    " datasets, checkpoints and CSVs byte-identical (" + std::to_string(bytes >> 20) +
                    " MiB) across runs with 1 and 2 threads";
    if (!first_diff.empty()) d += "; first difference: " + first_diff;
    return {ok, d};
}

void report(int id, const Outcome& o, int& failures) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << o.detail << std::endl;
    failures += !o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"s17 acceptance suite"};
    std::string s17, script, work;
    int threads_b = 2;
    bool live_only = false;
    app.add_option("--s17", s17, "s17 binary")->required();
    app.add_option("--pipeline", script, "desk pipeline script")->required();
    app.add_option("--work", work, "directory holding the cached pipeline runs")->required();
    app.add_option("--threads-b", threads_b, "thread count of the second run")->capture_default_str();
    app.add_flag("--live-only", live_only, "skip the pipeline criteria (reported as FAIL)");
    CLI11_PARSE(app, argc, argv);

    int failures = 0;
    std::vector<std::pair<int, Outcome>> results;
    results.emplace_back(4, oracle_equivalence());
    results.emplace_back(5, single_error_exhaustive());
    results.emplace_back(6, gradient_checks());
    results.emplace_back(7, fit_self_inversion());
    results.emplace_back(8, combine_properties());

    const fs::path run_a = fs::path(work) / "run_a", run_b = fs::path(work) / "run_b";
    if (live_only) {
        for (int id : {1, 2, 3, 9}) results.emplace_back(id, Outcome{false, "not evaluated (--live-only)"});
    } else {
        fs::create_directories(work);
        const bool ok_a = ensure_run(script, s17, run_a, 1);
        if (ok_a) {
            try {
                const Row py1 = read_comparison(run_a / "py1/eval/comparison.csv");
                const Row py2 = read_comparison(run_a / "py2/eval/comparison.csv");
                const Row py0 = read_comparison(run_a / "py0/eval/comparison.csv");
                results.emplace_back(1, blossom_baseline(py1));
                results.emplace_back(2, neural_desk(py1, py2));
                results.emplace_back(3, py_zero_control(py0));
            } catch (const std::exception& e) {
                for (int id : {1, 2, 3}) results.emplace_back(id, Outcome{false, e.what()});
            }
        } else {
            for (int id : {1, 2, 3}) results.emplace_back(id, Outcome{false, "desk pipeline failed, see run_a.log"});
        }
        const bool ok_b = ok_a && ensure_run(script, s17, run_b, threads_b);
        results.emplace_back(9, ok_b ? determinism(run_a, run_b) : Outcome{false, "desk pipeline did not complete"});
    }

    std::sort(results.begin(), results.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [id, o] : results) report(id, o, failures);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
