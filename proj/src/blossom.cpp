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

#include "s17/blossom.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

namespace s17 {

double quantize_weight(double w) { return std::round(w / kWeightQuantum) * kWeightQuantum; }

void MatchingGraph::add_edge(int u, int v, double weight, bool crossing) {
    edges.push_back({u, v, weight, crossing});
}

namespace {

// Primal-dual weighted matching after Galil's formulation of Edmonds'
// algorithm, following the structure of J. van Rantwijk's reference code.
// Vertices carry dual y_v, blossoms z_b; edge slack is y_i + y_j - 2 w_ij.
// Endpoint p of edge k is vertex endpoint[p]; p = 2k or 2k+1.
class WeightedMatcher {
   public:
    WeightedMatcher(int n, const std::vector<std::pair<int, int>>& ends, const std::vector<int64_t>& w)
        : nv_(n), ne_(static_cast<int>(ends.size())), edges_(ends), weight_(w) {
        int64_t maxw = 0;
        for (int64_t x : w) maxw = std::max(maxw, x);
        endpoint_.resize(2 * ne_);
        neighbend_.assign(nv_, {});
        for (int k = 0; k < ne_; ++k) {
            endpoint_[2 * k] = ends[k].first;
            endpoint_[2 * k + 1] = ends[k].second;
            neighbend_[ends[k].first].push_back(2 * k + 1);
            neighbend_[ends[k].second].push_back(2 * k);
        }
        mate_.assign(nv_, -1);
        label_.assign(2 * nv_, 0);
        labelend_.assign(2 * nv_, -1);
        inblossom_.resize(nv_);
        for (int v = 0; v < nv_; ++v) inblossom_[v] = v;
        blossomparent_.assign(2 * nv_, -1);
        blossomchilds_.assign(2 * nv_, {});
        blossombase_.assign(2 * nv_, -1);
        for (int v = 0; v < nv_; ++v) blossombase_[v] = v;
        blossomendps_.assign(2 * nv_, {});
        bestedge_.assign(2 * nv_, -1);
        blossombestedges_.assign(2 * nv_, {});
        has_bestedges_.assign(2 * nv_, false);
        for (int b = 2 * nv_ - 1; b >= nv_; --b) unused_.push_back(b);
        dualvar_.assign(2 * nv_, 0);
        for (int v = 0; v < nv_; ++v) dualvar_[v] = maxw;
        allowedge_.assign(ne_, false);
    }

    std::vector<int> solve(bool max_cardinality) {
        for (int stage = 0; stage < nv_; ++stage) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = nv_; b < 2 * nv_; ++b) {
                blossombestedges_[b].clear();
                has_bestedges_[b] = false;
            }
            std::fill(allowedge_.begin(), allowedge_.end(), false);
            queue_.clear();
            for (int v = 0; v < nv_; ++v) {
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
            }
            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    const int v = queue_.back();
                    queue_.pop_back();
                    assert(label_[inblossom_[v]] == 1);
                    for (int p : neighbend_[v]) {
                        const int k = p / 2;
                        const int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) continue;
                        int64_t kslack = 0;
                        if (!allowedge_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) allowedge_[k] = true;
                        }
                        if (allowedge_[k]) {
                            if (label_[inblossom_[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[inblossom_[w]] == 1) {
                                const int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                assert(label_[inblossom_[w]] == 2);
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            const int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
                        }
                    }
                }
                if (augmented) break;

                int deltatype = -1;
                int64_t delta = 0;
                int deltaedge = -1, deltablossom = -1;
                if (!max_cardinality) {
                    deltatype = 1;
                    delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_);
                }
                for (int v = 0; v < nv_; ++v) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        const int64_t d = slack(bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * nv_; ++b) {
                    if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        const int64_t kslack = slack(bestedge_[b]);
                        assert(kslack % 2 == 0);
                        const int64_t d = kslack / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = nv_; b < 2 * nv_; ++b) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                        (deltatype == -1 || dualvar_[b] < delta)) {
                        delta = dualvar_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    // Maximum cardinality reached; final update keeps the duals verifiable.
                    deltatype = 1;
                    delta = std::max<int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_));
                }

                for (int v = 0; v < nv_; ++v) {
                    if (label_[inblossom_[v]] == 1) {
                        dualvar_[v] -= delta;
                    } else if (label_[inblossom_[v]] == 2) {
                        dualvar_[v] += delta;
                    }
                }
                for (int b = nv_; b < 2 * nv_; ++b) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                        if (label_[b] == 1) {
                            dualvar_[b] += delta;
                        } else if (label_[b] == 2) {
                            dualvar_[b] -= delta;
                        }
                    }
                }

                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge_[deltaedge] = true;
                    int i = edges_[deltaedge].first, j = edges_[deltaedge].second;
                    if (label_[inblossom_[i]] == 0) std::swap(i, j);
                    assert(label_[inblossom_[i]] == 1);
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allowedge_[deltaedge] = true;
                    const int i = edges_[deltaedge].first;
                    assert(label_[inblossom_[i]] == 1);
                    queue_.push_back(i);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) break;
            for (int b = nv_; b < 2 * nv_; ++b) {
                if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
                    expand_blossom(b, true);
                }
            }
        }
        std::vector<int> out(nv_, -1);
        for (int v = 0; v < nv_; ++v) {
            if (mate_[v] >= 0) out[v] = endpoint_[mate_[v]];
        }
        return out;
    }

   private:
    int64_t slack(int k) const {
        return dualvar_[edges_[k].first] + dualvar_[edges_[k].second] - 2 * weight_[k];
    }

    static int wrap(int j, int n) { return j < 0 ? j + n : j; }

    void leaves(int b, std::vector<int>& out) const {
        if (b < nv_) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds_[b]) leaves(t, out);
    }

    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p) {
        const int b = inblossom_[w];
        assert(label_[w] == 0 && label_[b] == 0);
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            leaves(b, queue_);
        } else if (t == 2) {
            const int base = blossombase_[b];
            assert(mate_[base] >= 0);
            assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
        }
    }

    // Returns the base of the new blossom, or -1 if v and w lie in different trees.
    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = blossombase_[b];
                break;
            }
            assert(label_[b] == 1);
            path.push_back(b);
            label_[b] = 5;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[labelend_[b]];
                b = inblossom_[v];
                assert(label_[b] == 2);
                v = endpoint_[labelend_[b]];
            }
            if (w != -1) std::swap(v, w);
        }
        for (int b : path) label_[b] = 1;
        return base;
    }

    void add_blossom(int base, int k) {
        int v = edges_[k].first, w = edges_[k].second;
        const int bb = inblossom_[base];
        int bv = inblossom_[v];
        int bw = inblossom_[w];
        const int b = unused_.back();
        unused_.pop_back();
        blossombase_[b] = base;
        blossomparent_[b] = -1;
        blossomparent_[bb] = b;
        std::vector<int>& path = blossomchilds_[b];
        std::vector<int>& endps = blossomendps_[b];
        path.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }
        assert(label_[bb] == 1);
        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dualvar_[b] = 0;
        for (int u : leaves(b)) {
            if (label_[inblossom_[u]] == 2) queue_.push_back(u);
            inblossom_[u] = b;
        }
        std::vector<int> bestedgeto(2 * nv_, -1);
        for (int sub : path) {
            std::vector<int> candidates;
            if (!has_bestedges_[sub]) {
                for (int u : leaves(sub)) {
                    for (int p : neighbend_[u]) candidates.push_back(p / 2);
                }
            } else {
                candidates = blossombestedges_[sub];
            }
            for (int e : candidates) {
                int i = edges_[e].first, j = edges_[e].second;
                if (inblossom_[j] == b) std::swap(i, j);
                const int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(e) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = e;
                }
            }
            blossombestedges_[sub].clear();
            has_bestedges_[sub] = false;
            bestedge_[sub] = -1;
        }
        blossombestedges_[b].clear();
        for (int e : bestedgeto) {
            if (e != -1) blossombestedges_[b].push_back(e);
        }
        has_bestedges_[b] = true;
        bestedge_[b] = -1;
        for (int e : blossombestedges_[b]) {
            if (bestedge_[b] == -1 || slack(e) < slack(bestedge_[b])) bestedge_[b] = e;
        }
    }

    void expand_blossom(int b, bool endstage) {
        const std::vector<int> childs = blossomchilds_[b];
        for (int s : childs) {
            blossomparent_[s] = -1;
            if (s < nv_) {
                inblossom_[s] = s;
            } else if (endstage && dualvar_[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                for (int u : leaves(s)) inblossom_[u] = s;
            }
        }
        if (!endstage && label_[b] == 2) {
            const std::vector<int>& ch = blossomchilds_[b];
            const std::vector<int>& ep = blossomendps_[b];
            const int n = static_cast<int>(ch.size());
            const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
            int jstep, endptrick;
            if (j & 1) {
                j -= n;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                label_[endpoint_[ep[wrap(j - endptrick, n)] ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allowedge_[ep[wrap(j - endptrick, n)] / 2] = true;
                j += jstep;
                p = ep[wrap(j - endptrick, n)] ^ endptrick;
                allowedge_[p / 2] = true;
                j += jstep;
            }
            int bv = ch[wrap(j, n)];
            label_[endpoint_[p ^ 1]] = label_[bv] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
            bestedge_[bv] = -1;
            j += jstep;
            while (ch[wrap(j, n)] != entrychild) {
                bv = ch[wrap(j, n)];
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                int v = -1;
                for (int u : leaves(bv)) {
                    v = u;
                    if (label_[u] != 0) break;
                }
                if (label_[v] != 0) {
                    assert(label_[v] == 2);
                    assert(inblossom_[v] == bv);
                    label_[v] = 0;
                    label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                    assign_label(v, 2, labelend_[v]);
                }
                j += jstep;
            }
        }
        label_[b] = labelend_[b] = -1;
        blossomchilds_[b].clear();
        blossomendps_[b].clear();
        blossombase_[b] = -1;
        blossombestedges_[b].clear();
        has_bestedges_[b] = false;
        bestedge_[b] = -1;
        unused_.push_back(b);
    }

    // Swaps matched and unmatched edges along the path from v to the base of b.
    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent_[t] != b) t = blossomparent_[t];
        if (t >= nv_) augment_blossom(t, v);
        std::vector<int>& ch = blossomchilds_[b];
        std::vector<int>& ep = blossomendps_[b];
        const int n = static_cast<int>(ch.size());
        const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
        int j = i;
        int jstep, endptrick;
        if (i & 1) {
            j -= n;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = ch[wrap(j, n)];
            const int p = ep[wrap(j - endptrick, n)] ^ endptrick;
            if (t >= nv_) augment_blossom(t, endpoint_[p]);
            j += jstep;
            t = ch[wrap(j, n)];
            if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::rotate(ch.begin(), ch.begin() + i, ch.end());
        std::rotate(ep.begin(), ep.begin() + i, ep.end());
        blossombase_[b] = blossombase_[ch[0]];
        assert(blossombase_[b] == v);
    }

    void augment_matching(int k) {
        const int ends[2][2] = {{edges_[k].first, 2 * k + 1}, {edges_[k].second, 2 * k}};
        for (const auto& sp : ends) {
            int s = sp[0], p = sp[1];
            while (true) {
                const int bs = inblossom_[s];
                assert(label_[bs] == 1);
                if (bs >= nv_) augment_blossom(bs, s);
                mate_[s] = p;
                if (labelend_[bs] == -1) break;
                const int t = endpoint_[labelend_[bs]];
                const int bt = inblossom_[t];
                assert(label_[bt] == 2);
                s = endpoint_[labelend_[bt]];
                const int j = endpoint_[labelend_[bt] ^ 1];
                assert(blossombase_[bt] == t);
                if (bt >= nv_) augment_blossom(bt, j);
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }

    int nv_, ne_;
    const std::vector<std::pair<int, int>>& edges_;
    const std::vector<int64_t>& weight_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_, blossombase_, bestedge_, unused_;
    std::vector<std::vector<int>> blossomchilds_, blossomendps_, blossombestedges_;
    std::vector<bool> has_bestedges_;
    std::vector<int64_t> dualvar_;
    std::vector<bool> allowedge_;
    std::vector<int> queue_;
};

int64_t to_units(double w) {
    if (!(w >= 0) || !std::isfinite(w)) throw MatchingError("edge weight must be finite and >= 0");
    const double u = w / kWeightQuantum;
    if (u != std::round(u)) throw MatchingError("edge weight is not quantized");
    return static_cast<int64_t>(u);
}

struct Normalized {
    // Cheapest edge per defect pair (dense, -1 absent) and per defect-boundary.
    std::vector<int> pair_edge;
    std::vector<int> boundary_edge;
};

Normalized normalize(const MatchingGraph& g) {
    const int n = g.num_defects();
    Normalized out;
    out.pair_edge.assign(static_cast<size_t>(n) * n, -1);
    out.boundary_edge.assign(n, -1);
    for (int k = 0; k < static_cast<int>(g.edges.size()); ++k) {
        const MatchingEdge& e = g.edges[k];
        if (e.u < 0 || e.v < 0 || e.u > n || e.v > n) throw MatchingError("edge vertex out of range");
        to_units(e.weight);
        if (e.u == n && e.v == n) continue;
        if (e.u == e.v) throw MatchingError("self loop on a defect");
        if (e.u == n || e.v == n) {
            const int d = e.u == n ? e.v : e.u;
            int& slot = out.boundary_edge[d];
            if (slot == -1 || e.weight < g.edges[slot].weight) slot = k;
        } else {
            const int a = std::min(e.u, e.v), b = std::max(e.u, e.v);
            int& slot = out.pair_edge[static_cast<size_t>(a) * n + b];
            if (slot == -1 || e.weight < g.edges[slot].weight) slot = k;
        }
    }
    return out;
}

void finish(const MatchingGraph& g, Matching& m, const std::vector<int>& chosen) {
    m.weight = 0;
    m.parity = false;
    for (int k : chosen) {
        m.weight += g.edges[k].weight;
        m.parity ^= g.edges[k].crossing;
    }
    std::sort(m.pairs.begin(), m.pairs.end());
}

}  // namespace

std::vector<int> max_weight_matching(int num_vertices, const std::vector<std::pair<int, int>>& endpoints,
                                     const std::vector<int64_t>& weights, bool max_cardinality) {
    if (endpoints.size() != weights.size()) throw std::invalid_argument("endpoints/weights size mismatch");
    for (const auto& [a, b] : endpoints) {
        if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices || a == b) {
            throw std::invalid_argument("bad edge endpoint");
        }
    }
    if (num_vertices == 0 || endpoints.empty()) return std::vector<int>(num_vertices, -1);
    WeightedMatcher matcher(num_vertices, endpoints, weights);
    return matcher.solve(max_cardinality);
}

Matching mwpm(const MatchingGraph& graph) {
    const int n = graph.num_defects();
    const Normalized norm = normalize(graph);
    Matching out;
    if (n == 0) return out;

    // Vertex i < n is defect i, n + i its private boundary copy. Copies pair
    // with each other for free. Minimum-weight perfect becomes maximum-weight
    // maximum-cardinality under w' = W - w.
    std::vector<std::pair<int, int>> ends;
    std::vector<int> source;
    std::vector<int64_t> units;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const int k = norm.pair_edge[static_cast<size_t>(a) * n + b];
            if (k < 0) continue;
            ends.emplace_back(a, b);
            source.push_back(k);
            units.push_back(to_units(graph.edges[k].weight));
        }
        const int k = norm.boundary_edge[a];
        if (k >= 0) {
            ends.emplace_back(a, n + a);
            source.push_back(k);
            units.push_back(to_units(graph.edges[k].weight));
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            ends.emplace_back(n + a, n + b);
            source.push_back(-1);
            units.push_back(0);
        }
    }
    int64_t top = 0;
    for (int64_t u : units) top = std::max(top, u);
    ++top;
    if (top > std::numeric_limits<int64_t>::max() / (8 * static_cast<int64_t>(n) + 8)) {
        throw MatchingError("edge weights too large");
    }
    for (int64_t& u : units) u = top - u;

    const std::vector<int> mate = max_weight_matching(2 * n, ends, units, true);
    std::vector<int> chosen;
    for (size_t e = 0; e < ends.size(); ++e) {
        const auto [a, b] = ends[e];
        if (mate[a] != b || source[e] < 0) continue;
        chosen.push_back(source[e]);
        out.pairs.emplace_back(a, b >= n ? n : b);
    }
    for (int v = 0; v < 2 * n; ++v) {
        if (mate[v] < 0) throw MatchingError("no perfect matching: defect " + std::to_string(v % n) + " is isolated");
    }
    finish(graph, out, chosen);
    return out;
}

Matching brute_force_mwpm(const MatchingGraph& graph) {
    const int n = graph.num_defects();
    if (n > kBruteForceMaxDefects) {
        throw MatchingError("brute force supports at most " + std::to_string(kBruteForceMaxDefects) + " defects");
    }
    const Normalized norm = normalize(graph);
    Matching out;
    if (n == 0) return out;

    // best[mask]: minimum cost of matching the defects in mask; the lowest
    // defect in mask goes to the boundary or to a higher defect.
    const double inf = std::numeric_limits<double>::infinity();
    const int full = (1 << n) - 1;
    std::vector<double> best(full + 1, inf);
    std::vector<int> choice(full + 1, -1);
    best[0] = 0;
    for (int mask = 1; mask <= full; ++mask) {
        const int a = __builtin_ctz(mask);
        const int rest = mask & ~(1 << a);
        if (const int k = norm.boundary_edge[a]; k >= 0 && best[rest] + graph.edges[k].weight < best[mask]) {
            best[mask] = best[rest] + graph.edges[k].weight;
            choice[mask] = n;
        }
        for (int b = a + 1; b < n; ++b) {
            if (!(rest >> b & 1)) continue;
            const int k = norm.pair_edge[static_cast<size_t>(a) * n + b];
            if (k < 0) continue;
            const double c = best[rest & ~(1 << b)] + graph.edges[k].weight;
            if (c < best[mask]) {
                best[mask] = c;
                choice[mask] = b;
            }
        }
    }
    if (best[full] == inf) throw MatchingError("no perfect matching");
    std::vector<int> chosen;
    for (int mask = full; mask;) {
        const int a = __builtin_ctz(mask);
        const int b = choice[mask];
        if (b == n) {
            chosen.push_back(norm.boundary_edge[a]);
            mask &= ~(1 << a);
        } else {
            chosen.push_back(norm.pair_edge[static_cast<size_t>(a) * n + b]);
            mask &= ~((1 << a) | (1 << b));
        }
        out.pairs.emplace_back(a, b);
    }
    finish(graph, out, chosen);
    return out;
}

}  // namespace s17
