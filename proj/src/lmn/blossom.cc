// Copyright 2026 The lmn Authors
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

#include "lmn/blossom.h"

#include <algorithm>
#include <memory>
#include <limits>

#include "lmn/error.h"

namespace lmn {

// Labels: 0 free, 1 S (outer), 2 T (inner); bit 4 is a temporary mark used by
// scan_blossom. Endpoint p of edge k is vertex endpoint_[p], with p = 2k or
// 2k + 1; p ^ 1 is the opposite endpoint. mate_[v] is the remote endpoint of
// v's matched edge. Blossom ids live in [nvertex, 2 * nvertex). Vertex duals
// are stored doubled so integer weights keep every quantity integral.

BlossomMatcher::BlossomMatcher(int num_vertices, std::span<const WeightedEdge> edges, bool max_cardinality)
    : nvertex_(num_vertices), nedge_(static_cast<int>(edges.size())), max_cardinality_(max_cardinality) {
    edges_.reserve(edges.size());
    for (const auto &e : edges) {
        require(e.u >= 0 && e.u < nvertex_ && e.v >= 0 && e.v < nvertex_ && e.u != e.v, ErrorCode::kInvalidArgument,
                "matching edge endpoints out of range");
        edges_.push_back({e.u, e.v, 2 * e.weight});
    }
    endpoint_.resize(2 * nedge_);
    std::vector<int> degree(nvertex_ + 1, 0);
    for (int k = 0; k < nedge_; ++k) {
        endpoint_[2 * k] = edges_[k].u;
        endpoint_[2 * k + 1] = edges_[k].v;
        ++degree[edges_[k].u + 1];
        ++degree[edges_[k].v + 1];
    }
    neighbend_offsets_.assign(nvertex_ + 1, 0);
    for (int v = 0; v < nvertex_; ++v) {
        neighbend_offsets_[v + 1] = neighbend_offsets_[v] + degree[v + 1];
    }
    neighbend_.resize(2 * nedge_);
    std::vector<int> fill(neighbend_offsets_.begin(), neighbend_offsets_.end() - 1);
    for (int k = 0; k < nedge_; ++k) {
        neighbend_[fill[edges_[k].u]++] = 2 * k + 1;
        neighbend_[fill[edges_[k].v]++] = 2 * k;
    }

    const int n2 = 2 * nvertex_;
    mate_.assign(nvertex_, -1);
    label_.assign(n2, 0);
    labelend_.assign(n2, -1);
    inblossom_.resize(nvertex_);
    for (int v = 0; v < nvertex_; ++v) {
        inblossom_[v] = v;
    }
    blossomparent_.assign(n2, -1);
    blossomchilds_.assign(n2, {});
    blossombase_.assign(n2, -1);
    for (int v = 0; v < nvertex_; ++v) {
        blossombase_[v] = v;
    }
    blossomendps_.assign(n2, {});
    bestedge_.assign(n2, -1);
    blossombestedges_.assign(n2, {});
    has_blossombestedges_.assign(n2, 0);
    unusedblossoms_.clear();
    for (int b = n2 - 1; b >= nvertex_; --b) {
        unusedblossoms_.push_back(b);
    }
    dualvar_.assign(n2, 0);
    allowedge_.assign(nedge_, 0);
}

int64_t BlossomMatcher::slack(int k) const {
    const auto &e = edges_[k];
    return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
}

void BlossomMatcher::blossom_leaves(int b, std::vector<int> &out) const {
    if (b < nvertex_) {
        out.push_back(b);
        return;
    }
    for (int t : blossomchilds_[b]) {
        blossom_leaves(t, out);
    }
}

void BlossomMatcher::assign_label(int w, int t, int p) {
    for (;;) {
        int b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            leaves_scratch_.clear();
            blossom_leaves(b, leaves_scratch_);
            queue_.insert(queue_.end(), leaves_scratch_.begin(), leaves_scratch_.end());
            return;
        }
        // T-vertex: its base's mate becomes an S-vertex.
        int base = blossombase_[b];
        w = endpoint_[mate_[base]];
        t = 1;
        p = mate_[base] ^ 1;
    }
}

int BlossomMatcher::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & 4) {
            base = blossombase_[b];
            break;
        }
        path.push_back(b);
        label_[b] = 5;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) {
            std::swap(v, w);
        }
    }
    for (int b : path) {
        label_[b] = 1;
    }
    return base;
}

void BlossomMatcher::add_blossom(int base, int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    auto &path = blossomchilds_[b];
    auto &endps = blossomendps_[b];
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
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;

    leaves_scratch_.clear();
    blossom_leaves(b, leaves_scratch_);
    for (int leaf : leaves_scratch_) {
        if (label_[inblossom_[leaf]] == 2) {
            queue_.push_back(leaf);
        }
        inblossom_[leaf] = b;
    }

    // Least-slack edges from the new blossom to each neighbouring S-blossom.
    std::vector<int> bestedgeto(2 * nvertex_, -1);
    std::vector<int> leaves;
    for (int sub : path) {
        auto consider = [&](int kk) {
            int i = edges_[kk].u;
            int j = edges_[kk].v;
            if (inblossom_[j] == b) {
                std::swap(i, j);
            }
            int bj = inblossom_[j];
            if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                bestedgeto[bj] = kk;
            }
        };
        if (!has_blossombestedges_[sub]) {
            leaves.clear();
            blossom_leaves(sub, leaves);
            for (int leaf : leaves) {
                for (int idx = neighbend_offsets_[leaf]; idx < neighbend_offsets_[leaf + 1]; ++idx) {
                    consider(neighbend_[idx] / 2);
                }
            }
        } else {
            for (int kk : blossombestedges_[sub]) {
                consider(kk);
            }
        }
        blossombestedges_[sub].clear();
        has_blossombestedges_[sub] = 0;
        bestedge_[sub] = -1;
    }
    auto &list = blossombestedges_[b];
    list.clear();
    for (int kk : bestedgeto) {
        if (kk != -1) {
            list.push_back(kk);
        }
    }
    has_blossombestedges_[b] = 1;
    bestedge_[b] = -1;
    for (int kk : list) {
        if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) {
            bestedge_[b] = kk;
        }
    }
}

void BlossomMatcher::expand_blossom(int b, bool endstage) {
    // Copy: recursive expansion and relabelling mutate shared state.
    const std::vector<int> childs = blossomchilds_[b];
    const std::vector<int> endps = blossomendps_[b];
    for (int s : childs) {
        blossomparent_[s] = -1;
        if (s < nvertex_) {
            inblossom_[s] = s;
        } else if (endstage && dualvar_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            std::vector<int> leaves;
            blossom_leaves(s, leaves);
            for (int leaf : leaves) {
                inblossom_[leaf] = s;
            }
        }
    }
    if (!endstage && label_[b] == 2) {
        // Relabel the sub-blossoms along the even path from the entry child to the base.
        const int len = static_cast<int>(childs.size());
        int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
        int jstep;
        int endptrick;
        if (j & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        auto at = [len](const std::vector<int> &vec, int idx) { return vec[((idx % len) + len) % len]; };
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[at(endps, j - endptrick) ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[at(endps, j - endptrick) / 2] = 1;
            j += jstep;
            p = at(endps, j - endptrick) ^ endptrick;
            allowedge_[p / 2] = 1;
            j += jstep;
        }
        int bv = at(childs, j);
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (at(childs, j) != entrychild) {
            bv = at(childs, j);
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            std::vector<int> leaves;
            blossom_leaves(bv, leaves);
            int v = -1;
            for (int leaf : leaves) {
                v = leaf;
                if (label_[leaf] != 0) {
                    break;
                }
            }
            if (v != -1 && label_[v] != 0) {
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
    has_blossombestedges_[b] = 0;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
}

void BlossomMatcher::augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) {
        t = blossomparent_[t];
    }
    if (t >= nvertex_) {
        augment_blossom(t, v);
    }
    auto &childs = blossomchilds_[b];
    auto &endps = blossomendps_[b];
    const int len = static_cast<int>(childs.size());
    auto at = [len](const std::vector<int> &vec, int idx) { return vec[((idx % len) + len) % len]; };
    int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = at(childs, j);
        int p = at(endps, j - endptrick) ^ endptrick;
        if (t >= nvertex_) {
            augment_blossom(t, endpoint_[p]);
        }
        j += jstep;
        t = at(childs, j);
        if (t >= nvertex_) {
            augment_blossom(t, endpoint_[p ^ 1]);
        }
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[b] = blossombase_[childs[0]];
}

void BlossomMatcher::augment_matching(int k) {
    const int v = edges_[k].u;
    const int w = edges_[k].v;
    const int starts[2][2] = {{v, 2 * k + 1}, {w, 2 * k}};
    for (const auto &start : starts) {
        int s = start[0];
        int p = start[1];
        for (;;) {
            int bs = inblossom_[s];
            if (bs >= nvertex_) {
                augment_blossom(bs, s);
            }
            mate_[s] = p;
            if (labelend_[bs] == -1) {
                break;
            }
            int t = endpoint_[labelend_[bs]];
            int bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            int j = endpoint_[labelend_[bt] ^ 1];
            if (bt >= nvertex_) {
                augment_blossom(bt, j);
            }
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

void BlossomMatcher::solve(bool greedy_start) {
    require(!greedy_start || max_cardinality_, ErrorCode::kInvalidArgument,
            "greedy start needs maximum-cardinality mode");
    const int n2 = 2 * nvertex_;
    if (nedge_ == 0) {
        return;
    }
    if (greedy_start) {
        std::vector<int64_t> best(nvertex_, std::numeric_limits<int64_t>::min());
        for (const auto &e : edges_) {
            best[e.u] = std::max(best[e.u], e.weight);
            best[e.v] = std::max(best[e.v], e.weight);
        }
        for (int v = 0; v < nvertex_; ++v) {
            dualvar_[v] = best[v] == std::numeric_limits<int64_t>::min() ? 0 : best[v];
        }
        for (int k = 0; k < nedge_; ++k) {
            const auto &e = edges_[k];
            if (mate_[e.u] == -1 && mate_[e.v] == -1 && slack(k) == 0) {
                mate_[e.u] = 2 * k + 1;
                mate_[e.v] = 2 * k;
            }
        }
    } else {
        int64_t maxweight = 0;
        for (const auto &e : edges_) {
            maxweight = std::max(maxweight, e.weight);
        }
        for (int v = 0; v < nvertex_; ++v) {
            dualvar_[v] = maxweight;
        }
    }

    for (int stage = 0; stage < nvertex_; ++stage) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = nvertex_; b < n2; ++b) {
            blossombestedges_[b].clear();
            has_blossombestedges_[b] = 0;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), 0);
        queue_.clear();
        for (int v = 0; v < nvertex_; ++v) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
            }
        }
        bool augmented = false;
        for (;;) {
            while (!queue_.empty() && !augmented) {
                int v = queue_.back();
                queue_.pop_back();
                for (int idx = neighbend_offsets_[v]; idx < neighbend_offsets_[v + 1]; ++idx) {
                    int p = neighbend_[idx];
                    int k = p / 2;
                    int w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) {
                        continue;
                    }
                    int64_t kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) {
                            allowedge_[k] = 1;
                        }
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        int b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                            bestedge_[b] = k;
                        }
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                            bestedge_[w] = k;
                        }
                    }
                }
            }
            if (augmented) {
                break;
            }

            int deltatype = -1;
            int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            if (!max_cardinality_) {
                deltatype = 1;
                delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nvertex_);
            }
            for (int v = 0; v < nvertex_; ++v) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    int64_t d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < n2; ++b) {
                if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    int64_t d = slack(bestedge_[b]) / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = nvertex_; b < n2; ++b) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                    (deltatype == -1 || dualvar_[b] < delta)) {
                    delta = dualvar_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                // No further progress possible (maximum-cardinality mode).
                deltatype = 1;
                delta = std::max<int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + nvertex_));
            }

            for (int v = 0; v < nvertex_; ++v) {
                int l = label_[inblossom_[v]];
                if (l == 1) {
                    dualvar_[v] -= delta;
                } else if (l == 2) {
                    dualvar_[v] += delta;
                }
            }
            for (int b = nvertex_; b < n2; ++b) {
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
            }
            if (deltatype == 2) {
                allowedge_[deltaedge] = 1;
                int i = edges_[deltaedge].u;
                int j = edges_[deltaedge].v;
                if (label_[inblossom_[i]] == 0) {
                    std::swap(i, j);
                }
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = 1;
                queue_.push_back(edges_[deltaedge].u);
            } else {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) {
            break;
        }
        for (int b = nvertex_; b < n2; ++b) {
            if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }
}

std::vector<int> BlossomMatcher::mates() const {
    std::vector<int> out(nvertex_, -1);
    for (int v = 0; v < nvertex_; ++v) {
        if (mate_[v] >= 0) {
            out[v] = endpoint_[mate_[v]];
        }
    }
    return out;
}

bool BlossomMatcher::is_perfect() const {
    return std::all_of(mate_.begin(), mate_.end(), [](int m) { return m >= 0; });
}

int64_t BlossomMatcher::reduced_cost(int u, int v, int64_t weight) const {
    int64_t s = dualvar_[u] + dualvar_[v] - 2 * (2 * weight);
    if (blossomparent_[u] == -1 || blossomparent_[v] == -1) {
        return s;
    }
    // Blossoms containing both endpoints: walk both ancestor chains from the top.
    int chain_u[64];
    int chain_v[64];
    int du = 0;
    int dv = 0;
    for (int b = u; b != -1 && du < 64; b = blossomparent_[b]) {
        chain_u[du++] = b;
    }
    for (int b = v; b != -1 && dv < 64; b = blossomparent_[b]) {
        chain_v[dv++] = b;
    }
    if (du == 64 || dv == 64) {
        std::vector<int> cu;
        std::vector<int> cv;
        for (int b = u; b != -1; b = blossomparent_[b]) {
            cu.push_back(b);
        }
        for (int b = v; b != -1; b = blossomparent_[b]) {
            cv.push_back(b);
        }
        for (size_t a = cu.size(), c = cv.size(); a > 0 && c > 0; --a, --c) {
            if (cu[a - 1] != cv[c - 1]) {
                break;
            }
            s += 2 * dualvar_[cu[a - 1]];
        }
        return s;
    }
    while (du > 0 && dv > 0 && chain_u[du - 1] == chain_v[dv - 1]) {
        s += 2 * dualvar_[chain_u[du - 1]];
        --du;
        --dv;
    }
    return s;
}

bool BlossomMatcher::verify_optimum() const {
    int64_t vmin = *std::min_element(dualvar_.begin(), dualvar_.begin() + nvertex_);
    int64_t offset = max_cardinality_ ? std::max<int64_t>(0, -vmin) : 0;
    if (vmin + offset < 0) {
        return false;
    }
    for (int b = nvertex_; b < 2 * nvertex_; ++b) {
        if (blossombase_[b] >= 0 && dualvar_[b] < 0) {
            return false;
        }
    }
    for (int k = 0; k < nedge_; ++k) {
        const auto &e = edges_[k];
        int64_t s = reduced_cost(e.u, e.v, e.weight / 2);
        if (s < 0) {
            return false;
        }
        bool matched = mate_[e.u] >= 0 && mate_[e.u] / 2 == k;
        if (matched && s != 0) {
            return false;
        }
    }
    for (int v = 0; v < nvertex_; ++v) {
        if (mate_[v] < 0 && dualvar_[v] + offset != 0) {
            return false;
        }
    }
    for (int b = nvertex_; b < 2 * nvertex_; ++b) {
        if (blossombase_[b] >= 0 && dualvar_[b] > 0) {
            if (blossomendps_[b].size() % 2 != 1) {
                return false;
            }
            for (size_t i = 1; i < blossomendps_[b].size(); i += 2) {
                int p = blossomendps_[b][i];
                if (mate_[endpoint_[p]] != (p ^ 1) || mate_[endpoint_[p ^ 1]] != p) {
                    return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

int32_t PairCosts::max_cost() const {
    int32_t out = 0;
    const int n = size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int32_t c = cost(i, j);
            if (c != kForbiddenCost) {
                out = std::max(out, c);
            }
        }
    }
    return out;
}

void PairCosts::nearest(int i, int k, std::vector<int> &out) const {
    const int n = size();
    std::vector<std::pair<int32_t, int>> row;
    row.reserve(n);
    for (int j = 0; j < n; ++j) {
        int32_t c = j == i ? kForbiddenCost : cost(i, j);
        if (c != kForbiddenCost) {
            row.emplace_back(c, j);
        }
    }
    if (static_cast<int>(row.size()) > k) {
        std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
        row.resize(k);
    }
    for (const auto &entry : row) {
        out.push_back(entry.second);
    }
}

void PairCosts::partners_within(int i, int32_t limit, std::vector<int> &out) const {
    const int n = size();
    for (int j = 0; j < n; ++j) {
        if (j != i && cost(i, j) <= limit) {
            out.push_back(j);
        }
    }
}

namespace {

// Solver weight of a pair: the saving over the alternative. Without a
// boundary every perfect matching has the same size, so offset - cost works;
// with one, pairing i and j saves b_i + b_j - cost over leaving both unmatched.
struct WeightRule {
    const PairCosts &costs;
    bool boundary;
    int64_t offset;

    // 0 means the pair is never useful.
    int64_t weight(int i, int j) const {
        int32_t c = costs.cost(i, j);
        if (c == kForbiddenCost) {
            return 0;
        }
        if (!boundary) {
            return offset - c;
        }
        int64_t w = static_cast<int64_t>(costs.boundary_cost(i)) + costs.boundary_cost(j) - c;
        return w > 0 ? w : 0;
    }
};

std::vector<WeightedEdge> candidate_edges(const WeightRule &rule, int k) {
    const int n = rule.costs.size();
    std::vector<std::vector<int>> lists(n);
    for (int i = 0; i < n; ++i) {
        rule.costs.nearest(i, k, lists[i]);
    }
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j : lists[i]) {
            if (j == i) {
                continue;
            }
            // A pair listed from both ends is emitted once, from the smaller id.
            if (j < i && std::find(lists[j].begin(), lists[j].end(), i) != lists[j].end()) {
                continue;
            }
            int64_t w = rule.weight(i, j);
            if (w > 0) {
                edges.push_back({std::min(i, j), std::max(i, j), w});
            }
        }
    }
    return edges;
}

}  // namespace

std::vector<int> min_weight_matching(const PairCosts &costs, const MatchingOptions &options, MatchingStats *stats) {
    const int n = costs.size();
    MatchingStats local;
    auto finish = [&](std::vector<int> mates) {
        if (stats) {
            *stats = local;
        }
        return mates;
    };
    if (n == 0) {
        return finish({});
    }
    int num_boundary = 0;
    int64_t max_boundary = 0;
    for (int i = 0; i < n; ++i) {
        int32_t b = costs.boundary_cost(i);
        if (b != kForbiddenCost) {
            ++num_boundary;
            max_boundary = std::max<int64_t>(max_boundary, b);
        }
    }
    require(num_boundary == 0 || num_boundary == n, ErrorCode::kInvalidArgument,
            "boundary costs must be given for all vertices or none");
    const bool boundary = num_boundary == n;
    require(boundary || n % 2 == 0, ErrorCode::kMalformedSyndrome,
            "perfect matching needs an even number of vertices");

    const WeightRule rule{costs, boundary, static_cast<int64_t>(costs.max_cost()) + 1};
    int k = std::min(std::max(1, options.candidates_per_vertex), n - 1);
    std::vector<WeightedEdge> edges = n > 1 ? candidate_edges(rule, k) : std::vector<WeightedEdge>{};
    std::vector<int> partners;
    for (;;) {
        ++local.rounds;
        local.candidate_edges = static_cast<int64_t>(edges.size());
        auto matcher = std::make_unique<BlossomMatcher>(n, edges, /*max_cardinality=*/!boundary);
        matcher->solve(/*greedy_start=*/!boundary);
        if (!boundary && !matcher->is_perfect()) {
            // The greedy start may stop short of maximum cardinality.
            matcher = std::make_unique<BlossomMatcher>(n, edges, true);
            matcher->solve(false);
        }
        if (!boundary && !matcher->is_perfect()) {
            if (k >= n - 1) {
                fail(ErrorCode::kMalformedSyndrome, "no perfect matching exists");
            }
            k = std::min(2 * k, n - 1);
            edges = candidate_edges(rule, k);
            continue;
        }
        std::vector<int> mates = matcher->mates();
        if (!options.exact || k >= n - 1) {
            return finish(mates);
        }
        // A pair improves the matching only if its reduced cost is negative.
        // Vertex duals bound the cost of any such pair from each end, which
        // keeps the search local.
        int64_t dual_min = matcher->vertex_dual(0);
        for (int i = 1; i < n; ++i) {
            dual_min = std::min(dual_min, matcher->vertex_dual(i));
        }
        std::vector<WeightedEdge> violated;
        for (int i = 0; i < n; ++i) {
            const int64_t dual_i = matcher->vertex_dual(i);
            const int64_t budget = boundary ? 4 * (costs.boundary_cost(i) + max_boundary) - dual_i - dual_min
                                            : 4 * rule.offset - dual_i - dual_min;
            if (budget <= 0) {
                continue;
            }
            const int64_t limit = (budget - 1) / 4;
            partners.clear();
            costs.partners_within(i, static_cast<int32_t>(std::min<int64_t>(limit, kForbiddenCost - 1)), partners);
            for (int j : partners) {
                if (j <= i) {
                    continue;
                }
                int64_t w = rule.weight(i, j);
                if (w <= 0 || dual_i + matcher->vertex_dual(j) >= 4 * w) {
                    continue;
                }
                if (matcher->reduced_cost(i, j, w) < 0) {
                    violated.push_back({i, j, w});
                }
            }
        }
        if (violated.empty()) {
            return finish(mates);
        }
        local.priced_in_edges += static_cast<int64_t>(violated.size());
        // Pairs already in the graph have non-negative reduced cost, so these are new.
        edges.insert(edges.end(), violated.begin(), violated.end());
    }
}

}  // namespace lmn
