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

#include "lmn/decoder.h"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <ostream>

#include "lmn/error.h"

namespace lmn {

// Buffers reused across decodes by one worker.
struct MatchScratch {
    std::vector<int> defect_of_plaquette;
    std::vector<uint32_t> visit_stamp;
    uint32_t stamp = 0;
    std::vector<int> frontier;
};

namespace {

void require_edge_set(const Lattice &lattice, const EdgeSet &edges) {
    require(edges.size() == lattice.num_edges(), ErrorCode::kInvalidArgument, "edge set does not match the lattice");
}

void require_sites(const Lattice &lattice, std::span<const int> sites) {
    for (int s : sites) {
        require(s >= 0 && s < lattice.num_sites(), ErrorCode::kInvalidArgument, "site id out of range");
    }
}

template <typename F>
void for_each_member(const EdgeSet &set, F f) {
    auto words = set.words();
    for (size_t w = 0; w < words.size(); ++w) {
        uint64_t bits = words[w];
        while (bits) {
            f(static_cast<int>(w * 64 + std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
}

// Labels sites by walking the primal lattice from site 0, flipping across
// residual edges. Returns false if some edge disagrees with the labelling.
bool label_sites(const Lattice &lattice, const EdgeSet &residual_edges, LabelTraversal traversal,
                 std::vector<uint8_t> &labels, std::vector<uint8_t> &seen, std::vector<int> &frontier) {
    const int n = lattice.num_sites();
    labels.assign(n, 0);
    seen.assign(n, 0);
    frontier.clear();
    frontier.push_back(0);
    seen[0] = 1;
    const bool breadth_first = traversal == LabelTraversal::kBreadthFirst;
    size_t head = 0;
    while (breadth_first ? head < frontier.size() : !frontier.empty()) {
        int s;
        if (breadth_first) {
            s = frontier[head++];
        } else {
            s = frontier.back();
            frontier.pop_back();
        }
        auto edges = lattice.site_edges(s);
        for (size_t i = 0; i < edges.size(); ++i) {
            int e = breadth_first ? edges[i] : edges[edges.size() - 1 - i];
            const auto &ends = lattice.edge_sites(e);
            int t = ends[0] == s ? ends[1] : ends[0];
            if (seen[t]) {
                continue;
            }
            seen[t] = 1;
            labels[t] = labels[s] ^ static_cast<uint8_t>(residual_edges.test(e));
            frontier.push_back(t);
        }
    }
    for (int e = 0; e < lattice.num_edges(); ++e) {
        const auto &ends = lattice.edge_sites(e);
        if ((labels[ends[0]] ^ labels[ends[1]]) != static_cast<uint8_t>(residual_edges.test(e))) {
            return false;
        }
    }
    return true;
}

void add_path(const Lattice &lattice, int a, int b, EdgeSet &out) {
    if (b == kBoundary) {
        out ^= boundary_path(lattice, a);
        return;
    }
    for (const auto &step : staircase_steps(lattice, a, b)) {
        out.flip(step.edge);
    }
}

std::vector<int> checked_defects(const Lattice &lattice, std::span<const int> defects) {
    std::vector<int> sorted(defects.begin(), defects.end());
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorCode::kInvalidArgument,
            "duplicate defect");
    for (int p : sorted) {
        require(p >= 0 && p < lattice.num_plaquettes(), ErrorCode::kInvalidArgument, "plaquette id out of range");
    }
    if (lattice.is_torus()) {
        require(sorted.size() % 2 == 0, ErrorCode::kMalformedSyndrome, "odd number of defects on a torus");
    }
    return sorted;
}

// Matching graph over the defects of one syndrome; on the plane each defect
// may instead end on the boundary.
class DefectGraph final : public PairCosts {
   public:
    DefectGraph(const Lattice &lattice, const std::vector<int> &defects, MatchScratch &scratch)
        : lattice_(lattice), defects_(defects), scratch_(scratch), d_(static_cast<int>(defects.size())),
          planar_(!lattice.is_torus()), square_torus_(lattice.kind() == LatticeKind::kSquareTorus) {
        coords_.reserve(d_);
        for (int p : defects_) {
            coords_.push_back(lattice.plaquette_coord(p));
        }
        if (planar_) {
            boundary_.reserve(d_);
            for (int p : defects_) {
                boundary_.push_back(lattice.boundary_distance(p));
            }
        }
        scratch_.defect_of_plaquette.assign(lattice.num_plaquettes(), -1);
        for (int i = 0; i < d_; ++i) {
            scratch_.defect_of_plaquette[defects_[i]] = i;
        }
        if (scratch_.visit_stamp.size() != static_cast<size_t>(lattice.num_plaquettes())) {
            scratch_.visit_stamp.assign(lattice.num_plaquettes(), 0);
            scratch_.stamp = 0;
        }
    }

    int size() const override {
        return d_;
    }

    int32_t cost(int i, int j) const override {
        const DualCoord &a = coords_[i];
        const DualCoord &b = coords_[j];
        if (planar_) {
            return std::abs(a.x - b.x) + std::abs(a.y - b.y);
        }
        if (square_torus_) {
            const int n = lattice_.n();
            int dx = std::abs(a.x - b.x);
            int dy = std::abs(a.y - b.y);
            return std::min(dx, n - dx) + std::min(dy, n - dy);
        }
        return lattice_.dual_distance(defects_[i], defects_[j]);
    }

    int32_t boundary_cost(int i) const override {
        return planar_ ? boundary_[i] : kForbiddenCost;
    }

    int32_t max_cost() const override {
        return lattice_.num_plaquettes();
    }

    void nearest(int i, int k, std::vector<int> &out) const override {
        search(i, k, std::numeric_limits<int32_t>::max(), out);
    }

    void partners_within(int i, int32_t limit, std::vector<int> &out) const override {
        // A wide ball costs more to walk than the defect list.
        const int64_t ball = 2 * static_cast<int64_t>(limit) * (limit + 1) + 1;
        if (ball >= d_) {
            for (int j = 0; j < d_; ++j) {
                if (j != i && cost(i, j) <= limit) {
                    out.push_back(j);
                }
            }
            return;
        }
        search(i, d_, limit, out);
    }

   private:
    // Breadth-first search on the dual lattice from defect i, appending up to
    // k other defects within `radius`, nearest first.
    void search(int i, int k, int32_t radius, std::vector<int> &out) const {
        if (k <= 0 || radius <= 0) {
            return;
        }
        if (++scratch_.stamp == 0) {
            std::fill(scratch_.visit_stamp.begin(), scratch_.visit_stamp.end(), 0);
            scratch_.stamp = 1;
        }
        const uint32_t stamp = scratch_.stamp;
        auto &frontier = scratch_.frontier;
        frontier.clear();
        frontier.push_back(defects_[i]);
        scratch_.visit_stamp[defects_[i]] = stamp;
        int found = 0;
        size_t head = 0;
        for (int32_t layer = 1; layer <= radius && head < frontier.size() && found < k; ++layer) {
            const size_t layer_end = frontier.size();
            for (; head < layer_end; ++head) {
                for (const auto &nb : lattice_.dual_neighbors(frontier[head])) {
                    if (scratch_.visit_stamp[nb.plaquette] == stamp) {
                        continue;
                    }
                    scratch_.visit_stamp[nb.plaquette] = stamp;
                    frontier.push_back(nb.plaquette);
                    int j = scratch_.defect_of_plaquette[nb.plaquette];
                    if (j >= 0 && found < k) {
                        out.push_back(j);
                        ++found;
                    }
                }
            }
        }
    }

    const Lattice &lattice_;
    const std::vector<int> &defects_;
    MatchScratch &scratch_;
    int d_;
    bool planar_;
    bool square_torus_;
    std::vector<DualCoord> coords_;
    std::vector<int> boundary_;
};

Matching match_sorted_defects(const Lattice &lattice, const std::vector<int> &sorted, const MatchOptions &options,
                              MatchScratch &scratch) {
    Matching out;
    if (sorted.empty()) {
        return out;
    }
    DefectGraph graph(lattice, sorted, scratch);
    MatchingOptions mo;
    mo.candidates_per_vertex = options.prune ? options.prune_k : 10;
    mo.exact = !options.prune;
    const std::vector<int> mates = min_weight_matching(graph, mo);
    for (int i = 0; i < graph.size(); ++i) {
        int j = mates[i];
        if (j == kUnmatched) {
            out.pairs.emplace_back(sorted[i], kBoundary);
            out.total_weight += graph.boundary_cost(i);
        } else if (i < j) {
            out.pairs.emplace_back(sorted[i], sorted[j]);
            out.total_weight += graph.cost(i, j);
        }
    }
    return out;
}

}  // namespace

std::vector<int8_t> parity_pattern(const Lattice &lattice, const EdgeSet &errors, std::span<const int> check_errors) {
    require(!lattice.is_torus(), ErrorCode::kUnsupported, "parity patterns are defined on planar lattices only");
    require_edge_set(lattice, errors);
    require_sites(lattice, check_errors);
    const int n = lattice.n();
    // row[y][x]: parity of horizontal errors left of x on row y.
    // col[x][y]: parity of vertical errors below y on column x.
    std::vector<uint8_t> row(n * n, 0);
    std::vector<uint8_t> col(n * n, 0);
    for (int y = 0; y < n; ++y) {
        for (int x = 1; x < n; ++x) {
            row[y * n + x] = row[y * n + x - 1] ^ errors.test(lattice.edge_id(EdgeOrientation::kHorizontal, x - 1, y));
        }
    }
    for (int x = 0; x < n; ++x) {
        for (int y = 1; y < n; ++y) {
            col[x * n + y] = col[x * n + y - 1] ^ errors.test(lattice.edge_id(EdgeOrientation::kVertical, x, y - 1));
        }
    }
    std::vector<int8_t> out(n * n, 1);
    for (int y = 1; y < n; ++y) {
        for (int x = 1; x < n; ++x) {
            // Copy arriving from the left travelled up column 0 then along row y;
            // the one arriving from below went along row 0 then up column x.
            uint8_t from_left = col[0 * n + y] ^ row[y * n + x];
            uint8_t from_below = row[0 * n + x] ^ col[x * n + y];
            out[lattice.site(x, y)] = (from_left ^ from_below) ? -1 : 1;
        }
    }
    for (int s : check_errors) {
        out[s] = static_cast<int8_t>(-out[s]);
    }
    return out;
}

Syndrome plaquette_syndrome(const Lattice &lattice, std::span<const int8_t> outputs) {
    require(static_cast<int>(outputs.size()) == lattice.num_sites(), ErrorCode::kInvalidArgument,
            "parity outputs must cover every site");
    Syndrome out;
    out.parity_outputs.assign(outputs.begin(), outputs.end());
    for (int p = 0; p < lattice.num_plaquettes(); ++p) {
        int product = 1;
        for (int s : lattice.plaquette_corners(p)) {
            product *= outputs[s];
        }
        if (product < 0) {
            out.defects.push_back(p);
        }
    }
    return out;
}

Syndrome edge_syndrome(const Lattice &lattice, const EdgeSet &errors, std::span<const int> check_errors) {
    if (!lattice.is_torus()) {
        return plaquette_syndrome(lattice, parity_pattern(lattice, errors, check_errors));
    }
    require_edge_set(lattice, errors);
    require_sites(lattice, check_errors);
    std::vector<uint8_t> parity(lattice.num_plaquettes(), 0);
    for_each_member(errors, [&](int e) {
        for (int p : lattice.edge_plaquettes(e)) {
            parity[p] ^= 1;
        }
    });
    for (int s : check_errors) {
        for (int p : lattice.site_plaquettes(s)) {
            parity[p] ^= 1;
        }
    }
    Syndrome out;
    for (int p = 0; p < lattice.num_plaquettes(); ++p) {
        if (parity[p]) {
            out.defects.push_back(p);
        }
    }
    return out;
}

Matching match_defects(const Lattice &lattice, std::span<const int> defects, const MatchOptions &options) {
    MatchScratch scratch;
    return match_sorted_defects(lattice, checked_defects(lattice, defects), options, scratch);
}

Matching brute_force_matching(const Lattice &lattice, std::span<const int> defects, int cap) {
    const std::vector<int> sorted = checked_defects(lattice, defects);
    const int d = static_cast<int>(sorted.size());
    if (d > cap) {
        fail(ErrorCode::kOverflow, "too many defects for exhaustive matching");
    }
    const bool planar = !lattice.is_torus();
    std::vector<char> used(d, 0);
    std::vector<std::pair<int, int>> current;
    Matching best;
    best.total_weight = -1;
    auto recurse = [&](auto &&self, int64_t weight) -> void {
        int i = 0;
        while (i < d && used[i]) {
            ++i;
        }
        if (i == d) {
            if (best.total_weight < 0 || weight < best.total_weight) {
                best.total_weight = weight;
                best.pairs = current;
            }
            return;
        }
        used[i] = 1;
        if (planar) {
            current.emplace_back(sorted[i], kBoundary);
            self(self, weight + lattice.boundary_distance(sorted[i]));
            current.pop_back();
        }
        for (int j = i + 1; j < d; ++j) {
            if (used[j]) {
                continue;
            }
            used[j] = 1;
            current.emplace_back(sorted[i], sorted[j]);
            self(self, weight + lattice.dual_distance(sorted[i], sorted[j]));
            current.pop_back();
            used[j] = 0;
        }
        used[i] = 0;
    };
    recurse(recurse, 0);
    if (best.total_weight < 0) {
        best.total_weight = 0;
    }
    return best;
}

EdgeSet infer_errors(const Lattice &lattice, const Matching &matching) {
    EdgeSet out(lattice.num_edges());
    for (const auto &[a, b] : matching.pairs) {
        require(a >= 0 && a < lattice.num_plaquettes() && b >= kBoundary && b < lattice.num_plaquettes(),
                ErrorCode::kInvalidArgument, "matching refers to an unknown plaquette");
        add_path(lattice, a, b, out);
    }
    return out;
}

Residual residual(const Lattice &lattice, const EdgeSet &true_errors, const EdgeSet &inferred,
                  LabelTraversal traversal) {
    require_edge_set(lattice, true_errors);
    require_edge_set(lattice, inferred);
    Residual out;
    out.edges = true_errors ^ inferred;
    std::vector<uint8_t> parity(lattice.num_plaquettes(), 0);
    for_each_member(out.edges, [&](int e) {
        for (int p : lattice.edge_plaquettes(e)) {
            if (p != kNoPlaquette) {
                parity[p] ^= 1;
            }
        }
    });
    require(std::none_of(parity.begin(), parity.end(), [](uint8_t b) { return b != 0; }),
            ErrorCode::kMalformedSyndrome, "inferred errors do not reproduce the syndrome");
    std::vector<uint8_t> seen;
    std::vector<int> frontier;
    out.wraps = !label_sites(lattice, out.edges, traversal, out.site_labels, seen, frontier);
    return out;
}

double agreement_probability(const Residual &residual) {
    if (residual.wraps) {
        return 0.5;
    }
    const double n = static_cast<double>(residual.site_labels.size());
    const double ones = static_cast<double>(std::count(residual.site_labels.begin(), residual.site_labels.end(), 1));
    const double p1 = ones / n;
    const double p0 = 1.0 - p1;
    return p0 * p0 + p1 * p1;
}

bool pair_agreement(const Residual &residual, int site_a, int site_b) {
    const int n = static_cast<int>(residual.site_labels.size());
    require(site_a >= 0 && site_a < n && site_b >= 0 && site_b < n, ErrorCode::kInvalidArgument,
            "site id out of range");
    require(site_a != site_b, ErrorCode::kInvalidArgument, "pair agreement needs two distinct sites");
    if (residual.wraps) {
        return false;
    }
    return residual.site_labels[site_a] == residual.site_labels[site_b];
}

Rational expected_wrong_sites(const Lattice &lattice, int p, int q, const EdgeSet &candidate, int cap) {
    require(p >= 0 && p < lattice.num_plaquettes() && q >= 0 && q < lattice.num_plaquettes(),
            ErrorCode::kInvalidArgument, "plaquette id out of range");
    require_edge_set(lattice, candidate);
    const int distance = lattice.dual_distance(p, q);
    require(candidate.count() == distance, ErrorCode::kInvalidArgument, "candidate is not a minimal path");
    std::vector<uint8_t> parity(lattice.num_plaquettes(), 0);
    for_each_member(candidate, [&](int e) {
        for (int r : lattice.edge_plaquettes(e)) {
            if (r != kNoPlaquette) {
                parity[r] ^= 1;
            }
        }
    });
    parity[p] ^= 1;
    if (p != q) {
        parity[q] ^= 1;
    }
    require(std::none_of(parity.begin(), parity.end(), [](uint8_t b) { return b != 0; }),
            ErrorCode::kInvalidArgument, "candidate does not join p and q");

    const std::vector<EdgeSet> paths = enumerate_minimal_paths(lattice, p, q, cap);
    int64_t total = 0;
    for (const auto &path : paths) {
        Residual r = residual(lattice, path, candidate);
        require(!r.wraps, ErrorCode::kDomain, "minimal paths wind differently around the torus");
        int64_t ones = std::count(r.site_labels.begin(), r.site_labels.end(), 1);
        total += std::min<int64_t>(ones, lattice.num_sites() - ones);
    }
    const int64_t count = static_cast<int64_t>(paths.size());
    const int64_t g = std::gcd(total, count);
    return {total / g, count / g};
}

DecodeRecord decode_instance(const Lattice &lattice, const EdgeSet &errors, std::span<const int> check_errors,
                             const MatchOptions &options) {
    DecodeRecord rec;
    rec.errors = errors;
    rec.check_errors.assign(check_errors.begin(), check_errors.end());
    std::sort(rec.check_errors.begin(), rec.check_errors.end());
    rec.syndrome = edge_syndrome(lattice, errors, check_errors);
    rec.matching = match_defects(lattice, rec.syndrome, options);
    rec.inferred = infer_errors(lattice, rec.matching);
    if (check_errors.empty()) {
        rec.residual = residual(lattice, errors, rec.inferred);
    } else {
        // Readout faults leave no edge to blame; the residual is still
        // reported, labelled through whatever cycle structure it has.
        rec.residual.edges = errors ^ rec.inferred;
        std::vector<uint8_t> seen;
        std::vector<int> frontier;
        rec.residual.wraps = !label_sites(lattice, rec.residual.edges, LabelTraversal::kBreadthFirst,
                                          rec.residual.site_labels, seen, frontier);
    }
    return rec;
}

void write_dump(std::ostream &out, const DecodeRecord &record) {
    auto section = [&out](const char *name, const std::vector<int> &items) {
        out << name << ' ' << items.size() << '\n';
        for (int i : items) {
            out << i << '\n';
        }
    };
    section("ERRORS", record.errors.indices());
    std::vector<int> negative;
    for (size_t s = 0; s < record.syndrome.parity_outputs.size(); ++s) {
        if (record.syndrome.parity_outputs[s] < 0) {
            negative.push_back(static_cast<int>(s));
        }
    }
    section("PARITY", negative);
    section("DEFECTS", record.syndrome.defects);
    out << "MATCHING " << record.matching.pairs.size() << '\n';
    for (const auto &[a, b] : record.matching.pairs) {
        out << a << ' ' << b << '\n';
    }
    section("INFERRED", record.inferred.indices());
    section("RESIDUAL", record.residual.edges.indices());
}

DecodeWorkspace::DecodeWorkspace(const Lattice &lattice)
    : lattice_(lattice),
      plaquette_parity_(lattice.num_plaquettes(), 0),
      correction_(lattice.num_edges()),
      scratch_(std::make_unique<MatchScratch>()) {
}

DecodeWorkspace::~DecodeWorkspace() = default;

double DecodeWorkspace::agreement(const EdgeSet &errors) {
    std::fill(plaquette_parity_.begin(), plaquette_parity_.end(), 0);
    for_each_member(errors, [&](int e) {
        for (int p : lattice_.edge_plaquettes(e)) {
            if (p != kNoPlaquette) {
                plaquette_parity_[p] ^= 1;
            }
        }
    });
    defects_.clear();
    for (int p = 0; p < lattice_.num_plaquettes(); ++p) {
        if (plaquette_parity_[p]) {
            defects_.push_back(p);
        }
    }
    const Matching matching = match_sorted_defects(lattice_, defects_, MatchOptions{}, *scratch_);
    correction_ = errors;
    for (const auto &[a, b] : matching.pairs) {
        add_path(lattice_, a, b, correction_);
    }
    if (!label_sites(lattice_, correction_, LabelTraversal::kBreadthFirst, labels_, seen_, queue_)) {
        return 0.5;
    }
    const double p1 = static_cast<double>(std::count(labels_.begin(), labels_.end(), 1)) / lattice_.num_sites();
    const double p0 = 1.0 - p1;
    return p0 * p0 + p1 * p1;
}

}  // namespace lmn
