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

#ifndef LMN_BLOSSOM_H_
#define LMN_BLOSSOM_H_

#include <cstdint>
#include <span>
#include <vector>

namespace lmn {

struct WeightedEdge {
    int u;
    int v;
    int64_t weight;
};

/// Maximum-weight matching on a general graph with integer weights, by the
/// primal-dual blossom method (Edmonds; Galil's O(n^3) bookkeeping). With
/// `max_cardinality` the result is a maximum-weight matching among those of
/// maximum cardinality, which is what minimum-weight perfect matching needs.
///
/// After solve() the dual solution stays available, so callers can check
/// optimality against edges that were never handed to the solver.
class BlossomMatcher {
   public:
    BlossomMatcher(int num_vertices, std::span<const WeightedEdge> edges, bool max_cardinality);

    /// `greedy_start` seeds the duals with each vertex's heaviest incident edge
    /// and pre-matches mutually tight pairs. Only valid with max_cardinality,
    /// and optimal only when the result is perfect.
    void solve(bool greedy_start = false);

    /// Mate of each vertex, -1 if unmatched.
    std::vector<int> mates() const;
    bool is_perfect() const;

    /// Reduced cost of a (possibly absent) edge under the final duals, in the
    /// solver's doubled units. Non-negative for every edge iff the dual is
    /// feasible for that edge.
    int64_t reduced_cost(int u, int v, int64_t weight) const;

    /// Doubled dual of vertex v.
    int64_t vertex_dual(int v) const noexcept {
        return dualvar_[v];
    }

    /// Full complementary-slackness check over the edges given at construction.
    bool verify_optimum() const;

   private:
    int64_t slack(int k) const;
    void blossom_leaves(int b, std::vector<int> &out) const;
    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    int nvertex_;
    int nedge_;
    bool max_cardinality_;
    std::vector<WeightedEdge> edges_;  // weights doubled
    std::vector<int> endpoint_;
    std::vector<int> neighbend_offsets_;
    std::vector<int> neighbend_;

    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> blossomchilds_;
    std::vector<int> blossombase_;
    std::vector<std::vector<int>> blossomendps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<char> has_blossombestedges_;
    std::vector<int> unusedblossoms_;
    std::vector<int64_t> dualvar_;
    std::vector<char> allowedge_;
    std::vector<int> queue_;
    std::vector<int> leaves_scratch_;
};

inline constexpr int32_t kForbiddenCost = INT32_MAX;

/// Pair costs of a complete graph, supplied on demand. Costs are non-negative;
/// kForbiddenCost marks pairs that may not be matched. A vertex with a finite
/// boundary cost may instead be left unmatched at that cost.
class PairCosts {
   public:
    virtual ~PairCosts() = default;
    virtual int size() const = 0;
    virtual int32_t cost(int i, int j) const = 0;
    virtual int32_t boundary_cost(int /*i*/) const {
        return kForbiddenCost;
    }
    /// Upper bound on every allowed cost. The default scans all pairs.
    virtual int32_t max_cost() const;
    /// Appends allowed partners of i, including its k cheapest (all of them
    /// when k >= size() - 1). The default scans the row.
    virtual void nearest(int i, int k, std::vector<int> &out) const;
    /// Appends every j != i with cost(i, j) <= limit, and possibly others.
    /// The default scans the row.
    virtual void partners_within(int i, int32_t limit, std::vector<int> &out) const;
};

/// Dense symmetric cost table.
class CostMatrix final : public PairCosts {
   public:
    explicit CostMatrix(int n)
        : n_(n), costs_(static_cast<size_t>(n) * n, kForbiddenCost), boundary_(n, kForbiddenCost) {
    }
    int size() const override {
        return n_;
    }
    int32_t cost(int i, int j) const override {
        return costs_[static_cast<size_t>(i) * n_ + j];
    }
    int32_t boundary_cost(int i) const override {
        return boundary_[i];
    }
    int32_t at(int i, int j) const noexcept {
        return costs_[static_cast<size_t>(i) * n_ + j];
    }
    void set(int i, int j, int32_t c) noexcept {
        costs_[static_cast<size_t>(i) * n_ + j] = c;
        costs_[static_cast<size_t>(j) * n_ + i] = c;
    }
    void set_boundary(int i, int32_t c) noexcept {
        boundary_[i] = c;
    }

   private:
    int n_;
    std::vector<int32_t> costs_;
    std::vector<int32_t> boundary_;
};

struct MatchingOptions {
    /// Each vertex starts with edges to its k cheapest partners.
    int candidates_per_vertex = 10;
    /// Exact mode prices every pair of the complete graph against the final
    /// duals and re-solves until none improves. Pruned mode stops after the
    /// first sparse solve.
    bool exact = true;
};

struct MatchingStats {
    int rounds = 0;
    int64_t candidate_edges = 0;
    int64_t priced_in_edges = 0;
};

inline constexpr int kUnmatched = -1;

/// Minimum-cost matching in which every vertex is either paired or, if it has
/// a finite boundary cost, left unmatched at that cost. Without boundary
/// costs this is minimum-weight perfect matching.
///
/// The solver starts from each vertex's nearest partners and, in exact mode,
/// prices the remaining pairs against the optimal duals until none improves.
/// Returns mate[i], or kUnmatched. Throws kMalformedSyndrome if some vertex
/// can be neither paired nor left unmatched.
std::vector<int> min_weight_matching(const PairCosts &costs, const MatchingOptions &options = {},
                                     MatchingStats *stats = nullptr);

}  // namespace lmn

#endif  // LMN_BLOSSOM_H_
