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

#ifndef LMN_DECODER_H_
#define LMN_DECODER_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "lmn/blossom.h"
#include "lmn/lattice.h"

namespace lmn {

/// Parity outputs (+1 / -1 per site) and the plaquettes whose corner product is -1.
struct Syndrome {
    std::vector<int8_t> parity_outputs;  // empty when the lattice has no parity pattern (tori)
    std::vector<int> defects;            // sorted plaquette ids
};

inline constexpr int kBoundary = -1;

/// Pairs of plaquette ids; the second entry is kBoundary for a defect matched
/// to the planar boundary.
struct Matching {
    std::vector<std::pair<int, int>> pairs;
    int64_t total_weight = 0;
};

struct Residual {
    EdgeSet edges;
    std::vector<uint8_t> site_labels;
    /// Set when the residual winds around a torus; labels are then not
    /// well-defined and the instance counts as a decoding failure.
    bool wraps = false;
};

enum class LabelTraversal { kBreadthFirst, kDepthFirst };

struct MatchOptions {
    /// Restrict the matching graph to the k nearest partners per defect. Not exact.
    bool prune = false;
    int prune_k = 6;
};

struct Rational {
    int64_t num = 0;
    int64_t den = 1;
    double value() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    friend bool operator==(const Rational &, const Rational &) = default;
};

/// Per-site outputs of the planar network: a site compares the bits it
/// received from the left and from below; sites on the first row or column
/// receive one copy and report +1. Sites in `check_errors` report the
/// opposite value. Throws kUnsupported on tori, which have no origin.
std::vector<int8_t> parity_pattern(const Lattice &lattice, const EdgeSet &errors, std::span<const int> check_errors);

Syndrome plaquette_syndrome(const Lattice &lattice, std::span<const int8_t> outputs);

/// Syndrome of an error configuration on any lattice. On the plane this runs
/// parity_pattern then plaquette_syndrome; on tori the defects are the mod-2
/// boundary of the errors, and a faulty check flips every plaquette it is a
/// corner of.
Syndrome edge_syndrome(const Lattice &lattice, const EdgeSet &errors, std::span<const int> check_errors = {});

Matching match_defects(const Lattice &lattice, std::span<const int> defects, const MatchOptions &options = {});
inline Matching match_defects(const Lattice &lattice, const Syndrome &syndrome, const MatchOptions &options = {}) {
    return match_defects(lattice, syndrome.defects, options);
}

/// Exhaustive minimum over all pairings. Throws kOverflow above `cap` defects.
Matching brute_force_matching(const Lattice &lattice, std::span<const int> defects, int cap = 10);

EdgeSet infer_errors(const Lattice &lattice, const Matching &matching);

Residual residual(const Lattice &lattice, const EdgeSet &true_errors, const EdgeSet &inferred,
                  LabelTraversal traversal = LabelTraversal::kBreadthFirst);

double agreement_probability(const Residual &residual);
bool pair_agreement(const Residual &residual, int site_a, int site_b);

/// Mean over all minimal paths p -> q of the number of sites enclosed by
/// candidate XOR path.
Rational expected_wrong_sites(const Lattice &lattice, int p, int q, const EdgeSet &candidate, int cap = 10000);

/// Everything produced while decoding one instance.
struct DecodeRecord {
    EdgeSet errors;
    std::vector<int> check_errors;
    Syndrome syndrome;
    Matching matching;
    EdgeSet inferred;
    Residual residual;
};

DecodeRecord decode_instance(const Lattice &lattice, const EdgeSet &errors, std::span<const int> check_errors = {},
                             const MatchOptions &options = {});

/// Line-oriented dump: sections ERRORS, PARITY (sites reporting -1), DEFECTS,
/// MATCHING ("a b" per pair, -1 for the boundary), INFERRED, RESIDUAL. Each
/// section starts with "NAME count".
void write_dump(std::ostream &out, const DecodeRecord &record);

struct MatchScratch;

/// Reusable buffers for the Monte Carlo hot loop; one per worker.
class DecodeWorkspace {
   public:
    explicit DecodeWorkspace(const Lattice &lattice);
    ~DecodeWorkspace();
    DecodeWorkspace(const DecodeWorkspace &) = delete;
    DecodeWorkspace &operator=(const DecodeWorkspace &) = delete;
    /// Agreement probability after decoding `errors` with exact matching.
    double agreement(const EdgeSet &errors);

   private:
    const Lattice &lattice_;
    std::vector<uint8_t> plaquette_parity_;
    std::vector<int> defects_;
    EdgeSet correction_;
    std::vector<uint8_t> labels_;
    std::vector<uint8_t> seen_;
    std::vector<int> queue_;
    std::unique_ptr<MatchScratch> scratch_;
};

}  // namespace lmn

#endif  // LMN_DECODER_H_
