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

#ifndef LMN_LATTICE_H_
#define LMN_LATTICE_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lmn {

enum class LatticeKind { kSquarePlanar, kSquareTorus, kTriangularTorus };

std::string_view to_string(LatticeKind kind);
LatticeKind parse_lattice_kind(std::string_view name);

struct LatticeSpec {
    LatticeKind kind = LatticeKind::kSquareTorus;
    int n = 2;  // sites per side
};

enum class EdgeOrientation : uint8_t { kHorizontal, kVertical, kDiagonal };

/// A subset of lattice edges stored as a flat bitset. Symmetric difference is
/// the group operation used throughout decoding.
class EdgeSet {
   public:
    EdgeSet() = default;
    explicit EdgeSet(int num_edges) : size_(num_edges), words_((num_edges + 63) / 64, 0) {
    }

    int size() const noexcept {
        return size_;
    }
    bool test(int e) const {
        return (words_[e >> 6] >> (e & 63)) & 1U;
    }
    void set(int e) {
        words_[e >> 6] |= uint64_t{1} << (e & 63);
    }
    void reset(int e) {
        words_[e >> 6] &= ~(uint64_t{1} << (e & 63));
    }
    void flip(int e) {
        words_[e >> 6] ^= uint64_t{1} << (e & 63);
    }
    void clear();
    int count() const;
    bool empty() const;
    std::vector<int> indices() const;

    EdgeSet &operator^=(const EdgeSet &other);
    friend EdgeSet operator^(EdgeSet a, const EdgeSet &b) {
        a ^= b;
        return a;
    }
    friend bool operator==(const EdgeSet &a, const EdgeSet &b) = default;

    static EdgeSet from_indices(int num_edges, std::span<const int> indices);

    std::span<const uint64_t> words() const noexcept {
        return words_;
    }

   private:
    int size_ = 0;
    std::vector<uint64_t> words_;
};

/// Position of a plaquette (dual vertex). For square lattices `sub` is 0 and
/// (x, y) is the lower-left site of the unit cell. Triangular cells are split
/// by the up-right diagonal into a lower (sub = 0) and upper (sub = 1) triangle.
struct DualCoord {
    int x;
    int y;
    int sub;
};

struct DualNeighbor {
    int plaquette;
    int edge;
};

inline constexpr int kNoPlaquette = -1;

/// Sites, edges and plaquettes of a 2D lattice with their incidence maps.
/// Immutable after construction and safe to share across threads.
class Lattice {
   public:
    explicit Lattice(LatticeSpec spec);

    const LatticeSpec &spec() const noexcept {
        return spec_;
    }
    LatticeKind kind() const noexcept {
        return spec_.kind;
    }
    int n() const noexcept {
        return spec_.n;
    }
    bool is_torus() const noexcept {
        return spec_.kind != LatticeKind::kSquarePlanar;
    }
    bool is_square() const noexcept {
        return spec_.kind != LatticeKind::kTriangularTorus;
    }

    int num_sites() const noexcept {
        return spec_.n * spec_.n;
    }
    int num_edges() const noexcept {
        return static_cast<int>(edge_sites_.size());
    }
    int num_plaquettes() const noexcept {
        return static_cast<int>(plaquette_coords_.size());
    }

    int site(int x, int y) const noexcept {
        return y * spec_.n + x;
    }
    std::array<int, 2> site_coord(int s) const noexcept {
        return {s % spec_.n, s / spec_.n};
    }

    /// Edge id by orientation and the coordinates of its lower-left endpoint;
    /// -1 when the edge does not exist (planar boundary).
    int edge_id(EdgeOrientation orientation, int x, int y) const;
    EdgeOrientation edge_orientation(int e) const noexcept {
        return edge_orientation_[e];
    }
    /// Endpoints ordered tail -> head along the direction of travel (right/up).
    const std::array<int, 2> &edge_sites(int e) const noexcept {
        return edge_sites_[e];
    }
    /// Bordering plaquettes; the second slot is kNoPlaquette for planar boundary edges.
    const std::array<int, 2> &edge_plaquettes(int e) const noexcept {
        return edge_plaquettes_[e];
    }
    bool is_boundary_edge(int e) const noexcept {
        return edge_plaquettes_[e][1] == kNoPlaquette;
    }

    std::span<const int> site_edges(int s) const {
        return {site_edges_.data() + site_edge_offsets_[s],
                site_edges_.data() + site_edge_offsets_[s + 1]};
    }
    std::span<const int> plaquette_edges(int p) const {
        return {plaquette_edges_.data() + p * plaquette_stride_,
                static_cast<size_t>(plaquette_stride_)};
    }
    std::span<const int> plaquette_corners(int p) const {
        return {plaquette_corners_.data() + p * plaquette_stride_,
                static_cast<size_t>(plaquette_stride_)};
    }
    /// Plaquettes having site `s` as a corner.
    std::span<const int> site_plaquettes(int s) const {
        return {site_plaquettes_.data() + site_plaquette_offsets_[s],
                site_plaquettes_.data() + site_plaquette_offsets_[s + 1]};
    }
    std::span<const DualNeighbor> dual_neighbors(int p) const {
        return {dual_neighbors_.data() + dual_offsets_[p], dual_neighbors_.data() + dual_offsets_[p + 1]};
    }

    DualCoord plaquette_coord(int p) const noexcept {
        return plaquette_coords_[p];
    }
    int plaquette(int x, int y, int sub = 0) const;
    /// Centroid in site coordinates (sites at integer points).
    std::array<double, 2> plaquette_centroid(int p) const;

    /// Graph distance on the dual lattice (torus: minimum over wrap-arounds).
    int dual_distance(int p, int q) const;
    /// Number of edges to cross to leave a planar lattice from plaquette p.
    int boundary_distance(int p) const;

   private:
    void build_square();
    void build_triangular();
    void finalize();
    void build_triangular_distance_tables();

    LatticeSpec spec_;
    int cells_per_side_ = 0;  // N - 1 on the plane, N on tori
    int plaquette_stride_ = 0;

    std::vector<std::array<int, 2>> edge_sites_;
    std::vector<std::array<int, 2>> edge_plaquettes_;
    std::vector<EdgeOrientation> edge_orientation_;
    std::vector<DualCoord> plaquette_coords_;
    std::vector<int> plaquette_edges_;
    std::vector<int> plaquette_corners_;

    std::vector<int> site_edge_offsets_, site_edges_;
    std::vector<int> site_plaquette_offsets_, site_plaquettes_;
    std::vector<int> dual_offsets_;
    std::vector<DualNeighbor> dual_neighbors_;

    // Triangular torus: distances from the two plaquettes of cell (0, 0) to
    // every plaquette; translation invariance covers all other pairs.
    std::array<std::vector<int>, 2> tri_distance_;
};

Lattice build_lattice(LatticeSpec spec);

/// Minimal dual path from p to q that follows the straight segment p -> q as
/// closely as possible: at each step the candidate closest to the segment
/// wins, ties go to the axis with the larger remaining displacement, then to
/// the horizontal step. Returned as the sequence of (plaquette, crossed edge).
std::vector<DualNeighbor> staircase_steps(const Lattice &lattice, int p, int q);
EdgeSet staircase_path(const Lattice &lattice, int p, int q);

/// All minimal dual paths between p and q. Throws kOverflow above `cap`.
std::vector<EdgeSet> enumerate_minimal_paths(const Lattice &lattice, int p, int q, int cap);

/// Straight dual walk from plaquette p to the nearest planar boundary; the
/// returned edges end with the crossed boundary edge.
EdgeSet boundary_path(const Lattice &lattice, int p);

}  // namespace lmn

#endif  // LMN_LATTICE_H_
