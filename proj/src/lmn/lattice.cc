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

#include "lmn/lattice.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <string>
#include <tuple>

#include "lmn/error.h"

namespace lmn {

namespace {

int wrap(int v, int n) {
    v %= n;
    return v < 0 ? v + n : v;
}

// Reduces a coordinate difference to [-n/2, n/2]; an exact half-period tie
// keeps the raw (non-wrapping) sign.
double minimal_image(double d, int n) {
    const double half = 0.5 * n;
    if (std::abs(std::abs(d) - half) < 1e-12) {
        return d;
    }
    double r = std::fmod(d, static_cast<double>(n));
    if (r > half) {
        r -= n;
    } else if (r < -half) {
        r += n;
    }
    return r;
}

std::vector<int> offsets_from_lists(const std::vector<std::vector<int>> &lists, std::vector<int> &flat) {
    std::vector<int> offsets(lists.size() + 1, 0);
    for (size_t i = 0; i < lists.size(); ++i) {
        offsets[i + 1] = offsets[i] + static_cast<int>(lists[i].size());
    }
    flat.clear();
    flat.reserve(offsets.back());
    for (const auto &l : lists) {
        flat.insert(flat.end(), l.begin(), l.end());
    }
    return offsets;
}

}  // namespace

std::string_view to_string(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::kSquarePlanar:
            return "square-planar";
        case LatticeKind::kSquareTorus:
            return "square-torus";
        case LatticeKind::kTriangularTorus:
            return "triangular-torus";
    }
    return "unknown";
}

LatticeKind parse_lattice_kind(std::string_view name) {
    if (name == "square-planar") {
        return LatticeKind::kSquarePlanar;
    }
    if (name == "square-torus") {
        return LatticeKind::kSquareTorus;
    }
    if (name == "triangular-torus") {
        return LatticeKind::kTriangularTorus;
    }
    fail(ErrorCode::kInvalidArgument, "unknown lattice kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// EdgeSet

void EdgeSet::clear() {
    std::fill(words_.begin(), words_.end(), 0);
}

int EdgeSet::count() const {
    int c = 0;
    for (uint64_t w : words_) {
        c += std::popcount(w);
    }
    return c;
}

bool EdgeSet::empty() const {
    return std::all_of(words_.begin(), words_.end(), [](uint64_t w) { return w == 0; });
}

std::vector<int> EdgeSet::indices() const {
    std::vector<int> out;
    for (size_t i = 0; i < words_.size(); ++i) {
        uint64_t w = words_[i];
        while (w) {
            out.push_back(static_cast<int>(i * 64) + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return out;
}

EdgeSet &EdgeSet::operator^=(const EdgeSet &other) {
    require(size_ == other.size_, ErrorCode::kInvalidArgument, "edge sets belong to different lattices");
    for (size_t i = 0; i < words_.size(); ++i) {
        words_[i] ^= other.words_[i];
    }
    return *this;
}

EdgeSet EdgeSet::from_indices(int num_edges, std::span<const int> indices) {
    EdgeSet s(num_edges);
    for (int e : indices) {
        require(e >= 0 && e < num_edges, ErrorCode::kInvalidArgument, "edge index out of range");
        s.flip(e);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Lattice

Lattice::Lattice(LatticeSpec spec) : spec_(spec) {
    require(spec.n >= 2, ErrorCode::kInvalidArgument, "lattice size N must be at least 2");
    require(spec.n <= 4096, ErrorCode::kInvalidArgument, "lattice size N must be at most 4096");
    if (spec.kind == LatticeKind::kTriangularTorus) {
        build_triangular();
    } else {
        build_square();
    }
    finalize();
    if (spec.kind == LatticeKind::kTriangularTorus) {
        build_triangular_distance_tables();
    }
}

Lattice build_lattice(LatticeSpec spec) {
    return Lattice(spec);
}

int Lattice::edge_id(EdgeOrientation orientation, int x, int y) const {
    const int n = spec_.n;
    if (is_torus()) {
        x = wrap(x, n);
        y = wrap(y, n);
        switch (orientation) {
            case EdgeOrientation::kHorizontal:
                return y * n + x;
            case EdgeOrientation::kVertical:
                return n * n + y * n + x;
            case EdgeOrientation::kDiagonal:
                return spec_.kind == LatticeKind::kTriangularTorus ? 2 * n * n + y * n + x : -1;
        }
        return -1;
    }
    switch (orientation) {
        case EdgeOrientation::kHorizontal:
            if (x < 0 || x >= n - 1 || y < 0 || y >= n) {
                return -1;
            }
            return y * (n - 1) + x;
        case EdgeOrientation::kVertical:
            if (x < 0 || x >= n || y < 0 || y >= n - 1) {
                return -1;
            }
            return n * (n - 1) + y * n + x;
        case EdgeOrientation::kDiagonal:
            return -1;
    }
    return -1;
}

int Lattice::plaquette(int x, int y, int sub) const {
    const int m = cells_per_side_;
    if (is_torus()) {
        x = wrap(x, m);
        y = wrap(y, m);
    } else if (x < 0 || x >= m || y < 0 || y >= m) {
        return kNoPlaquette;
    }
    if (spec_.kind == LatticeKind::kTriangularTorus) {
        return 2 * (y * m + x) + sub;
    }
    return y * m + x;
}

void Lattice::build_square() {
    const int n = spec_.n;
    const bool torus = is_torus();
    cells_per_side_ = torus ? n : n - 1;
    plaquette_stride_ = 4;

    const int num_h = torus ? n * n : n * (n - 1);
    const int num_v = num_h;
    edge_sites_.resize(num_h + num_v);
    edge_orientation_.resize(num_h + num_v);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            int h = edge_id(EdgeOrientation::kHorizontal, x, y);
            if (h >= 0 && (torus || x < n - 1)) {
                edge_sites_[h] = {site(x, y), site(wrap(x + 1, n), y)};
                edge_orientation_[h] = EdgeOrientation::kHorizontal;
            }
            int v = edge_id(EdgeOrientation::kVertical, x, y);
            if (v >= 0 && (torus || y < n - 1)) {
                edge_sites_[v] = {site(x, y), site(x, wrap(y + 1, n))};
                edge_orientation_[v] = EdgeOrientation::kVertical;
            }
        }
    }

    const int m = cells_per_side_;
    plaquette_coords_.resize(m * m);
    plaquette_edges_.resize(4 * m * m);
    plaquette_corners_.resize(4 * m * m);
    for (int y = 0; y < m; ++y) {
        for (int x = 0; x < m; ++x) {
            int p = y * m + x;
            plaquette_coords_[p] = {x, y, 0};
            int *e = &plaquette_edges_[4 * p];
            e[0] = edge_id(EdgeOrientation::kHorizontal, x, y);
            e[1] = edge_id(EdgeOrientation::kHorizontal, x, y + 1);
            e[2] = edge_id(EdgeOrientation::kVertical, x, y);
            e[3] = edge_id(EdgeOrientation::kVertical, x + 1, y);
            int *c = &plaquette_corners_[4 * p];
            c[0] = site(x, y);
            c[1] = site(wrap(x + 1, n), y);
            c[2] = site(x, wrap(y + 1, n));
            c[3] = site(wrap(x + 1, n), wrap(y + 1, n));
        }
    }
}

void Lattice::build_triangular() {
    const int n = spec_.n;
    cells_per_side_ = n;
    plaquette_stride_ = 3;

    edge_sites_.resize(3 * n * n);
    edge_orientation_.resize(3 * n * n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            int h = edge_id(EdgeOrientation::kHorizontal, x, y);
            int v = edge_id(EdgeOrientation::kVertical, x, y);
            int d = edge_id(EdgeOrientation::kDiagonal, x, y);
            edge_sites_[h] = {site(x, y), site(wrap(x + 1, n), y)};
            edge_sites_[v] = {site(x, y), site(x, wrap(y + 1, n))};
            edge_sites_[d] = {site(x, y), site(wrap(x + 1, n), wrap(y + 1, n))};
            edge_orientation_[h] = EdgeOrientation::kHorizontal;
            edge_orientation_[v] = EdgeOrientation::kVertical;
            edge_orientation_[d] = EdgeOrientation::kDiagonal;
        }
    }

    plaquette_coords_.resize(2 * n * n);
    plaquette_edges_.resize(3 * 2 * n * n);
    plaquette_corners_.resize(3 * 2 * n * n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            int lower = plaquette(x, y, 0);
            int upper = plaquette(x, y, 1);
            plaquette_coords_[lower] = {x, y, 0};
            plaquette_coords_[upper] = {x, y, 1};
            int diag = edge_id(EdgeOrientation::kDiagonal, x, y);
            int *e = &plaquette_edges_[3 * lower];
            e[0] = edge_id(EdgeOrientation::kHorizontal, x, y);
            e[1] = edge_id(EdgeOrientation::kVertical, x + 1, y);
            e[2] = diag;
            e = &plaquette_edges_[3 * upper];
            e[0] = edge_id(EdgeOrientation::kVertical, x, y);
            e[1] = edge_id(EdgeOrientation::kHorizontal, x, y + 1);
            e[2] = diag;
            int *c = &plaquette_corners_[3 * lower];
            c[0] = site(x, y);
            c[1] = site(wrap(x + 1, n), y);
            c[2] = site(wrap(x + 1, n), wrap(y + 1, n));
            c = &plaquette_corners_[3 * upper];
            c[0] = site(x, y);
            c[1] = site(x, wrap(y + 1, n));
            c[2] = site(wrap(x + 1, n), wrap(y + 1, n));
        }
    }
}

void Lattice::finalize() {
    const int ne = num_edges();
    const int np = num_plaquettes();
    const int ns = num_sites();

    edge_plaquettes_.assign(ne, {kNoPlaquette, kNoPlaquette});
    for (int p = 0; p < np; ++p) {
        for (int e : plaquette_edges(p)) {
            auto &slot = edge_plaquettes_[e];
            if (slot[0] == kNoPlaquette) {
                slot[0] = p;
            } else {
                slot[1] = p;
            }
        }
    }

    std::vector<std::vector<int>> site_edge_lists(ns);
    for (int e = 0; e < ne; ++e) {
        site_edge_lists[edge_sites_[e][0]].push_back(e);
        site_edge_lists[edge_sites_[e][1]].push_back(e);
    }
    site_edge_offsets_ = offsets_from_lists(site_edge_lists, site_edges_);

    std::vector<std::vector<int>> site_plaquette_lists(ns);
    for (int p = 0; p < np; ++p) {
        for (int s : plaquette_corners(p)) {
            site_plaquette_lists[s].push_back(p);
        }
    }
    site_plaquette_offsets_ = offsets_from_lists(site_plaquette_lists, site_plaquettes_);

    std::vector<std::vector<DualNeighbor>> dual(np);
    for (int e = 0; e < ne; ++e) {
        auto [a, b] = edge_plaquettes_[e];
        if (a != kNoPlaquette && b != kNoPlaquette) {
            dual[a].push_back({b, e});
            dual[b].push_back({a, e});
        }
    }
    dual_offsets_.assign(np + 1, 0);
    for (int p = 0; p < np; ++p) {
        dual_offsets_[p + 1] = dual_offsets_[p] + static_cast<int>(dual[p].size());
    }
    dual_neighbors_.clear();
    for (const auto &l : dual) {
        dual_neighbors_.insert(dual_neighbors_.end(), l.begin(), l.end());
    }
}

void Lattice::build_triangular_distance_tables() {
    for (int sub = 0; sub < 2; ++sub) {
        auto &dist = tri_distance_[sub];
        dist.assign(num_plaquettes(), -1);
        int start = plaquette(0, 0, sub);
        std::deque<int> queue{start};
        dist[start] = 0;
        while (!queue.empty()) {
            int p = queue.front();
            queue.pop_front();
            for (const auto &nb : dual_neighbors(p)) {
                if (dist[nb.plaquette] < 0) {
                    dist[nb.plaquette] = dist[p] + 1;
                    queue.push_back(nb.plaquette);
                }
            }
        }
    }
}

std::array<double, 2> Lattice::plaquette_centroid(int p) const {
    DualCoord c = plaquette_coords_[p];
    if (spec_.kind != LatticeKind::kTriangularTorus) {
        return {c.x + 0.5, c.y + 0.5};
    }
    if (c.sub == 0) {
        return {c.x + 2.0 / 3.0, c.y + 1.0 / 3.0};
    }
    return {c.x + 1.0 / 3.0, c.y + 2.0 / 3.0};
}

int Lattice::dual_distance(int p, int q) const {
    DualCoord a = plaquette_coords_[p];
    DualCoord b = plaquette_coords_[q];
    switch (spec_.kind) {
        case LatticeKind::kSquarePlanar:
            return std::abs(a.x - b.x) + std::abs(a.y - b.y);
        case LatticeKind::kSquareTorus: {
            const int n = spec_.n;
            int dx = std::abs(a.x - b.x);
            int dy = std::abs(a.y - b.y);
            return std::min(dx, n - dx) + std::min(dy, n - dy);
        }
        case LatticeKind::kTriangularTorus: {
            const int n = spec_.n;
            int dx = wrap(b.x - a.x, n);
            int dy = wrap(b.y - a.y, n);
            return tri_distance_[a.sub][2 * (dy * n + dx) + b.sub];
        }
    }
    return 0;
}

int Lattice::boundary_distance(int p) const {
    require(!is_torus(), ErrorCode::kUnsupported, "boundary distance is defined on planar lattices only");
    DualCoord c = plaquette_coords_[p];
    const int m = cells_per_side_;
    return std::min({c.x + 1, c.y + 1, m - c.x, m - c.y});
}

// ---------------------------------------------------------------------------
// Paths

namespace {

struct Vec2 {
    double x;
    double y;
};

// Dual step across edge e out of plaquette `from`: twice the offset from the
// plaquette centroid to the edge midpoint, in the unwrapped frame.
Vec2 step_vector(const Lattice &lattice, int from, int e) {
    auto c = lattice.plaquette_centroid(from);
    auto [sx, sy] = lattice.site_coord(lattice.edge_sites(e)[0]);
    double mx = sx;
    double my = sy;
    switch (lattice.edge_orientation(e)) {
        case EdgeOrientation::kHorizontal:
            mx += 0.5;
            break;
        case EdgeOrientation::kVertical:
            my += 0.5;
            break;
        case EdgeOrientation::kDiagonal:
            mx += 0.5;
            my += 0.5;
            break;
    }
    double dx = mx - c[0];
    double dy = my - c[1];
    if (lattice.is_torus()) {
        dx = minimal_image(dx, lattice.n());
        dy = minimal_image(dy, lattice.n());
    }
    return {2 * dx, 2 * dy};
}

Vec2 target_offset(const Lattice &lattice, int p, int q) {
    auto cp = lattice.plaquette_centroid(p);
    auto cq = lattice.plaquette_centroid(q);
    double dx = cq[0] - cp[0];
    double dy = cq[1] - cp[1];
    if (lattice.is_torus()) {
        dx = minimal_image(dx, lattice.n());
        dy = minimal_image(dy, lattice.n());
    }
    return {dx, dy};
}

constexpr double kTol = 1e-9;

}  // namespace

std::vector<DualNeighbor> staircase_steps(const Lattice &lattice, int p, int q) {
    std::vector<DualNeighbor> steps;
    if (p == q) {
        return steps;
    }
    const Vec2 goal = target_offset(lattice, p, q);
    const double goal_len = std::hypot(goal.x, goal.y);
    Vec2 pos{0.0, 0.0};
    int cur = p;
    int remaining = lattice.dual_distance(p, q);
    while (cur != q) {
        const Vec2 rem{goal.x - pos.x, goal.y - pos.y};
        const int axis = std::abs(rem.x) > std::abs(rem.y) + kTol   ? 0
                         : std::abs(rem.y) > std::abs(rem.x) + kTol ? 1
                                                                    : -1;
        bool have = false;
        DualNeighbor best{};
        Vec2 best_step{};
        std::tuple<int, double, double, double> best_key;
        for (const auto &nb : lattice.dual_neighbors(cur)) {
            if (lattice.dual_distance(nb.plaquette, q) != remaining - 1) {
                continue;
            }
            Vec2 s = step_vector(lattice, cur, nb.edge);
            Vec2 next{pos.x + s.x, pos.y + s.y};
            int progress = (s.x * rem.x + s.y * rem.y) > kTol ? 0 : 1;
            double perp = std::abs(goal.x * next.y - goal.y * next.x) / goal_len;
            double axis_key = axis == 0 ? -std::abs(s.x) : axis == 1 ? -std::abs(s.y) : 0.0;
            double horizontal_key = -std::abs(s.x);
            auto key = std::make_tuple(progress, perp, axis_key, horizontal_key);
            auto better = [&] {
                if (std::get<0>(key) != std::get<0>(best_key)) {
                    return std::get<0>(key) < std::get<0>(best_key);
                }
                if (std::abs(std::get<1>(key) - std::get<1>(best_key)) > kTol) {
                    return std::get<1>(key) < std::get<1>(best_key);
                }
                if (std::abs(std::get<2>(key) - std::get<2>(best_key)) > kTol) {
                    return std::get<2>(key) < std::get<2>(best_key);
                }
                if (std::abs(std::get<3>(key) - std::get<3>(best_key)) > kTol) {
                    return std::get<3>(key) < std::get<3>(best_key);
                }
                return false;
            };
            if (!have || better()) {
                have = true;
                best = nb;
                best_step = s;
                best_key = key;
            }
        }
        if (!have) {
            fail(ErrorCode::kInternal, "no descending dual step found");
        }
        steps.push_back(best);
        pos.x += best_step.x;
        pos.y += best_step.y;
        cur = best.plaquette;
        --remaining;
    }
    return steps;
}

EdgeSet staircase_path(const Lattice &lattice, int p, int q) {
    EdgeSet out(lattice.num_edges());
    for (const auto &step : staircase_steps(lattice, p, q)) {
        out.flip(step.edge);
    }
    return out;
}

std::vector<EdgeSet> enumerate_minimal_paths(const Lattice &lattice, int p, int q, int cap) {
    std::vector<EdgeSet> out;
    EdgeSet current(lattice.num_edges());
    auto dfs = [&](auto &&self, int cur, int remaining) -> void {
        if (cur == q) {
            if (static_cast<int>(out.size()) >= cap) {
                fail(ErrorCode::kOverflow, "number of minimal paths exceeds cap");
            }
            out.push_back(current);
            return;
        }
        for (const auto &nb : lattice.dual_neighbors(cur)) {
            if (lattice.dual_distance(nb.plaquette, q) != remaining - 1) {
                continue;
            }
            current.flip(nb.edge);
            self(self, nb.plaquette, remaining - 1);
            current.flip(nb.edge);
        }
    };
    dfs(dfs, p, lattice.dual_distance(p, q));
    return out;
}

EdgeSet boundary_path(const Lattice &lattice, int p) {
    require(!lattice.is_torus(), ErrorCode::kUnsupported, "boundary paths exist on planar lattices only");
    const int n = lattice.n();
    const int m = n - 1;
    DualCoord c = lattice.plaquette_coord(p);
    const int d = lattice.boundary_distance(p);
    EdgeSet out(lattice.num_edges());
    if (c.x + 1 == d) {
        for (int x = c.x; x >= 0; --x) {
            out.flip(lattice.edge_id(EdgeOrientation::kVertical, x, c.y));
        }
    } else if (m - c.x == d) {
        for (int x = c.x + 1; x <= n - 1; ++x) {
            out.flip(lattice.edge_id(EdgeOrientation::kVertical, x, c.y));
        }
    } else if (c.y + 1 == d) {
        for (int y = c.y; y >= 0; --y) {
            out.flip(lattice.edge_id(EdgeOrientation::kHorizontal, c.x, y));
        }
    } else {
        for (int y = c.y + 1; y <= n - 1; ++y) {
            out.flip(lattice.edge_id(EdgeOrientation::kHorizontal, c.x, y));
        }
    }
    return out;
}

}  // namespace lmn
