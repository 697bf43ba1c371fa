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

#include "lmn/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "lmn/decoder.h"
#include "lmn/error.h"
#include "lmn/noise.h"
#include "lmn/rng.h"

namespace lmn {

namespace {

constexpr int64_t kChunk = 64;

}  // namespace

PointEstimate run_point(const LatticeSpec &spec, double eps_b, int64_t trials, uint64_t seed, int workers) {
    require(trials >= 1, ErrorCode::kInvalidArgument, "trials must be positive");
    require(workers >= 1, ErrorCode::kInvalidArgument, "workers must be positive");
    require(std::isfinite(eps_b) && eps_b >= 0.0 && eps_b <= 0.5, ErrorCode::kDomain, "eps_b must lie in [0, 0.5]");
    const Lattice lattice(spec);

    std::vector<double> scores(trials, 1.0);
    std::atomic<int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            DecodeWorkspace workspace(lattice);
            for (;;) {
                const int64_t begin = next.fetch_add(kChunk);
                if (begin >= trials) {
                    return;
                }
                const int64_t end = std::min(trials, begin + kChunk);
                for (int64_t t = begin; t < end; ++t) {
                    RandomStream rng = RandomStream::derive(
                        seed, {static_cast<uint64_t>(spec.kind), static_cast<uint64_t>(spec.n), double_key(eps_b),
                               static_cast<uint64_t>(t)});
                    EdgeSet errors = sample_edge_errors(lattice, eps_b, rng);
                    scores[t] = errors.empty() ? 1.0 : workspace.agreement(errors);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next.store(trials);
        }
    };
    const int threads = static_cast<int>(std::min<int64_t>(workers, (trials + kChunk - 1) / kChunk));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    // Summed in trial order so the result is independent of scheduling.
    double sum = 0.0;
    for (double s : scores) {
        sum += s;
    }
    const double mean = sum / static_cast<double>(trials);
    double ss = 0.0;
    for (double s : scores) {
        ss += (s - mean) * (s - mean);
    }
    PointEstimate out;
    out.kind = spec.kind;
    out.n = spec.n;
    out.eps_b = eps_b;
    out.trials = trials;
    out.p_agree = mean;
    out.std_error = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) / std::sqrt(static_cast<double>(trials)) : 0.0;
    out.seed = seed;
    return out;
}

std::vector<PointEstimate> run_sweep(const SweepConfig &config) {
    require(!config.eps_grid.empty(), ErrorCode::kInvalidArgument, "eps grid is empty");
    for (size_t i = 0; i < config.eps_grid.size(); ++i) {
        double e = config.eps_grid[i];
        require(e >= 0.0 && e <= 0.5, ErrorCode::kDomain, "eps grid values must lie in [0, 0.5]");
        require(i == 0 || e > config.eps_grid[i - 1], ErrorCode::kInvalidArgument, "eps grid must be strictly increasing");
    }
    std::vector<PointEstimate> out;
    out.reserve(config.eps_grid.size());
    for (double e : config.eps_grid) {
        out.push_back(run_point(config.lattice, e, config.trials, config.master_seed, config.workers));
    }
    return out;
}

PinfModel PinfModel::quadratic(double coefficient) {
    require(std::isfinite(coefficient) && coefficient >= 0.0, ErrorCode::kInvalidArgument,
            "quadratic coefficient must be non-negative");
    PinfModel m;
    m.kind = PinfKind::kQuadraticSmallEps;
    m.coefficient = coefficient;
    m.has_fallback = true;
    return m;
}

PinfModel PinfModel::interpolated(std::vector<std::pair<double, double>> knots, double fallback_coefficient,
                                  bool has_fallback) {
    require(!knots.empty(), ErrorCode::kInsufficientData, "table model needs at least one knot");
    for (size_t i = 0; i < knots.size(); ++i) {
        require(std::isfinite(knots[i].first) && std::isfinite(knots[i].second) && knots[i].first >= 0.0 &&
                    knots[i].second >= 0.0 && knots[i].second <= 1.0,
                ErrorCode::kInvalidArgument, "table knots must be finite probabilities");
        require(i == 0 || knots[i].first > knots[i - 1].first, ErrorCode::kInvalidArgument,
                "table knots must be strictly increasing in eps");
    }
    PinfModel m;
    m.kind = PinfKind::kTableInterpolated;
    m.table = std::move(knots);
    m.coefficient = fallback_coefficient;
    m.has_fallback = has_fallback;
    return m;
}

double PinfModel::max_eps() const {
    return kind == PinfKind::kQuadraticSmallEps ? kQuadraticDomain : table.back().first;
}

double PinfModel::operator()(double eps) const {
    require(std::isfinite(eps) && eps >= 0.0, ErrorCode::kDomain, "P_inf argument must be a probability");
    if (kind == PinfKind::kQuadraticSmallEps) {
        require(eps <= kQuadraticDomain, ErrorCode::kDomain, "quadratic P_inf model is valid only up to eps = 0.05");
        return std::max(0.0, 1.0 - coefficient * eps * eps);
    }
    require(eps <= table.back().first, ErrorCode::kDomain, "eps beyond the last P_inf knot");
    if (eps < table.front().first) {
        if (has_fallback) {
            return std::max(0.0, 1.0 - coefficient * eps * eps);
        }
        // Straight line from the noiseless point.
        return 1.0 + (table.front().second - 1.0) * eps / table.front().first;
    }
    auto it = std::lower_bound(table.begin(), table.end(), eps,
                               [](const std::pair<double, double> &k, double x) { return k.first < x; });
    if (it->first == eps) {
        return it->second;
    }
    const auto &hi = *it;
    const auto &lo = *(it - 1);
    const double f = (eps - lo.first) / (hi.first - lo.first);
    return lo.second + f * (hi.second - lo.second);
}

PinfModel extrapolate_pinf(const std::vector<PointEstimate> &estimates) {
    std::map<double, std::map<int, double>> by_eps;
    for (const auto &p : estimates) {
        by_eps[p.eps_b][p.n] = p.p_agree;
    }
    require(!by_eps.empty(), ErrorCode::kInsufficientData, "no estimates to extrapolate");
    std::vector<std::pair<double, double>> knots;
    for (const auto &[eps, sizes] : by_eps) {
        require(sizes.size() >= 3, ErrorCode::kInsufficientData, "extrapolation needs at least three sizes per eps");
        // Least squares for P = a + b x with x = 1 / N.
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const double m = static_cast<double>(sizes.size());
        for (const auto &[n, p] : sizes) {
            const double x = 1.0 / n;
            sx += x;
            sy += p;
            sxx += x * x;
            sxy += x * p;
        }
        const double denom = m * sxx - sx * sx;
        const double slope = (m * sxy - sx * sy) / denom;
        const double intercept = (sy - slope * sx) / m;
        knots.emplace_back(eps, std::clamp(intercept, 0.0, 1.0));
    }
    return PinfModel::interpolated(std::move(knots), 0.0, false);
}

SmallEpsFit fit_small_eps_coefficient(const PinfModel &model, double eps_max) {
    require(model.kind == PinfKind::kTableInterpolated, ErrorCode::kInvalidArgument,
            "small-eps fit needs a table model");
    double sxy = 0.0;
    double sxx = 0.0;
    std::vector<std::pair<double, double>> used;
    for (const auto &[eps, p] : model.table) {
        if (eps > 0.0 && eps <= eps_max * (1.0 + 1e-12)) {
            const double x2 = eps * eps;
            const double y = 1.0 - p;
            sxy += x2 * y;
            sxx += x2 * x2;
            used.emplace_back(x2, y);
        }
    }
    require(used.size() >= 4, ErrorCode::kInsufficientData, "small-eps fit needs at least four knots");
    SmallEpsFit fit;
    fit.coefficient = sxy / sxx;
    fit.knots = static_cast<int>(used.size());
    double rr = 0.0;
    double yy = 0.0;
    for (const auto &[x2, y] : used) {
        const double r = y - fit.coefficient * x2;
        rr += r * r;
        yy += y * y;
    }
    fit.relative_rms = yy > 0.0 ? std::sqrt(rr / yy) : 0.0;
    fit.poor_fit = fit.relative_rms > SmallEpsFit::kPoorFitThreshold;
    return fit;
}

std::map<int, std::vector<PointEstimate>> group_by_size(const std::vector<PointEstimate> &points) {
    std::map<int, std::vector<PointEstimate>> out;
    for (const auto &p : points) {
        out[p.n].push_back(p);
    }
    for (auto &[n, curve] : out) {
        std::sort(curve.begin(), curve.end(),
                  [](const PointEstimate &a, const PointEstimate &b) { return a.eps_b < b.eps_b; });
    }
    return out;
}

ThresholdEstimate estimate_threshold(const std::map<int, std::vector<PointEstimate>> &curves) {
    require(curves.size() >= 2, ErrorCode::kInsufficientData, "threshold estimate needs at least two sizes");
    ThresholdEstimate out;
    std::vector<double> sigmas;
    for (auto small = curves.begin(), large = std::next(curves.begin()); large != curves.end(); ++small, ++large) {
        std::map<double, std::pair<const PointEstimate *, const PointEstimate *>> common;
        for (const auto &p : small->second) {
            common[p.eps_b].first = &p;
        }
        for (const auto &p : large->second) {
            auto it = common.find(p.eps_b);
            if (it != common.end()) {
                it->second.second = &p;
            }
        }
        std::vector<double> eps;
        std::vector<double> diff;
        std::vector<double> sigma;
        for (const auto &[e, pair] : common) {
            if (pair.first && pair.second) {
                eps.push_back(e);
                diff.push_back(pair.second->p_agree - pair.first->p_agree);
                sigma.push_back(std::hypot(pair.second->std_error, pair.first->std_error));
            }
        }
        require(eps.size() >= 2, ErrorCode::kInsufficientData, "curves share fewer than two eps values");
        // Split point that best separates larger-N-wins from smaller-N-wins,
        // robust against isolated noisy sign flips.
        const int m = static_cast<int>(eps.size());
        int best_split = -1;
        int best_score = -1;
        for (int s = 1; s < m; ++s) {
            int score = 0;
            for (int i = 0; i < s; ++i) {
                score += diff[i] > 0.0;
            }
            for (int i = s; i < m; ++i) {
                score += diff[i] < 0.0;
            }
            bool has_positive = std::any_of(diff.begin(), diff.begin() + s, [](double v) { return v > 0.0; });
            bool has_negative = std::any_of(diff.begin() + s, diff.end(), [](double v) { return v < 0.0; });
            if (has_positive && has_negative && score > best_score) {
                best_score = score;
                best_split = s;
            }
        }
        if (best_split < 0) {
            fail(ErrorCode::kNoCrossing, "curves for N=" + std::to_string(small->first) + " and N=" +
                                             std::to_string(large->first) + " do not cross inside the grid");
        }
        const int a = best_split - 1;
        const int b = best_split;
        double crossing;
        double sigma_x;
        if (diff[a] > 0.0 && diff[b] <= 0.0) {
            const double slope = (diff[b] - diff[a]) / (eps[b] - eps[a]);
            crossing = diff[b] == 0.0 ? eps[b] : eps[a] - diff[a] / slope;
            sigma_x = std::max(sigma[a], sigma[b]) / std::abs(slope);
        } else {
            crossing = 0.5 * (eps[a] + eps[b]);
            sigma_x = 0.5 * (eps[b] - eps[a]);
        }
        out.crossings.push_back(crossing);
        sigmas.push_back(sigma_x);
    }
    double sum = 0.0;
    for (double c : out.crossings) {
        sum += c;
    }
    out.eps_star = sum / static_cast<double>(out.crossings.size());
    out.ci_low = out.eps_star;
    out.ci_high = out.eps_star;
    for (size_t i = 0; i < out.crossings.size(); ++i) {
        out.ci_low = std::min(out.ci_low, out.crossings[i] - sigmas[i]);
        out.ci_high = std::max(out.ci_high, out.crossings[i] + sigmas[i]);
    }
    return out;
}

}  // namespace lmn
