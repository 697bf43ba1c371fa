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

#include "lmn/lmn.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "lmn/decoder.h"
#include "lmn/encoder.h"
#include "lmn/error.h"
#include "lmn/lattice.h"
#include "lmn/montecarlo.h"
#include "lmn/noise.h"
#include "lmn/percolation.h"
#include "lmn/rng.h"

struct lmn_lattice {
    lmn::Lattice lattice;
};

struct lmn_decode {
    lmn::DecodeRecord record;
    std::string dump;
};

struct lmn_pinf {
    lmn::PinfModel model;
};

struct lmn_budget {
    lmn::ErrorBudget budget;
};

namespace {

thread_local std::string last_error;

lmn_status status_of(lmn::ErrorCode code) {
    switch (code) {
        case lmn::ErrorCode::kInvalidArgument:
            return LMN_ERR_INVALID_ARGUMENT;
        case lmn::ErrorCode::kDomain:
            return LMN_ERR_DOMAIN;
        case lmn::ErrorCode::kOverflow:
            return LMN_ERR_OVERFLOW;
        case lmn::ErrorCode::kMalformedSyndrome:
            return LMN_ERR_MALFORMED_SYNDROME;
        case lmn::ErrorCode::kInfeasible:
            return LMN_ERR_INFEASIBLE;
        case lmn::ErrorCode::kNoCrossing:
            return LMN_ERR_NO_CROSSING;
        case lmn::ErrorCode::kInsufficientData:
            return LMN_ERR_INSUFFICIENT_DATA;
        case lmn::ErrorCode::kUnsupported:
            return LMN_ERR_UNSUPPORTED;
        case lmn::ErrorCode::kInternal:
            return LMN_ERR_INTERNAL;
    }
    return LMN_ERR_INTERNAL;
}

lmn_status set_error(lmn_status status, const char *message) {
    last_error = message;
    return status;
}

template <class F>
lmn_status guarded(F &&body) {
    try {
        body();
        last_error.clear();
        return LMN_OK;
    } catch (const lmn::Error &e) {
        return set_error(status_of(e.code()), e.what());
    } catch (const std::bad_alloc &) {
        return set_error(LMN_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return set_error(LMN_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(LMN_ERR_INTERNAL, "unknown failure");
    }
}

#define LMN_REQUIRE_PTR(p)                                                  \
    do {                                                                    \
        if ((p) == nullptr) {                                               \
            return set_error(LMN_ERR_NULL_POINTER, #p " must not be null"); \
        }                                                                   \
    } while (0)

lmn::LatticeKind to_kind(lmn_lattice_kind kind) {
    switch (kind) {
        case LMN_SQUARE_PLANAR:
            return lmn::LatticeKind::kSquarePlanar;
        case LMN_SQUARE_TORUS:
            return lmn::LatticeKind::kSquareTorus;
        case LMN_TRIANGULAR_TORUS:
            return lmn::LatticeKind::kTriangularTorus;
    }
    lmn::fail(lmn::ErrorCode::kInvalidArgument, "unknown lattice kind");
}

lmn_lattice_kind from_kind(lmn::LatticeKind kind) {
    switch (kind) {
        case lmn::LatticeKind::kSquarePlanar:
            return LMN_SQUARE_PLANAR;
        case lmn::LatticeKind::kSquareTorus:
            return LMN_SQUARE_TORUS;
        case lmn::LatticeKind::kTriangularTorus:
            return LMN_TRIANGULAR_TORUS;
    }
    return LMN_SQUARE_TORUS;
}

lmn::LogicalMode to_mode(lmn_logical_mode mode) {
    switch (mode) {
        case LMN_LOGICAL_EXACT_SUM:
            return lmn::LogicalMode::kExactSum;
        case LMN_LOGICAL_LEADING_ORDER:
            return lmn::LogicalMode::kLeadingOrder;
        case LMN_LOGICAL_SURVIVAL:
            return lmn::LogicalMode::kSurvivalFactors;
    }
    lmn::fail(lmn::ErrorCode::kInvalidArgument, "unknown logical mode");
}

lmn::PointEstimate to_estimate(const lmn_point &p) {
    lmn::PointEstimate e;
    e.kind = to_kind(p.kind);
    e.n = p.n;
    e.eps_b = p.eps_b;
    e.trials = p.trials;
    e.p_agree = p.p_agree;
    e.std_error = p.std_error;
    e.seed = p.seed;
    return e;
}

std::vector<lmn::PointEstimate> to_estimates(const lmn_point *points, size_t count) {
    std::vector<lmn::PointEstimate> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        out.push_back(to_estimate(points[i]));
    }
    return out;
}

std::vector<int32_t> section_values(const lmn::DecodeRecord &r, lmn_decode_section section) {
    auto from = [](const std::vector<int> &v) { return std::vector<int32_t>(v.begin(), v.end()); };
    switch (section) {
        case LMN_SECTION_ERRORS:
            return from(r.errors.indices());
        case LMN_SECTION_PARITY: {
            std::vector<int32_t> out;
            for (size_t s = 0; s < r.syndrome.parity_outputs.size(); ++s) {
                if (r.syndrome.parity_outputs[s] < 0) {
                    out.push_back(static_cast<int32_t>(s));
                }
            }
            return out;
        }
        case LMN_SECTION_DEFECTS:
            return from(r.syndrome.defects);
        case LMN_SECTION_MATCHING: {
            std::vector<int32_t> out;
            for (const auto &[a, b] : r.matching.pairs) {
                out.push_back(a);
                out.push_back(b);
            }
            return out;
        }
        case LMN_SECTION_INFERRED:
            return from(r.inferred.indices());
        case LMN_SECTION_RESIDUAL:
            return from(r.residual.edges.indices());
    }
    lmn::fail(lmn::ErrorCode::kInvalidArgument, "unknown dump section");
}

lmn_decode *make_decode(const lmn::Lattice &lattice, const lmn::EdgeSet &errors) {
    auto d = std::make_unique<lmn_decode>();
    d->record = lmn::decode_instance(lattice, errors);
    std::ostringstream os;
    lmn::write_dump(os, d->record);
    d->dump = os.str();
    return d.release();
}

}  // namespace

extern "C" {

LMN_API const char *lmn_version(void) {
    return "0.1.0";
}

LMN_API const char *lmn_status_name(lmn_status status) {
    switch (status) {
        case LMN_OK:
            return "ok";
        case LMN_ERR_INVALID_ARGUMENT:
            return "invalid argument";
        case LMN_ERR_DOMAIN:
            return "domain error";
        case LMN_ERR_OVERFLOW:
            return "overflow";
        case LMN_ERR_MALFORMED_SYNDROME:
            return "malformed syndrome";
        case LMN_ERR_INFEASIBLE:
            return "infeasible";
        case LMN_ERR_NO_CROSSING:
            return "no crossing";
        case LMN_ERR_INSUFFICIENT_DATA:
            return "insufficient data";
        case LMN_ERR_UNSUPPORTED:
            return "unsupported";
        case LMN_ERR_INTERNAL:
            return "internal error";
        case LMN_ERR_NULL_POINTER:
            return "null pointer";
        case LMN_ERR_BUFFER_TOO_SMALL:
            return "buffer too small";
    }
    return "unknown status";
}

LMN_API const char *lmn_last_error(void) {
    return last_error.c_str();
}

LMN_API lmn_status lmn_lattice_kind_parse(const char *name, lmn_lattice_kind *out) {
    LMN_REQUIRE_PTR(name);
    LMN_REQUIRE_PTR(out);
    return guarded([&] { *out = from_kind(lmn::parse_lattice_kind(name)); });
}

LMN_API const char *lmn_lattice_kind_name(lmn_lattice_kind kind) {
    switch (kind) {
        case LMN_SQUARE_PLANAR:
        case LMN_SQUARE_TORUS:
        case LMN_TRIANGULAR_TORUS:
            return lmn::to_string(to_kind(kind)).data();
    }
    return "";
}

LMN_API lmn_status lmn_lattice_create(lmn_lattice_kind kind, int n, lmn_lattice **out) {
    LMN_REQUIRE_PTR(out);
    *out = nullptr;
    return guarded([&] { *out = new lmn_lattice{lmn::Lattice(lmn::LatticeSpec{to_kind(kind), n})}; });
}

LMN_API void lmn_lattice_destroy(lmn_lattice *lattice) {
    delete lattice;
}

LMN_API int lmn_lattice_num_sites(const lmn_lattice *lattice) {
    return lattice ? lattice->lattice.num_sites() : -1;
}

LMN_API int lmn_lattice_num_edges(const lmn_lattice *lattice) {
    return lattice ? lattice->lattice.num_edges() : -1;
}

LMN_API int lmn_lattice_num_plaquettes(const lmn_lattice *lattice) {
    return lattice ? lattice->lattice.num_plaquettes() : -1;
}

LMN_API lmn_status lmn_decode_create(const lmn_lattice *lattice, const int32_t *errors, size_t num_errors,
                                     lmn_decode **out) {
    LMN_REQUIRE_PTR(lattice);
    LMN_REQUIRE_PTR(out);
    if (num_errors > 0) {
        LMN_REQUIRE_PTR(errors);
    }
    *out = nullptr;
    return guarded([&] {
        const lmn::Lattice &lat = lattice->lattice;
        lmn::EdgeSet set(lat.num_edges());
        for (size_t i = 0; i < num_errors; ++i) {
            lmn::require(errors[i] >= 0 && errors[i] < lat.num_edges(), lmn::ErrorCode::kInvalidArgument,
                         "edge index out of range");
            set.flip(errors[i]);
        }
        *out = make_decode(lat, set);
    });
}

LMN_API lmn_status lmn_decode_create_sampled(const lmn_lattice *lattice, double eps_b, uint64_t seed,
                                             uint64_t trial, lmn_decode **out) {
    LMN_REQUIRE_PTR(lattice);
    LMN_REQUIRE_PTR(out);
    *out = nullptr;
    return guarded([&] {
        const lmn::Lattice &lat = lattice->lattice;
        lmn::require(eps_b >= 0.0 && eps_b <= 0.5, lmn::ErrorCode::kDomain, "eps_b must lie in [0, 0.5]");
        lmn::RandomStream rng = lmn::RandomStream::derive(
            seed, {static_cast<uint64_t>(lat.kind()), static_cast<uint64_t>(lat.n()), lmn::double_key(eps_b), trial});
        *out = make_decode(lat, lmn::sample_edge_errors(lat, eps_b, rng));
    });
}

LMN_API void lmn_decode_destroy(lmn_decode *decode) {
    delete decode;
}

LMN_API lmn_status lmn_decode_section_get(const lmn_decode *decode, lmn_decode_section section, int32_t *data,
                                          size_t capacity, size_t *needed) {
    LMN_REQUIRE_PTR(decode);
    LMN_REQUIRE_PTR(needed);
    lmn_status status = LMN_OK;
    lmn_status guard = guarded([&] {
        const std::vector<int32_t> values = section_values(decode->record, section);
        *needed = values.size();
        if (values.size() > capacity || (data == nullptr && !values.empty())) {
            status = LMN_ERR_BUFFER_TOO_SMALL;
            return;
        }
        std::copy(values.begin(), values.end(), data);
    });
    if (guard != LMN_OK) {
        return guard;
    }
    return status == LMN_OK ? LMN_OK : set_error(status, "buffer too small");
}

LMN_API lmn_status lmn_decode_summary(const lmn_decode *decode, int64_t *matching_weight, double *agreement,
                                      int *wraps) {
    LMN_REQUIRE_PTR(decode);
    return guarded([&] {
        if (matching_weight) {
            *matching_weight = decode->record.matching.total_weight;
        }
        if (agreement) {
            *agreement = lmn::agreement_probability(decode->record.residual);
        }
        if (wraps) {
            *wraps = decode->record.residual.wraps ? 1 : 0;
        }
    });
}

LMN_API lmn_status lmn_decode_dump(const lmn_decode *decode, char *buffer, size_t capacity, size_t *needed) {
    LMN_REQUIRE_PTR(decode);
    LMN_REQUIRE_PTR(needed);
    const std::string &text = decode->dump;
    *needed = text.size() + 1;
    if (buffer == nullptr || capacity < text.size() + 1) {
        return set_error(LMN_ERR_BUFFER_TOO_SMALL, "buffer too small");
    }
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    last_error.clear();
    return LMN_OK;
}

LMN_API lmn_status lmn_run_point(lmn_lattice_kind kind, int n, double eps_b, int64_t trials, uint64_t seed,
                                 int workers, lmn_point *out) {
    LMN_REQUIRE_PTR(out);
    return guarded([&] {
        const lmn::PointEstimate e = lmn::run_point(lmn::LatticeSpec{to_kind(kind), n}, eps_b, trials, seed, workers);
        *out = lmn_point{from_kind(e.kind), e.n, e.eps_b, e.trials, e.p_agree, e.std_error, e.seed};
    });
}

LMN_API lmn_status lmn_estimate_threshold(const lmn_point *points, size_t count, lmn_threshold *out) {
    LMN_REQUIRE_PTR(points);
    LMN_REQUIRE_PTR(out);
    return guarded([&] {
        const lmn::ThresholdEstimate t = lmn::estimate_threshold(lmn::group_by_size(to_estimates(points, count)));
        lmn_threshold r{};
        r.eps_star = t.eps_star;
        r.ci_low = t.ci_low;
        r.ci_high = t.ci_high;
        r.num_crossings = t.crossings.size();
        std::strncpy(r.method, t.method.c_str(), sizeof(r.method) - 1);
        *out = r;
    });
}

LMN_API lmn_status lmn_pinf_quadratic(double coefficient, lmn_pinf **out) {
    LMN_REQUIRE_PTR(out);
    *out = nullptr;
    return guarded([&] { *out = new lmn_pinf{lmn::PinfModel::quadratic(coefficient)}; });
}

LMN_API lmn_status lmn_pinf_table(const double *eps, const double *p_inf, size_t count, double fallback_coefficient,
                                  int has_fallback, lmn_pinf **out) {
    LMN_REQUIRE_PTR(out);
    *out = nullptr;
    if (count > 0) {
        LMN_REQUIRE_PTR(eps);
        LMN_REQUIRE_PTR(p_inf);
    }
    return guarded([&] {
        std::vector<std::pair<double, double>> knots;
        for (size_t i = 0; i < count; ++i) {
            knots.emplace_back(eps[i], p_inf[i]);
        }
        *out = new lmn_pinf{lmn::PinfModel::interpolated(std::move(knots), fallback_coefficient, has_fallback != 0)};
    });
}

LMN_API lmn_status lmn_pinf_extrapolate(const lmn_point *points, size_t count, lmn_pinf **out) {
    LMN_REQUIRE_PTR(points);
    LMN_REQUIRE_PTR(out);
    *out = nullptr;
    return guarded([&] { *out = new lmn_pinf{lmn::extrapolate_pinf(to_estimates(points, count))}; });
}

LMN_API void lmn_pinf_destroy(lmn_pinf *pinf) {
    delete pinf;
}

LMN_API lmn_status lmn_pinf_eval(const lmn_pinf *pinf, double eps, double *out) {
    LMN_REQUIRE_PTR(pinf);
    LMN_REQUIRE_PTR(out);
    return guarded([&] { *out = pinf->model(eps); });
}

LMN_API lmn_status lmn_pinf_knots(const lmn_pinf *pinf, double *eps, double *p_inf, size_t capacity,
                                  size_t *needed) {
    LMN_REQUIRE_PTR(pinf);
    LMN_REQUIRE_PTR(needed);
    const auto &table = pinf->model.table;
    *needed = table.size();
    if (table.size() > capacity || (!table.empty() && (eps == nullptr || p_inf == nullptr))) {
        return set_error(LMN_ERR_BUFFER_TOO_SMALL, "buffer too small");
    }
    for (size_t i = 0; i < table.size(); ++i) {
        eps[i] = table[i].first;
        p_inf[i] = table[i].second;
    }
    last_error.clear();
    return LMN_OK;
}

LMN_API lmn_status lmn_pinf_fit_small_eps(const lmn_pinf *pinf, double eps_max, lmn_small_eps_fit *out) {
    LMN_REQUIRE_PTR(pinf);
    LMN_REQUIRE_PTR(out);
    return guarded([&] {
        const lmn::SmallEpsFit f = lmn::fit_small_eps_coefficient(pinf->model, eps_max);
        *out = lmn_small_eps_fit{f.coefficient, f.relative_rms, f.poor_fit ? 1 : 0, f.knots};
    });
}

LMN_API lmn_status lmn_plan_resources(double E_target, int n, const lmn_pinf *pinf, int t_max, lmn_logical_mode mode,
                                      lmn_plan *out) {
    LMN_REQUIRE_PTR(pinf);
    LMN_REQUIRE_PTR(out);
    return guarded([&] {
        lmn::PlannerOptions options;
        options.t_max = t_max;
        options.mode = to_mode(mode);
        const lmn::NetworkEstimate e = lmn::plan_resources(E_target, n, pinf->model, options);
        lmn_plan r{};
        r.E_target = e.E_target;
        r.n = e.n;
        r.t = e.t;
        r.eps_phys = e.eps_phys;
        r.eps_p_tilde = e.logical.eps_p_tilde;
        r.eps_b_tilde = e.logical.eps_b_tilde;
        r.eps_p_net = e.eps_p_net;
        r.eps_b_net = e.eps_b_net;
        for (int i = 0; i < 4; ++i) {
            r.state_coeffs[i] = e.state_coeffs[i];
        }
        r.E = e.E;
        r.qubits_per_station = e.qubits_per_station;
        *out = r;
    });
}

LMN_API lmn_status lmn_logical_rates(double eps, int t, lmn_logical_mode mode, double *eps_p_tilde,
                                     double *eps_b_tilde) {
    LMN_REQUIRE_PTR(eps_p_tilde);
    LMN_REQUIRE_PTR(eps_b_tilde);
    return guarded([&] {
        const lmn::LogicalRates r = lmn::logical_rates(eps, lmn::CodeParams{t}, to_mode(mode));
        *eps_p_tilde = r.eps_p_tilde;
        *eps_b_tilde = r.eps_b_tilde;
    });
}

LMN_API lmn_status lmn_distillable_entanglement(double eps_b_net, double eps_p_net, double *out) {
    LMN_REQUIRE_PTR(out);
    return guarded([&] { *out = lmn::distillable_entanglement(eps_b_net, eps_p_net); });
}

LMN_API lmn_status lmn_binary_entropy(double p, double *out) {
    LMN_REQUIRE_PTR(out);
    return guarded([&] { *out = lmn::binary_entropy(p); });
}

LMN_API lmn_status lmn_solve_entropy_threshold(double bits, int channels, double *out) {
    LMN_REQUIRE_PTR(out);
    return guarded([&] { *out = lmn::solve_entropy_threshold(bits, channels); });
}

LMN_API lmn_status lmn_threshold_with_measurement_error(double eps_c, double *out) {
    LMN_REQUIRE_PTR(out);
    return guarded([&] { *out = lmn::threshold_with_measurement_error(eps_c); });
}

LMN_API lmn_status lmn_error_budget(const lmn_noise_params *params, lmn_budget **out) {
    LMN_REQUIRE_PTR(params);
    LMN_REQUIRE_PTR(out);
    *out = nullptr;
    return guarded([&] {
        lmn::NoiseParams p;
        p.eps_b = params->eps_b;
        p.eps_c = params->eps_c;
        p.beta = params->beta;
        p.delta = params->delta;
        p.mu = params->mu;
        p.gamma = params->gamma;
        p.T0 = params->T0;
        p.m = params->m;
        *out = new lmn_budget{lmn::error_budget(p)};
    });
}

LMN_API void lmn_budget_destroy(lmn_budget *budget) {
    delete budget;
}

LMN_API lmn_status lmn_budget_totals(const lmn_budget *budget, double *eps_b_phys, double *eps_p_phys,
                                     double *F0_pumped) {
    LMN_REQUIRE_PTR(budget);
    if (eps_b_phys) {
        *eps_b_phys = budget->budget.eps_b_phys;
    }
    if (eps_p_phys) {
        *eps_p_phys = budget->budget.eps_p_phys;
    }
    if (F0_pumped) {
        *F0_pumped = budget->budget.F0_pumped;
    }
    last_error.clear();
    return LMN_OK;
}

LMN_API size_t lmn_budget_component_count(const lmn_budget *budget) {
    return budget ? budget->budget.components.size() : 0;
}

LMN_API lmn_status lmn_budget_component(const lmn_budget *budget, size_t index, const char **label, double *value,
                                        int *calibrated) {
    LMN_REQUIRE_PTR(budget);
    if (index >= budget->budget.components.size()) {
        return set_error(LMN_ERR_INVALID_ARGUMENT, "component index out of range");
    }
    const lmn::BudgetComponent &c = budget->budget.components[index];
    if (label) {
        *label = c.label.c_str();
    }
    if (value) {
        *value = c.value;
    }
    if (calibrated) {
        *calibrated = c.calibrated ? 1 : 0;
    }
    last_error.clear();
    return LMN_OK;
}

LMN_API lmn_status lmn_twirl(double phi0, double *flip_rate, double *phi_plus, double *phi_minus) {
    return guarded([&] {
        const lmn::TwirledLink t = lmn::twirl(lmn::PureLinkState{phi0});
        if (flip_rate) {
            *flip_rate = t.flip_rate;
        }
        if (phi_plus) {
            *phi_plus = t.phi_plus;
        }
        if (phi_minus) {
            *phi_minus = t.phi_minus;
        }
    });
}

LMN_API lmn_status lmn_percolation_bound(double p_star, double *out) {
    LMN_REQUIRE_PTR(out);
    return guarded([&] { *out = lmn::percolation_bound(p_star); });
}

LMN_API lmn_status lmn_decoding_bound(double eps_star, double *out) {
    LMN_REQUIRE_PTR(out);
    return guarded([&] { *out = lmn::decoding_bound(eps_star); });
}

LMN_API lmn_status lmn_simulate_bond_percolation(int n, double p, int64_t trials, uint64_t seed, int workers,
                                                 double *out) {
    LMN_REQUIRE_PTR(out);
    return guarded([&] { *out = lmn::simulate_bond_percolation(n, p, trials, seed, workers); });
}

}  // extern "C"
