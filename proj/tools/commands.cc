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

#include "commands.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <ostream>
#include <sstream>

#include "cli_support.h"
#include "lmn/lmn.h"

namespace lmn_cli {

namespace {

using nlohmann::ordered_json;

void check(lmn_status status) {
    if (status != LMN_OK) {
        throw RuntimeFailure(std::string(lmn_status_name(status)) + ": " + lmn_last_error());
    }
}

// For calls whose arguments come straight from flags.
void check_flags(lmn_status status) {
    if (status == LMN_ERR_INVALID_ARGUMENT || status == LMN_ERR_DOMAIN) {
        throw UsageError(lmn_last_error());
    }
    check(status);
}

struct LatticeDeleter {
    void operator()(lmn_lattice *p) const {
        lmn_lattice_destroy(p);
    }
};
struct DecodeDeleter {
    void operator()(lmn_decode *p) const {
        lmn_decode_destroy(p);
    }
};
struct PinfDeleter {
    void operator()(lmn_pinf *p) const {
        lmn_pinf_destroy(p);
    }
};
struct BudgetDeleter {
    void operator()(lmn_budget *p) const {
        lmn_budget_destroy(p);
    }
};
using LatticePtr = std::unique_ptr<lmn_lattice, LatticeDeleter>;
using DecodePtr = std::unique_ptr<lmn_decode, DecodeDeleter>;
using PinfPtr = std::unique_ptr<lmn_pinf, PinfDeleter>;
using BudgetPtr = std::unique_ptr<lmn_budget, BudgetDeleter>;

lmn_lattice_kind parse_kind(const std::string &name) {
    lmn_lattice_kind kind{};
    if (lmn_lattice_kind_parse(name.c_str(), &kind) != LMN_OK) {
        throw UsageError(lmn_last_error());
    }
    return kind;
}

// Everything a command produced, for the manifest.
struct RunRecord {
    std::string command;
    std::vector<std::string> args;  // normalized: no output flags, resolved seed
    ordered_json parameters = ordered_json::object();
    std::optional<uint64_t> seed;
    std::vector<std::pair<std::string, std::string>> outputs;  // flag, path
    std::vector<std::pair<std::string, std::string>> inputs;   // flag, path
};

// Flags naming files the command writes; replay substitutes fresh paths.
const std::vector<std::string> kOutputFlags = {"--out", "--pinf-out"};

bool takes_value(const std::string &flag) {
    return flag.rfind("--", 0) == 0;
}

// Drops output flags, --manifest and --seed from a raw command line.
std::vector<std::string> normalize_args(const std::vector<std::string> &raw) {
    std::vector<std::string> out;
    for (size_t i = 0; i < raw.size(); ++i) {
        std::string flag = raw[i];
        const size_t eq = flag.find('=');
        const bool inline_value = takes_value(flag) && eq != std::string::npos;
        if (inline_value) {
            flag = flag.substr(0, eq);
        }
        const bool dropped = flag == "--manifest" || flag == "--seed" ||
                             std::find(kOutputFlags.begin(), kOutputFlags.end(), flag) != kOutputFlags.end();
        if (dropped) {
            if (!inline_value) {
                ++i;
            }
            continue;
        }
        out.push_back(raw[i]);
    }
    return out;
}

// --seed wins over LMN_SEED, which wins over the default.
uint64_t resolve_seed(const std::string &flag_value) {
    if (!flag_value.empty()) {
        return parse_u64(flag_value);
    }
    if (const char *env = std::getenv("LMN_SEED"); env != nullptr && *env != '\0') {
        try {
            return parse_u64(env);
        } catch (const UsageError &) {
            throw UsageError("LMN_SEED must be a non-negative integer");
        }
    }
    return 1;
}

class Emitter {
   public:
    Emitter(std::string out_path, std::string manifest_path, std::ostream &stdout_stream)
        : out_path_(std::move(out_path)), manifest_path_(std::move(manifest_path)), stdout_(stdout_stream) {
    }

    void emit(const std::string &data) {
        if (out_path_.empty()) {
            stdout_ << data;
            stdout_.flush();
        } else {
            write_file(out_path_, data);
        }
    }

    void finish(RunRecord &record) {
        std::string manifest = manifest_path_;
        if (manifest.empty() && !out_path_.empty()) {
            manifest = out_path_ + ".manifest.json";
        }
        if (manifest.empty()) {
            return;
        }
        if (!out_path_.empty()) {
            record.outputs.insert(record.outputs.begin(), {"--out", out_path_});
        }
        ordered_json doc;
        doc["command"] = record.command;
        doc["args"] = record.args;
        doc["parameters"] = record.parameters;
        if (record.seed) {
            doc["master_seed"] = *record.seed;
        } else {
            doc["master_seed"] = nullptr;
        }
        doc["code_version"] = lmn_version();
        doc["timestamp"] = utc_timestamp();
        ordered_json inputs = ordered_json::array();
        for (const auto &[flag, path] : record.inputs) {
            inputs.push_back({{"flag", flag}, {"path", path}, {"sha256", sha256_hex(read_file(path))}});
        }
        doc["inputs"] = inputs;
        ordered_json outputs = ordered_json::array();
        for (const auto &[flag, path] : record.outputs) {
            outputs.push_back({{"flag", flag}, {"path", path}, {"sha256", sha256_hex(read_file(path))}});
        }
        doc["outputs"] = outputs;
        write_file(manifest, doc.dump(2) + "\n");
    }

   private:
    std::string out_path_;
    std::string manifest_path_;
    std::ostream &stdout_;
};

// ---- CSV ----------------------------------------------------------------

const char *const kSweepHeader = "kind,N,eps_b,trials,p_agree,stderr,seed";
const char *const kResourceHeader = "E_target,N,t,eps_percent,eps_b_net,eps_p_net,E_achieved,qubits_per_station";

std::string point_row(const lmn_point &p) {
    return std::string(lmn_lattice_kind_name(p.kind)) + "," + std::to_string(p.n) + "," + format_double(p.eps_b) +
           "," + std::to_string(p.trials) + "," + format_double(p.p_agree) + "," + format_double(p.std_error) + "," +
           std::to_string(p.seed) + "\n";
}

std::vector<lmn_point> read_sweep_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || split(line, ',') != split(kSweepHeader, ',')) {
        throw RuntimeFailure(std::string("sweep CSV must start with the header ") + kSweepHeader);
    }
    std::vector<lmn_point> points;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 7) {
            throw RuntimeFailure("sweep CSV row " + std::to_string(row) + " does not have 7 fields");
        }
        try {
            lmn_point p{};
            p.kind = parse_kind(f[0]);
            p.n = static_cast<int>(parse_int(f[1]));
            p.eps_b = parse_double(f[2]);
            p.trials = parse_int(f[3]);
            p.p_agree = parse_double(f[4]);
            p.std_error = parse_double(f[5]);
            p.seed = parse_u64(f[6]);
            points.push_back(p);
        } catch (const UsageError &e) {
            throw RuntimeFailure("sweep CSV row " + std::to_string(row) + ": " + e.what());
        }
    }
    if (points.empty()) {
        throw RuntimeFailure("sweep CSV has no rows");
    }
    return points;
}

// ---- shared sweep options ------------------------------------------------

struct SweepOptions {
    std::string lattice = "square-torus";
    std::string sizes;
    std::string eps;
    std::string refine;
    int64_t trials = 10000;
    int workers = 1;
    bool progress = false;

    void attach(CLI::App *app, bool required) {
        app->add_option("--lattice", lattice, "square-torus | square-planar | triangular-torus")
            ->capture_default_str();
        auto *s = app->add_option("--sizes", sizes, "comma list of lattice sizes");
        auto *e = app->add_option("--eps", eps, "flip-rate grid, start:stop:step or a comma list");
        if (required) {
            s->required();
            e->required();
        }
        app->add_option("--refine", refine, "extra grid merged into --eps");
        app->add_option("--trials", trials, "trials per point")->capture_default_str();
        app->add_option("--workers", workers, "worker threads")->capture_default_str();
        app->add_flag("--progress", progress, "report each point on stderr");
    }

    std::vector<double> grid() const {
        std::vector<double> g = parse_grid(eps);
        if (!refine.empty()) {
            g = merge_grids(g, parse_grid(refine));
        } else {
            g = merge_grids(g, {});
        }
        for (double x : g) {
            if (x < 0.0 || x > 0.5) {
                throw UsageError("flip rates must lie in [0, 0.5]");
            }
        }
        return g;
    }

    std::vector<int> size_list() const {
        std::vector<int> out;
        for (int64_t n : parse_int_list(sizes)) {
            if (n < 2 || n > 4096) {
                throw UsageError("lattice sizes must lie in [2, 4096]");
            }
            out.push_back(static_cast<int>(n));
        }
        return out;
    }

    void validate() const {
        if (trials < 1) {
            throw UsageError("--trials must be positive");
        }
        if (workers < 1) {
            throw UsageError("--workers must be positive");
        }
    }

    std::vector<lmn_point> run(uint64_t seed, std::ostream &err) const {
        validate();
        const lmn_lattice_kind kind = parse_kind(lattice);
        const std::vector<double> g = grid();
        std::vector<lmn_point> points;
        for (int n : size_list()) {
            for (double e : g) {
                lmn_point p{};
                check(lmn_run_point(kind, n, e, trials, seed, workers, &p));
                if (progress) {
                    err << "N=" << n << " eps=" << format_double(e) << " p_agree=" << format_double(p.p_agree)
                        << "\n";
                }
                points.push_back(p);
            }
        }
        return points;
    }

    void record(ordered_json &params) const {
        params["lattice"] = lattice;
        params["sizes"] = size_list();
        params["eps_grid"] = grid();
        params["trials"] = trials;
        params["workers"] = workers;
    }
};

// ---- P_inf model files ---------------------------------------------------

ordered_json pinf_document(const lmn_pinf *pinf, std::optional<double> fallback) {
    size_t count = 0;
    lmn_pinf_knots(pinf, nullptr, nullptr, 0, &count);
    std::vector<double> eps(count), p(count);
    check(lmn_pinf_knots(pinf, eps.data(), p.data(), count, &count));
    ordered_json doc;
    doc["kind"] = "table";
    doc["fit_form"] = "P_N = P_inf + a / N";
    ordered_json knots = ordered_json::array();
    for (size_t i = 0; i < count; ++i) {
        knots.push_back({eps[i], p[i]});
    }
    doc["knots"] = knots;
    doc["has_fallback"] = fallback.has_value();
    doc["fallback_coefficient"] = fallback.value_or(0.0);
    return doc;
}

PinfPtr load_pinf(const std::string &spec, RunRecord &record) {
    lmn_pinf *raw = nullptr;
    if (spec.rfind("quadratic:", 0) == 0) {
        check(lmn_pinf_quadratic(parse_double(spec.substr(10)), &raw));
        return PinfPtr(raw);
    }
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_file(spec));
        std::vector<double> eps, p;
        for (const auto &knot : doc.at("knots")) {
            eps.push_back(knot.at(0).get<double>());
            p.push_back(knot.at(1).get<double>());
        }
        const bool has_fallback = doc.value("has_fallback", false);
        const double c = doc.value("fallback_coefficient", 0.0);
        check(lmn_pinf_table(eps.data(), p.data(), eps.size(), c, has_fallback ? 1 : 0, &raw));
    } catch (const nlohmann::json::exception &e) {
        throw RuntimeFailure("malformed P_inf table '" + spec + "': " + e.what());
    }
    record.inputs.emplace_back("--pinf", spec);
    return PinfPtr(raw);
}

// ---- commands -------------------------------------------------------------

struct Common {
    std::string out;
    std::string manifest;
    std::string seed;
};

void attach_output(CLI::App *app, Common &c) {
    app->add_option("--out", c.out, "output file (default: stdout)");
    app->add_option("--manifest", c.manifest, "manifest path (default: <out>.manifest.json)");
}

void attach_seed(CLI::App *app, Common &c) {
    app->add_option("--seed", c.seed, "master seed (default: LMN_SEED, else 1)");
}

int cmd_sweep(const SweepOptions &opt, const Common &c, RunRecord &record, std::ostream &out, std::ostream &err) {
    const uint64_t seed = resolve_seed(c.seed);
    record.seed = seed;
    opt.record(record.parameters);
    std::string csv = std::string(kSweepHeader) + "\n";
    for (const lmn_point &p : opt.run(seed, err)) {
        csv += point_row(p);
    }
    Emitter emitter(c.out, c.manifest, out);
    emitter.emit(csv);
    emitter.finish(record);
    return 0;
}

struct ThresholdOptions {
    std::string in;
    double fit_eps_max = 0.04;
    std::string pinf_out;
};

int cmd_threshold(const SweepOptions &sweep, const ThresholdOptions &opt, const Common &c, RunRecord &record,
                  std::ostream &out, std::ostream &err) {
    std::vector<lmn_point> points;
    uint64_t seed = 0;
    if (!opt.in.empty()) {
        if (!sweep.sizes.empty() || !sweep.eps.empty()) {
            throw UsageError("--in excludes the inline sweep flags");
        }
        points = read_sweep_csv(read_file(opt.in));
        seed = points.front().seed;
        record.inputs.emplace_back("--in", opt.in);
    } else {
        if (sweep.sizes.empty() || sweep.eps.empty()) {
            throw UsageError("threshold needs --in or the sweep flags --sizes and --eps");
        }
        seed = resolve_seed(c.seed);
        sweep.record(record.parameters);
        points = sweep.run(seed, err);
    }
    record.seed = seed;
    record.parameters["fit_eps_max"] = opt.fit_eps_max;

    lmn_threshold t{};
    check(lmn_estimate_threshold(points.data(), points.size(), &t));

    // The small-eps coefficient needs an extrapolated curve; it is reported
    // as null when the data cannot support one.
    std::optional<double> coefficient;
    PinfPtr pinf;
    lmn_pinf *raw = nullptr;
    if (lmn_pinf_extrapolate(points.data(), points.size(), &raw) == LMN_OK) {
        pinf.reset(raw);
        lmn_small_eps_fit fit{};
        if (lmn_pinf_fit_small_eps(pinf.get(), opt.fit_eps_max, &fit) == LMN_OK) {
            coefficient = fit.coefficient;
            if (fit.poor_fit) {
                err << "warning: quadratic small-eps law fits poorly (relative rms " << format_double(fit.relative_rms)
                    << ")\n";
            }
        }
    }

    ordered_json doc;
    doc["eps_star"] = t.eps_star;
    doc["ci_low"] = t.ci_low;
    doc["ci_high"] = t.ci_high;
    doc["coefficient"] = coefficient ? ordered_json(*coefficient) : ordered_json(nullptr);
    doc["fit_eps_max"] = opt.fit_eps_max;
    doc["method"] = t.method;
    doc["seed"] = seed;

    if (!opt.pinf_out.empty()) {
        if (!pinf) {
            throw RuntimeFailure("P_inf extrapolation needs at least three sizes at every eps");
        }
        write_file(opt.pinf_out, pinf_document(pinf.get(), coefficient).dump(2) + "\n");
        record.outputs.emplace_back("--pinf-out", opt.pinf_out);
    }
    Emitter emitter(c.out, c.manifest, out);
    emitter.emit(doc.dump(2) + "\n");
    emitter.finish(record);
    return 0;
}

struct ResourceOptions {
    std::string targets = "0.25,0.5,0.75";
    std::string sizes = "10,100,1000,10000,100000";
    std::string pinf;
    int t_max = 12;
    std::string mode = "exact";
};

int cmd_resources(const ResourceOptions &opt, const Common &c, RunRecord &record, std::ostream &out,
                  std::ostream &err) {
    static const std::map<std::string, lmn_logical_mode> kModes = {
        {"exact", LMN_LOGICAL_EXACT_SUM}, {"leading", LMN_LOGICAL_LEADING_ORDER}, {"survival", LMN_LOGICAL_SURVIVAL}};
    const auto mode = kModes.find(opt.mode);
    if (mode == kModes.end()) {
        throw UsageError("--mode must be exact, leading or survival");
    }
    if (opt.t_max < 1) {
        throw UsageError("--t-max must be at least 1");
    }
    const std::vector<double> targets = parse_double_list(opt.targets);
    std::vector<int> sizes;
    for (int64_t n : parse_int_list(opt.sizes)) {
        if (n < 2 || n > 1000000000) {
            throw UsageError("network sizes must lie in [2, 1e9]");
        }
        sizes.push_back(static_cast<int>(n));
    }
    PinfPtr pinf = load_pinf(opt.pinf, record);
    record.parameters["E"] = targets;
    record.parameters["N"] = sizes;
    record.parameters["pinf"] = opt.pinf;
    record.parameters["t_max"] = opt.t_max;
    record.parameters["mode"] = opt.mode;

    std::string csv = std::string(kResourceHeader) + "\n";
    int infeasible = 0;
    for (double E : targets) {
        for (int n : sizes) {
            lmn_plan plan{};
            const lmn_status status = lmn_plan_resources(E, n, pinf.get(), opt.t_max, mode->second, &plan);
            if (status == LMN_ERR_INFEASIBLE) {
                err << "infeasible: E=" << format_double(E) << " N=" << n << ": " << lmn_last_error() << "\n";
                ++infeasible;
                continue;
            }
            check(status);
            csv += format_double(E) + "," + std::to_string(n) + "," + std::to_string(plan.t) + "," +
                   format_double(plan.eps_phys * 100.0) + "," + format_double(plan.eps_b_net) + "," +
                   format_double(plan.eps_p_net) + "," + format_double(plan.E) + "," +
                   std::to_string(plan.qubits_per_station) + "\n";
        }
    }
    Emitter emitter(c.out, c.manifest, out);
    emitter.emit(csv);
    emitter.finish(record);
    return infeasible == 0 ? 0 : 1;
}

int cmd_budget(const lmn_noise_params &params, const Common &c, RunRecord &record, std::ostream &out) {
    lmn_budget *raw = nullptr;
    check_flags(lmn_error_budget(&params, &raw));
    BudgetPtr budget(raw);
    double eps_b = 0.0, eps_p = 0.0, f0 = 0.0;
    check(lmn_budget_totals(budget.get(), &eps_b, &eps_p, &f0));

    record.parameters = {{"beta", params.beta}, {"delta", params.delta}, {"mu", params.mu},
                         {"gamma", params.gamma}, {"T0", params.T0},       {"m", params.m},
                         {"eps_b", params.eps_b}, {"eps_c", params.eps_c}};
    ordered_json doc;
    doc["eps_b_phys"] = eps_b;
    doc["eps_p_phys"] = eps_p;
    doc["F0_pumped"] = f0;
    doc["eps_b_phys_over_beta"] = params.beta > 0.0 ? ordered_json(eps_b / params.beta) : ordered_json(nullptr);
    ordered_json components = ordered_json::array();
    const size_t count = lmn_budget_component_count(budget.get());
    for (size_t i = 0; i < count; ++i) {
        const char *label = nullptr;
        double value = 0.0;
        int calibrated = 0;
        check(lmn_budget_component(budget.get(), i, &label, &value, &calibrated));
        components.push_back({{"label", label}, {"value", value}, {"calibrated", calibrated != 0}});
    }
    doc["components"] = components;
    Emitter emitter(c.out, c.manifest, out);
    emitter.emit(doc.dump(2) + "\n");
    emitter.finish(record);
    return 0;
}

struct PercolationOptions {
    double eps_star = 0.11;
    double p_star = 0.5;
    std::string simulate;
    int knots = 11;
    int workers = 1;
};

int cmd_percolation(const PercolationOptions &opt, const Common &c, RunRecord &record, std::ostream &out) {
    if (opt.knots < 2) {
        throw UsageError("--knots must be at least 2");
    }
    if (opt.workers < 1) {
        throw UsageError("--workers must be positive");
    }
    ordered_json doc;
    double bound = 0.0;
    check_flags(lmn_percolation_bound(opt.p_star, &bound));
    double decoding = 0.0;
    check_flags(lmn_decoding_bound(opt.eps_star, &decoding));
    doc["p_star"] = opt.p_star;
    doc["percolation_bound"] = bound;
    doc["eps_star"] = opt.eps_star;
    doc["decoding_bound"] = decoding;
    ordered_json curve = ordered_json::array();
    for (int i = 0; i < opt.knots; ++i) {
        const double phi0 = 0.5 + 0.5 * i / (opt.knots - 1);
        double flip = 0.0, plus = 0.0, minus = 0.0;
        check(lmn_twirl(phi0, &flip, &plus, &minus));
        curve.push_back({{"phi0", phi0}, {"flip_rate", flip}, {"phi_plus", plus}, {"phi_minus", minus}});
    }
    doc["flip_rate_curve"] = curve;
    record.parameters = {{"eps_star", opt.eps_star}, {"p_star", opt.p_star}, {"knots", opt.knots}};
    if (!opt.simulate.empty()) {
        const std::vector<std::string> f = split(opt.simulate, ',');
        if (f.size() != 3) {
            throw UsageError("--simulate must read N,p,trials");
        }
        const int64_t n = parse_int(f[0]);
        const double p = parse_double(f[1]);
        const int64_t trials = parse_int(f[2]);
        if (n < 2 || n > 4096 || trials < 1 || p < 0.0 || p > 1.0) {
            throw UsageError("--simulate needs N in [2, 4096], p in [0, 1] and trials >= 1");
        }
        const uint64_t seed = resolve_seed(c.seed);
        record.seed = seed;
        double crossing = 0.0;
        check(lmn_simulate_bond_percolation(static_cast<int>(n), p, trials, seed, opt.workers, &crossing));
        doc["crossing"] = {{"N", n}, {"p", p}, {"trials", trials}, {"seed", seed}, {"probability", crossing}};
        record.parameters["simulate"] = {{"N", n}, {"p", p}, {"trials", trials}};
    }
    Emitter emitter(c.out, c.manifest, out);
    emitter.emit(doc.dump(2) + "\n");
    emitter.finish(record);
    return 0;
}

struct DecodeOptions {
    std::string lattice = "square-planar";
    int n = 0;
    std::optional<double> eps;
    std::optional<std::string> errors;
    uint64_t trial = 0;
};

int cmd_decode_one(const DecodeOptions &opt, const Common &c, RunRecord &record, std::ostream &out) {
    if (opt.eps.has_value() == opt.errors.has_value()) {
        throw UsageError("decode-one needs exactly one of --eps and --errors");
    }
    lmn_lattice *lraw = nullptr;
    check_flags(lmn_lattice_create(parse_kind(opt.lattice), opt.n, &lraw));
    LatticePtr lattice(lraw);
    record.parameters = {{"lattice", opt.lattice}, {"N", opt.n}};
    lmn_decode *draw = nullptr;
    if (opt.errors) {
        std::vector<int32_t> edges;
        if (!opt.errors->empty()) {
            for (int64_t e : parse_int_list(*opt.errors)) {
                if (e < 0 || e >= lmn_lattice_num_edges(lattice.get())) {
                    throw UsageError("edge index " + std::to_string(e) + " is out of range");
                }
                edges.push_back(static_cast<int32_t>(e));
            }
        }
        record.parameters["errors"] = edges;
        check(lmn_decode_create(lattice.get(), edges.data(), edges.size(), &draw));
    } else {
        const uint64_t seed = resolve_seed(c.seed);
        record.seed = seed;
        record.parameters["eps"] = *opt.eps;
        record.parameters["trial"] = opt.trial;
        check(lmn_decode_create_sampled(lattice.get(), *opt.eps, seed, opt.trial, &draw));
    }
    DecodePtr decode(draw);
    size_t needed = 0;
    lmn_decode_dump(decode.get(), nullptr, 0, &needed);
    std::string text(needed, '\0');
    check(lmn_decode_dump(decode.get(), text.data(), text.size(), &needed));
    text.resize(needed - 1);
    Emitter emitter(c.out, c.manifest, out);
    emitter.emit(text);
    emitter.finish(record);
    return 0;
}

int cmd_replay(const std::string &manifest_path, std::ostream &out, std::ostream &err) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_file(manifest_path));
    } catch (const nlohmann::json::exception &e) {
        throw RuntimeFailure("malformed manifest: " + std::string(e.what()));
    }
    std::vector<std::string> args;
    try {
        args = doc.at("args").get<std::vector<std::string>>();
        if (!doc.at("master_seed").is_null()) {
            args.push_back("--seed");
            args.push_back(std::to_string(doc.at("master_seed").get<uint64_t>()));
        }
    } catch (const nlohmann::json::exception &e) {
        throw RuntimeFailure("malformed manifest: " + std::string(e.what()));
    }

    bool inputs_ok = true;
    for (const auto &input : doc.value("inputs", ordered_json::array())) {
        const std::string path = input.at("path").get<std::string>();
        if (sha256_hex(read_file(path)) != input.at("sha256").get<std::string>()) {
            err << "input " << path << " changed since the recorded run\n";
            inputs_ok = false;
        }
    }

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("lmn-replay-" + sha256_hex(read_file(manifest_path)).substr(0, 16) +
                                                      "-" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    std::vector<std::pair<ordered_json, std::string>> fresh;
    int index = 0;
    for (const auto &output : doc.at("outputs")) {
        const std::string path = (dir / ("output" + std::to_string(index++))).string();
        args.push_back(output.at("flag").get<std::string>());
        args.push_back(path);
        fresh.emplace_back(output, path);
    }
    args.push_back("--manifest");
    args.push_back((dir / "manifest.json").string());

    std::ostringstream quiet;
    const int status = run(args, quiet, err);
    ordered_json report;
    report["command"] = doc.value("command", "");
    report["status"] = status;
    bool all_match = inputs_ok && status == 0;
    ordered_json outputs = ordered_json::array();
    for (const auto &[recorded, path] : fresh) {
        std::string actual;
        if (fs::exists(path)) {
            actual = sha256_hex(read_file(path));
        }
        const std::string expected = recorded.at("sha256").get<std::string>();
        const bool match = actual == expected;
        all_match = all_match && match;
        outputs.push_back({{"flag", recorded.at("flag")}, {"expected", expected}, {"actual", actual}, {"match", match}});
    }
    report["outputs"] = outputs;
    report["match"] = all_match;
    out << report.dump(2) << "\n";
    std::error_code ec;
    fs::remove_all(dir, ec);
    return all_match ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Lattice bit-flip correction toolkit", "lmn"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(lmn_version()));

    Common common;
    RunRecord record;
    std::function<int()> action;

    SweepOptions sweep_opt;
    auto *sweep = app.add_subcommand("sweep", "Monte Carlo agreement sweep, CSV output");
    sweep_opt.attach(sweep, true);
    attach_seed(sweep, common);
    attach_output(sweep, common);
    sweep->callback([&] { action = [&] { return cmd_sweep(sweep_opt, common, record, out, err); }; });

    SweepOptions inline_opt;
    ThresholdOptions threshold_opt;
    auto *threshold = app.add_subcommand("threshold", "threshold and small-eps law from a sweep, JSON output");
    threshold->add_option("--in", threshold_opt.in, "sweep CSV");
    inline_opt.attach(threshold, false);
    threshold->add_option("--fit-eps-max", threshold_opt.fit_eps_max, "upper end of the small-eps fit")
        ->capture_default_str();
    threshold->add_option("--pinf-out", threshold_opt.pinf_out, "write the extrapolated P_inf table");
    attach_seed(threshold, common);
    attach_output(threshold, common);
    threshold->callback(
        [&] { action = [&] { return cmd_threshold(inline_opt, threshold_opt, common, record, out, err); }; });

    ResourceOptions resource_opt;
    auto *resources = app.add_subcommand("resources", "code size and tolerable error rate, CSV output");
    resources->add_option("--E", resource_opt.targets, "target entanglement list")->capture_default_str();
    resources->add_option("--N", resource_opt.sizes, "network size list")->capture_default_str();
    resources->add_option("--pinf", resource_opt.pinf, "table.json or quadratic:C")->required();
    resources->add_option("--t-max", resource_opt.t_max, "largest code parameter tried")->capture_default_str();
    resources->add_option("--mode", resource_opt.mode, "exact | leading | survival")->capture_default_str();
    attach_output(resources, common);
    resources->callback([&] { action = [&] { return cmd_resources(resource_opt, common, record, out, err); }; });

    lmn_noise_params noise{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3};
    auto *budget = app.add_subcommand("budget", "physical error budget, JSON output");
    budget->add_option("--beta", noise.beta, "two-qubit gate error");
    budget->add_option("--delta", noise.delta, "measurement error");
    budget->add_option("--mu", noise.mu, "memory error");
    budget->add_option("--gamma", noise.gamma, "memory decay rate");
    budget->add_option("--T0", noise.T0, "storage window");
    budget->add_option("--m", noise.m, "parity-check repetitions")->capture_default_str();
    budget->add_option("--eps-b", noise.eps_b, "channel flip rate");
    budget->add_option("--eps-c", noise.eps_c, "check readout error");
    attach_output(budget, common);
    budget->callback([&] { action = [&] { return cmd_budget(noise, common, record, out); }; });

    PercolationOptions perc_opt;
    auto *perc = app.add_subcommand("percolation", "pure-state link bounds, JSON output");
    perc->add_option("--eps-star", perc_opt.eps_star, "decoding threshold")->capture_default_str();
    perc->add_option("--p-star", perc_opt.p_star, "bond percolation threshold")->capture_default_str();
    perc->add_option("--simulate", perc_opt.simulate, "N,p,trials crossing estimate");
    perc->add_option("--knots", perc_opt.knots, "points on the flip-rate curve")->capture_default_str();
    perc->add_option("--workers", perc_opt.workers, "worker threads")->capture_default_str();
    attach_seed(perc, common);
    attach_output(perc, common);
    perc->callback([&] { action = [&] { return cmd_percolation(perc_opt, common, record, out); }; });

    DecodeOptions decode_opt;
    auto *decode = app.add_subcommand("decode-one", "decode one instance, text dump");
    decode->add_option("--lattice", decode_opt.lattice, "lattice kind")->capture_default_str();
    decode->add_option("--N", decode_opt.n, "sites per side")->required();
    decode->add_option("--eps", decode_opt.eps, "flip rate for sampled errors");
    decode->add_option("--errors", decode_opt.errors, "comma list of edge indices");
    decode->add_option("--trial", decode_opt.trial, "trial index of the sampled instance")->capture_default_str();
    attach_seed(decode, common);
    attach_output(decode, common);
    decode->callback([&] { action = [&] { return cmd_decode_one(decode_opt, common, record, out); }; });

    std::string replay_manifest;
    auto *replay = app.add_subcommand("replay", "re-run a manifest and compare output digests");
    replay->add_option("manifest", replay_manifest, "manifest file")->required();
    replay->callback([&] { action = [&] { return cmd_replay(replay_manifest, out, err); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return 2;
    }

    for (CLI::App *sub : app.get_subcommands()) {
        record.command = sub->get_name();
    }
    std::vector<std::string> tail(args.begin() + 1, args.end());
    record.args = normalize_args(tail);
    record.args.insert(record.args.begin(), record.command);
    try {
        return action();
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const RuntimeFailure &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace lmn_cli
