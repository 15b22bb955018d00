// Copyright 2026 The bosonlab Authors
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

// Batch experiment driver. Every subcommand writes <out>/<experiment>.csv and
// <out>/<experiment>.json; the CSV depends only on the configuration.
// Exit codes: 0 ok, 1 invariant violated, 2 usage or contract error,
// 3 capacity guard.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bosonlab/bosonlab.hpp"

namespace {

using namespace bosonlab;

constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;

struct Common {
    std::string out = ".";
    unsigned workers = 1;
    uint64_t seed = 1;
    bool long_run = false;

    Json json() const { return Json{{"out", out}, {"workers", workers}, {"seed", seed}, {"long_run", long_run}}; }
};

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

int parse_int(const std::string &s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw ContractViolation("not an integer: '" + s + "'");
    }
    return v;
}

double parse_double(const std::string &s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw ContractViolation("not a number: '" + s + "'");
    }
    return v;
}

/// "a:b" (inclusive), "a,b,c" or "a".
std::vector<int> parse_int_list(const std::string &text) {
    std::vector<int> out;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        const int lo = parse_int(text.substr(0, colon));
        const int hi = parse_int(text.substr(colon + 1));
        if (hi < lo) {
            throw ContractViolation("empty range '" + text + "'");
        }
        for (int v = lo; v <= hi; ++v) {
            out.push_back(v);
        }
        return out;
    }
    for (const auto &part : split(text, ',')) {
        out.push_back(parse_int(part));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string &text) {
    std::vector<double> out;
    for (const auto &part : split(text, ',')) {
        out.push_back(parse_double(part));
    }
    return out;
}

OutcomePattern parse_pattern(const std::string &text) {
    auto occ = parse_int_list(text);
    for (int v : occ) {
        if (v < 0) {
            throw ContractViolation("pattern entries must be >= 0: '" + text + "'");
        }
    }
    return OutcomePattern(std::move(occ));
}

/// Rows joined by ';', entries by ' '.
std::string matrix_cell(const IntegerMatrix &m) {
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += r ? ";" : "";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out += (c ? " " : "") + m(r, c).str();
        }
    }
    return out;
}

std::string path_cell(const PathReal &v) { return v.str(std::numeric_limits<PathReal>::digits10); }

int emit(const Common &common, const ExperimentReport &report, const Stopwatch &clock, bool violated) {
    namespace fs = std::filesystem;
    const fs::path dir(common.out);
    fs::create_directories(dir);
    const fs::path csv = dir / (report.experiment() + ".csv");
    const fs::path json = dir / (report.experiment() + ".json");
    {
        std::ofstream f(csv, std::ios::binary);
        report.write_csv(f);
    }
    {
        std::ofstream f(json, std::ios::binary);
        f << report.to_json(clock.seconds()).dump(2) << "\n";
    }
    std::cout << report.experiment() << ": " << report.rows().size() << " rows -> " << csv.string() << ", "
              << json.string() << (violated ? " (INVARIANT VIOLATED)" : "") << "\n";
    return violated ? kExitInvariant : 0;
}

Json box_json(const BoxSummary &b) {
    return Json{{"count", b.count},         {"min", json_number(b.min)}, {"q1", json_number(b.q1)},
                {"median", json_number(b.median)}, {"q3", json_number(b.q3)},   {"max", json_number(b.max)}};
}

// ---------------------------------------------------------------------------

struct AnticoncentrationArgs {
    double alpha = 2.0;
    std::string n = "4:16";
    int units = 20;
    int outcomes = 20;
};

int run_anticoncentration(const Common &common, const AnticoncentrationArgs &a) {
    const Stopwatch clock;
    AnticoncentrationConfig cfg;
    cfg.n_values = parse_int_list(a.n);
    cfg.alpha = a.alpha;
    cfg.units = a.units;
    cfg.outcomes_per_unit = a.outcomes;
    cfg.seed = common.seed;
    cfg.long_run = common.long_run;
    cfg.partitions = common.workers;
    Json jc = common.json();
    jc.update(Json{{"alpha", a.alpha}, {"n", a.n}, {"units", a.units}, {"outcomes", a.outcomes}});
    ExperimentReport rep("anticoncentration", "ln p_U(S) + ln|S_{m,n}|, p_U(S) = |Per(U_S)|^2 / prod s_i!, m = ceil(alpha n)", jc);
    const auto res = anticoncentration_experiment(cfg);
    rep.set_columns({"n", "m", "unit", "outcome", "outcome_rank", "clicks", "ln_p", "ln_dim", "ln_p_plus_ln_dim"});
    for (const auto &s : res.samples) {
        rep.row() << s.n << s.m << s.unit_index << s.outcome_index << s.outcome_rank.str() << s.clicks << s.log_prob
                  << s.log_dim << (s.log_prob + s.log_dim);
    }
    Json levels = Json::array();
    for (const auto &l : res.levels) {
        levels.push_back(Json{{"n", l.n}, {"m", l.m}, {"ln_dim", l.log_dim}, {"samples", l.samples},
                              {"zeros", l.zero_count}, {"ln_p", box_json(l.raw)}, {"shifted", box_json(l.shifted)},
                              {"fraction_far_below", l.fraction_far_below}});
    }
    rep.summary()["levels"] = levels;
    return emit(common, rep, clock, false);
}

struct ClicksArgs {
    int m = 42;
    int n = 20;
    double t = 0.25;
    long trials = 100000;
};

int run_clicks(const Common &common, const ClicksArgs &a) {
    const Stopwatch clock;
    Json jc = common.json();
    jc.update(Json{{"m", a.m}, {"n", a.n}, {"t", a.t}, {"trials", a.trials}});
    ExperimentReport rep("clicks", "Pr(c) = C(m,c) C(n-1,c-1) / C(m+n-1,n); Pr(|c - center| >= t n) <= 2 exp(-2 t^2 n)", jc);
    if (a.m < 1 || a.n < 1) {
        throw ContractViolation("clicks: need m, n >= 1");
    }
    Rng rng = make_stream(common.seed, 0);
    const auto conc = click_concentration_check(a.m, a.n, a.t, a.trials, rng);
    // Histogram from a second, independent stream so the tail test above is untouched.
    Rng hist_rng = make_stream(common.seed, 1);
    const UniformOutcomeSampler sampler(a.m, a.n);
    std::vector<long> hist(static_cast<std::size_t>(std::min(a.m, a.n)) + 1, 0);
    for (long i = 0; i < a.trials; ++i) {
        ++hist[static_cast<std::size_t>(click_stats(sampler(hist_rng)).clicks)];
    }
    rep.set_columns({"c", "count", "pmf_exact", "pmf", "empirical"});
    BigRational total = 0;
    for (int c = 1; c <= std::min(a.m, a.n); ++c) {
        const BigRational p = click_pmf_exact(a.m, a.n, c);
        total += p;
        rep.row() << c << click_count(a.m, a.n, c).str() << p.str() << p.convert_to<double>()
                  << static_cast<double>(hist[static_cast<std::size_t>(c)]) / static_cast<double>(a.trials);
    }
    auto &s = rep.summary();
    s["dim"] = dim_fock(a.m, a.n).str();
    s["pmf_sums_to_one"] = total == 1;
    s["center"] = conc.center;
    s["hypergeometric_mean"] = conc.hypergeometric_mean;
    s["tail_empirical"] = conc.empirical;
    s["tail_exact"] = conc.exact_tail;
    s["tail_standard_error"] = conc.standard_error;
    s["tail_bound"] = conc.bound;
    const bool ok = total == 1 && conc.empirical <= conc.bound + 4 * std::max(conc.standard_error, 1.0 / a.trials);
    return emit(common, rep, clock, !ok);
}

struct SvTailArgs {
    int m = 6;
    int n = 1;
    std::string deltas = "0.3,0.1,0.05";
    long trials = 100000;
};

int run_svtail(const Common &common, const SvTailArgs &a) {
    const Stopwatch clock;
    Json jc = common.json();
    jc.update(Json{{"m", a.m}, {"n", a.n}, {"deltas", a.deltas}, {"trials", a.trials}});
    ExperimentReport rep(
        "svtail", "Pr(sigma_max >= 1 - delta) vs 2^{5m+n+1} delta^{2m-4n}; n = 1: (2 delta - delta^2)^{m-1}", jc);
    const auto r = max_sv_tail_experiment(a.m, a.n, parse_double_list(a.deltas), a.trials, common.seed);
    rep.set_columns({"delta", "hits", "empirical", "sigma", "closed_form", "log10_bound", "bound"});
    for (const auto &row : r.rows) {
        rep.row() << row.delta << row.hits << row.empirical << row.sigma << row.closed_form << row.log10_bound
                  << row.bound;
    }
    rep.summary()["monotone"] = r.monotone;
    rep.summary()["consistent"] = r.consistent;
    return emit(common, rep, clock, !(r.monotone && r.consistent));
}

struct SphereArgs {
    std::string dims = "2:12";
    std::string k = "1:2";
    std::string deltas = "0.1,0.3,0.6";
    long trials = 100000;
};

int run_sphere(const Common &common, const SphereArgs &a) {
    const Stopwatch clock;
    Json jc = common.json();
    jc.update(Json{{"dims", a.dims}, {"k", a.k}, {"deltas", a.deltas}, {"trials", a.trials}});
    ExperimentReport rep("sphere",
                         "Pr(x_1^2 + ... + x_k^2 <= delta^2) <= 2^{dim/2} delta^k; "
                         "cap area >= omega_{dim-1} 2^{-dim/2-1/2} delta^{dim-1}",
                         jc);
    rep.set_columns({"dim", "k", "delta", "coord_empirical", "coord_exact", "coord_sigma", "coord_bound",
                     "coord_literal_empirical", "coord_literal_exact", "cap_fraction_empirical", "cap_fraction_exact",
                     "cap_area_empirical", "cap_area_sigma", "cap_area_lower_bound"});
    bool ok = true;
    long cases = 0;
    for (int dim : parse_int_list(a.dims)) {
        for (int k : parse_int_list(a.k)) {
            if (k > dim) {
                continue;
            }
            for (double delta : parse_double_list(a.deltas)) {
                const auto r = sphere_lemma_experiments(dim, k, delta, a.trials, common.seed);
                rep.row() << dim << k << delta << r.coord_empirical << r.coord_exact << r.coord_sigma << r.coord_bound
                          << r.coord_literal_empirical << r.coord_literal_exact << r.cap_fraction_empirical
                          << r.cap_fraction_exact << r.cap_area_empirical << r.cap_area_sigma << r.cap_area_lower_bound;
                ok = ok && r.coord_empirical <= r.coord_bound + 4 * r.coord_sigma &&
                     r.cap_area_empirical + 4 * r.cap_area_sigma >= r.cap_area_lower_bound;
                ++cases;
            }
        }
    }
    rep.summary()["cases"] = cases;
    rep.summary()["bounds_hold"] = ok;
    return emit(common, rep, clock, !ok);
}

struct EmbedArgs {
    int n = 8;
    int m = 0;  // 0 selects 2n
    long trials = 100;
    bool gbs = false;
};

int run_embed_verify(const Common &common, const EmbedArgs &a) {
    const Stopwatch clock;
    const int m = a.m == 0 ? 2 * a.n : a.m;
    Json jc = common.json();
    jc.update(Json{{"n", a.n}, {"m", a.m}, {"trials", a.trials}, {"gbs", a.gbs}});
    ExperimentReport rep(a.gbs ? "embed-verify-gbs" : "embed-verify",
                         a.gbs ? "Per(A_{S,T}) = Per(X) prod s_i! prod t_i!" : "Per(A_S) = Per(X) prod s_i!", jc);
    if (a.n < 1 || a.n > 12) {
        throw CapacityError("embed-verify: n must lie in [1, 12]");
    }
    Rng rng = make_stream(common.seed, 0);
    long held = 0;
    if (a.gbs) {
        rep.set_columns({"trial", "s", "t", "k_s", "k_t", "x", "a", "per_a_st", "per_x", "multiplicity", "holds"});
        for (long i = 0; i < a.trials; ++i) {
            const auto spec = random_gbs_embedding(m, a.n, rng);
            const auto chk = verify_embedding_identity(spec);
            held += chk.holds;
            rep.row() << i << spec.s.to_string() << spec.t.to_string() << spec.k_s << spec.k_t << matrix_cell(spec.base)
                      << matrix_cell(spec.a) << chk.per_a_s.str() << chk.per_base.str() << chk.multiplicity.str()
                      << static_cast<int>(chk.holds);
        }
    } else {
        rep.set_columns({"trial", "s", "x", "a", "per_a_s", "per_x", "multiplicity", "holds"});
        for (long i = 0; i < a.trials; ++i) {
            const auto spec = random_embedding(m, a.n, rng);
            const auto chk = verify_embedding_identity(spec);
            held += chk.holds;
            rep.row() << i << spec.pattern.to_string() << matrix_cell(spec.base) << matrix_cell(spec.a)
                      << chk.per_a_s.str() << chk.per_base.str() << chk.multiplicity.str() << static_cast<int>(chk.holds);
        }
    }
    rep.summary()["held"] = held;
    rep.summary()["trials"] = a.trials;
    return emit(common, rep, clock, held != a.trials);
}

struct InterpolateArgs {
    std::string degrees = "2,4,6";
    std::string deltas = "0.5,0.25,0.1";
    double noise = 1e-6;
    int repetitions = 8;
    std::size_t points = 0;
};

int run_interpolate(const Common &common, const InterpolateArgs &a) {
    const Stopwatch clock;
    Json jc = common.json();
    jc.update(Json{{"degrees", a.degrees}, {"deltas", a.deltas}, {"noise", a.noise}, {"repetitions", a.repetitions},
                   {"points", a.points}});
    ExperimentReport rep("interpolate", "gain of a degree-d least-squares fit on [0, delta] evaluated at 1 vs (1/delta)^d", jc);
    const auto r =
        blowup_scaling_experiment(parse_int_list(a.degrees), parse_double_list(a.deltas), common.seed, a.noise, a.repetitions, a.points);
    rep.set_columns({"degree", "delta", "points", "amplification_l1", "amplification_l2", "empirical", "reference",
                     "ratio", "chebyshev", "calibrated"});
    for (const auto &row : r.rows) {
        rep.row() << row.degree << row.delta << row.points << row.amplification << row.amplification_l2 << row.empirical
                  << row.reference << row.ratio << row.chebyshev << row.calibrated;
    }
    auto &s = rep.summary();
    s["c_per_degree"] = r.c_per_degree;
    s["c0"] = r.c0;
    s["max_log_residual"] = r.max_log_residual;
    Json slopes = Json::array();
    for (const auto &[slope, log_inv_delta] : r.slopes) {
        slopes.push_back(Json{{"slope", slope}, {"ln_inv_delta", log_inv_delta}});
    }
    s["slopes"] = slopes;
    return emit(common, rep, clock, false);
}

struct SmuggleArgs {
    int n = 3;
    int m = 0;  // 0 selects 2n
    double delta = 0.0;
    std::size_t points = 0;
    double noise = 0.0;
};

int run_smuggle(const Common &common, const SmuggleArgs &a) {
    const Stopwatch clock;
    Json jc = common.json();
    jc.update(Json{{"n", a.n}, {"m", a.m}, {"delta", a.delta}, {"points", a.points}, {"noise", a.noise}});
    ExperimentReport rep(
        "smuggle", "|Per(B_t)|^2 is a degree-2n polynomial with B_0 = sqrt(m) U_S, B_1 = A_S; extrapolate from [0, delta]", jc);
    const auto r = end_to_end_smuggle_demo(a.n, a.m == 0 ? 2 * a.n : a.m, common.seed,
                                           SmuggleDemoOptions{a.delta, a.points, a.noise, common.workers});
    rep.set_columns({"t", "y"});
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        rep.row() << path_cell(r.t[i]) << path_cell(r.y[i]);
    }
    auto &s = rep.summary();
    s["pattern"] = r.pattern.to_string();
    s["x"] = matrix_cell(r.base);
    s["base_redraws"] = r.base_redraws;
    s["delta"] = r.delta;
    s["points"] = r.points;
    s["per_a_s"] = r.per_a_s.str();
    s["truth"] = path_cell(r.truth);
    s["estimate"] = path_cell(r.estimate);
    s["relative_error"] = json_number(r.relative_error);
    s["amplification"] = json_number(r.amplification);
    s["envelope"] = json_number(r.envelope);
    s["exact_recovery"] = r.exact_recovery;
    s["b0_mean_abs2"] = r.b0_mean_abs2;
    const bool ok = a.noise == 0.0 ? r.exact_recovery : static_cast<double>(abs(r.estimate - r.truth)) <= r.envelope;
    return emit(common, rep, clock, !ok);
}

struct GbsArgs {
    int m = 10;
    int n = 2;
    double r = 0.65;
    long trials = 10000;
    int draws = 10;
    std::string s;
    std::string t;
};

int run_gbs_pmf(const Common &common, const GbsArgs &a) {
    const Stopwatch clock;
    Json jc = common.json();
    jc.update(Json{{"m", a.m}, {"r", a.r}});
    ExperimentReport rep("gbs-pmf", "P(n) = C(n+m-1, n) tanh(r)^{2n} / cosh(r)^{2m}", jc);
    const auto st = photon_stats(a.m, a.r);
    rep.set_columns({"n", "pmf", "ln_pmf"});
    for (int n = 0; n <= st.truncation; ++n) {
        rep.row() << n << photon_number_pmf(a.m, a.r, n) << photon_number_log_pmf(a.m, a.r, n);
    }
    auto &s = rep.summary();
    s["truncation"] = st.truncation;
    s["mass"] = st.mass;
    s["mean"] = st.mean;
    s["mean_formula"] = st.mean_formula;
    s["variance"] = st.variance;
    s["variance_formula"] = st.variance_formula;
    s["variance_alternative"] = json_number(st.variance_alternative);
    s["mode"] = st.mode;
    s["mode_formula"] = st.mode_formula;
    s["mode_alternative"] = st.mode_alternative;
    s["p_mode"] = st.p_mode;
    s["p_mode_sqrt_m"] = st.p_mode_sqrt_m;
    const bool ok = std::abs(st.mass - 1.0) <= 1e-11 &&
                    std::abs(st.mean - st.mean_formula) <= 1e-10 * std::max(1.0, st.mean_formula);
    return emit(common, rep, clock, !ok);
}

int run_gbs_normalize(const Common &common, const GbsArgs &a) {
    const Stopwatch clock;
    Json jc = common.json();
    jc.update(Json{{"m", a.m}, {"n", a.n}, {"draws", a.draws}});
    ExperimentReport rep("gbs-normalize", "sum_{S,T} |Per(U_{S,T})|^2 / (|S_{m,n}| prod s_i! prod t_j!) = 1", jc);
    require_full_distribution_size(a.m, a.n);
    rep.set_columns({"draw", "total", "deviation"});
    double worst = 0.0;
    for (int k = 0; k < a.draws; ++k) {
        const double total = postselected_total(haar_unitary(a.m, common.seed, static_cast<uint64_t>(k)).unitary, a.n);
        worst = std::max(worst, std::abs(total - 1.0));
        rep.row() << k << total << (total - 1.0);
    }
    rep.summary()["max_deviation"] = worst;
    return emit(common, rep, clock, worst > 1e-8);
}

int run_gbs_feasibility(const Common &common, const GbsArgs &a) {
    const Stopwatch clock;
    Json jc = common.json();
    jc.update(Json{{"m", a.m}, {"n", a.n}, {"trials", a.trials}});
    ExperimentReport rep("gbs-feasibility", "k_T <= n/3 <= nc_S and k_S <= n/3 <= nc_T for independent uniform S, T", jc);
    const auto r = gbs_pattern_feasibility_experiment(a.m, a.n, a.trials, common.seed);
    rep.set_columns({"m", "n", "trials", "hits", "frequency", "sigma", "exact"});
    rep.row() << r.m << r.n << r.trials << r.hits << r.frequency << r.sigma << r.exact;
    rep.summary()["in_regime"] = r.in_regime;
    if (!r.in_regime) {
        std::cerr << "warning: m < 2.1 n lies outside the intended regime\n";
    }
    return emit(common, rep, clock, false);
}

int run_gbs_probability(const Common &common, const GbsArgs &a) {
    const Stopwatch clock;
    Json jc = common.json();
    jc.update(Json{{"m", a.m}, {"r", a.r}, {"s", a.s}, {"t", a.t}});
    ExperimentReport rep("gbs-probability",
                         "q(S,T) = |Per(C_{S,T})|^2 / (cosh(r)^{2m} prod s_i! prod t_j!), C = tanh(r) U", jc);
    const OutcomePattern s = parse_pattern(a.s);
    const OutcomePattern t = parse_pattern(a.t);
    if (s.photons() != t.photons()) {
        throw ContractViolation("gbs probability: S and T carry different photon numbers");
    }
    const auto cfg = make_gbs_config(a.m, a.r, haar_unitary(a.m, common.seed, 0).unitary);
    const double q = gbs_unpostselected_probability(cfg, s, t);
    const double p = postselected_probability(cfg.u, s, t);
    rep.set_columns({"s", "t", "n", "q", "p_postselected", "photon_number_pmf"});
    rep.row() << s.to_string() << t.to_string() << s.photons() << q << p << photon_number_pmf(a.m, a.r, s.photons());
    return emit(common, rep, clock, !(q >= 0.0 && p >= 0.0));
}

struct SampleArgs {
    int m = 4;
    int n = 2;
    long samples = 1000;
};

int run_sample(const Common &common, const SampleArgs &a) {
    const Stopwatch clock;
    Json jc = common.json();
    jc.update(Json{{"m", a.m}, {"n", a.n}, {"samples", a.samples}});
    ExperimentReport rep("sample", "exact sampling from p_U(S) = |Per(U_S)|^2 / prod s_i!", jc);
    const auto sampler = exact_sampler(haar_unitary(a.m, common.seed, 0).unitary, a.n);
    const auto &dist = sampler.distribution();
    Rng rng = make_stream(common.seed, 1);
    std::vector<long> counts(dist.outcomes.size(), 0);
    rep.set_columns({"index", "pattern", "rank", "probability"});
    for (long i = 0; i < a.samples; ++i) {
        const std::size_t k = sampler.sample_index(rng);
        ++counts[k];
        rep.row() << i << dist.outcomes[k].to_string() << rank_outcome(dist.outcomes[k]).str() << dist.probabilities[k];
    }
    const auto chi = chi_square_test(counts, dist.probabilities);
    rep.summary()["total_probability"] = dist.total();
    rep.summary()["chi_square"] = Json{{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}};
    return emit(common, rep, clock, std::abs(dist.total() - 1.0) > 1e-9);
}

int run_selftest(const Common &common) {
    const Stopwatch clock;
    ExperimentReport rep("selftest", "library self-consistency checks", common.json());
    rep.set_columns({"check", "value", "tolerance", "pass"});
    bool ok = true;
    auto record = [&](const std::string &name, double value, double tol) {
        const bool pass = value <= tol;
        ok = ok && pass;
        rep.row() << name << value << tol << static_cast<int>(pass);
    };

    Rng rng = make_stream(common.seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    double per_err = 0.0;
    for (int n = 1; n <= 7; ++n) {
        ComplexMatrix a(n, n);
        for (auto &v : a.reshaped()) {
            const double re = normal(rng);
            v = Complex(re, normal(rng));
        }
        per_err = std::max(per_err, std::abs(per_exact(a) - per_oracle(a)) / std::abs(per_oracle(a)));
    }
    record("ryser_vs_permutation_sum", per_err, 1e-10);

    const auto u = haar_unitary(6, common.seed, 1).unitary;
    record("unitarity", (u.adjoint() * u - ComplexMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-12);
    record("boson_sampling_normalization", std::abs(full_distribution(u, 3).total() - 1.0), 1e-9);
    record("gbs_normalization", std::abs(postselected_total(haar_unitary(3, common.seed, 2).unitary, 2) - 1.0), 1e-8);

    BigRational clicks = 0;
    for (int c = 1; c <= 5; ++c) {
        clicks += click_pmf_exact(9, 5, c);
    }
    record("click_pmf_mass", clicks == 1 ? 0.0 : 1.0, 0.0);

    long failures = 0;
    for (int k = 0; k < 50; ++k) {
        failures += !verify_embedding_identity(random_embedding(8, 6, rng)).holds;
        failures += !verify_embedding_identity(random_gbs_embedding(8, 6, rng)).holds;
    }
    record("embedding_identity_failures", static_cast<double>(failures), 0.0);

    const auto demo = end_to_end_smuggle_demo(2, 4, common.seed);
    record("smuggle_recovery", demo.relative_error, 1e-6);
    return emit(common, rep, clock, !ok);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"bosonlab: permanent-based boson sampling experiments"};
    app.set_version_flag("--version", std::string(bosonlab::kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    if (const char *env = std::getenv("BOSONLAB_OUT")) {
        common.out = env;
    }
    app.add_option("--out", common.out, "output directory (default: $BOSONLAB_OUT or .)");
    app.add_option("--workers", common.workers, "threads per permanent")->check(CLI::Range(1U, 256U));
    app.add_option("--seed", common.seed, "master seed");
    app.add_flag("--long-run", common.long_run, "allow n > 16 in anticoncentration");

    std::function<int()> action;

    AnticoncentrationArgs ac;
    auto *c_ac = app.add_subcommand("anticoncentration", "distribution of ln p_U(S) at m = alpha n");
    c_ac->add_option("--alpha", ac.alpha, "modes per photon")->capture_default_str();
    c_ac->add_option("--n", ac.n, "photon numbers, a:b or a,b,c")->capture_default_str();
    c_ac->add_option("--units", ac.units, "Haar unitaries per n")->capture_default_str();
    c_ac->add_option("--outcomes", ac.outcomes, "uniform outcomes per n")->capture_default_str();
    c_ac->callback([&] { action = [&] { return run_anticoncentration(common, ac); }; });

    ClicksArgs cl;
    auto *c_cl = app.add_subcommand("clicks", "click-number law and concentration");
    c_cl->add_option("--m", cl.m)->capture_default_str();
    c_cl->add_option("--n", cl.n)->capture_default_str();
    c_cl->add_option("--t", cl.t, "tail radius as a fraction of n")->capture_default_str();
    c_cl->add_option("--trials", cl.trials)->capture_default_str()->check(CLI::PositiveNumber);
    c_cl->callback([&] { action = [&] { return run_clicks(common, cl); }; });

    SvTailArgs sv;
    auto *c_sv = app.add_subcommand("svtail", "tail of the largest singular value of a truncated Haar unitary");
    c_sv->add_option("--m", sv.m)->capture_default_str();
    c_sv->add_option("--n", sv.n)->capture_default_str();
    c_sv->add_option("--deltas", sv.deltas)->capture_default_str();
    c_sv->add_option("--trials", sv.trials)->capture_default_str()->check(CLI::PositiveNumber);
    c_sv->callback([&] { action = [&] { return run_svtail(common, sv); }; });

    SphereArgs sp;
    auto *c_sp = app.add_subcommand("sphere", "coordinate-ball and cap bounds on the unit sphere");
    c_sp->add_option("--dims", sp.dims, "real dimensions")->capture_default_str();
    c_sp->add_option("--k", sp.k, "number of leading coordinates")->capture_default_str();
    c_sp->add_option("--deltas", sp.deltas)->capture_default_str();
    c_sp->add_option("--trials", sp.trials)->capture_default_str()->check(CLI::PositiveNumber);
    c_sp->callback([&] { action = [&] { return run_sphere(common, sp); }; });

    EmbedArgs em;
    auto *c_em = app.add_subcommand("embed-verify", "exact check of the repeated-row embedding identity");
    c_em->add_option("--n", em.n)->capture_default_str();
    c_em->add_option("--m", em.m, "modes (0 selects 2n)")->capture_default_str();
    c_em->add_option("--trials", em.trials)->capture_default_str()->check(CLI::NonNegativeNumber);
    c_em->add_flag("--gbs", em.gbs, "two-sided row and column variant");
    c_em->callback([&] { action = [&] { return run_embed_verify(common, em); }; });

    InterpolateArgs ip;
    auto *c_ip = app.add_subcommand("interpolate", "noise amplification of polynomial extrapolation");
    c_ip->add_option("--degrees", ip.degrees)->capture_default_str();
    c_ip->add_option("--deltas", ip.deltas)->capture_default_str();
    c_ip->add_option("--noise", ip.noise)->capture_default_str();
    c_ip->add_option("--repetitions", ip.repetitions)->capture_default_str()->check(CLI::PositiveNumber);
    c_ip->add_option("--points", ip.points, "nodes per fit (0 selects 100 d^2)")->capture_default_str();
    c_ip->callback([&] { action = [&] { return run_interpolate(common, ip); }; });

    SmuggleArgs sm;
    auto *c_sm = app.add_subcommand("smuggle", "recover Per(A_S)^2 by extrapolating along a matrix path");
    c_sm->add_option("--n", sm.n)->capture_default_str();
    c_sm->add_option("--m", sm.m, "modes (0 selects 2n)")->capture_default_str();
    c_sm->add_option("--delta", sm.delta, "sampled interval [0, delta] (0 selects 1/(4n^2))")->capture_default_str();
    c_sm->add_option("--points", sm.points, "nodes (0 selects 400 n^2)")->capture_default_str();
    c_sm->add_option("--noise", sm.noise, "uniform per-node noise amplitude")->capture_default_str();
    c_sm->callback([&] { action = [&] { return run_smuggle(common, sm); }; });

    GbsArgs gb;
    auto *c_gbs = app.add_subcommand("gbs", "Gaussian boson sampling model");
    c_gbs->require_subcommand(1);
    c_gbs->fallthrough();
    auto *g_pmf = c_gbs->add_subcommand("pmf", "photon-number distribution");
    g_pmf->add_option("--m", gb.m)->capture_default_str();
    g_pmf->add_option("--r", gb.r, "squeezing parameter")->capture_default_str();
    g_pmf->callback([&] { action = [&] { return run_gbs_pmf(common, gb); }; });
    auto *g_norm = c_gbs->add_subcommand("normalize", "postselected double-sum normalization");
    g_norm->add_option("--m", gb.m)->capture_default_str();
    g_norm->add_option("--n", gb.n)->capture_default_str();
    g_norm->add_option("--draws", gb.draws)->capture_default_str()->check(CLI::PositiveNumber);
    g_norm->callback([&] { action = [&] { return run_gbs_normalize(common, gb); }; });
    auto *g_feas = c_gbs->add_subcommand("feasibility", "frequency of the pattern conditions");
    g_feas->add_option("--m", gb.m)->capture_default_str();
    g_feas->add_option("--n", gb.n)->capture_default_str();
    g_feas->add_option("--trials", gb.trials)->capture_default_str()->check(CLI::PositiveNumber);
    g_feas->callback([&] { action = [&] { return run_gbs_feasibility(common, gb); }; });
    auto *g_prob = c_gbs->add_subcommand("probability", "q(S,T) and p_U(S,T) for one pair");
    g_prob->add_option("--m", gb.m)->capture_default_str();
    g_prob->add_option("--r", gb.r)->capture_default_str();
    g_prob->add_option("--S", gb.s, "output pattern, e.g. 1,1,0")->required();
    g_prob->add_option("--T", gb.t, "input pattern")->required();
    g_prob->callback([&] { action = [&] { return run_gbs_probability(common, gb); }; });

    SampleArgs sa;
    auto *c_sa = app.add_subcommand("sample", "exact boson sampling by enumeration");
    c_sa->add_option("--m", sa.m)->capture_default_str();
    c_sa->add_option("--n", sa.n)->capture_default_str();
    c_sa->add_option("--samples", sa.samples)->capture_default_str()->check(CLI::PositiveNumber);
    c_sa->callback([&] { action = [&] { return run_sample(common, sa); }; });

    auto *c_st = app.add_subcommand("selftest", "quick library consistency checks");
    c_st->callback([&] { action = [&] { return run_selftest(common); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        return action();
    } catch (const CapacityError &e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const ContractViolation &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
