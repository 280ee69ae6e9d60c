#pragma once

// Configuration-driven check runner behind the CLI: named residual suites over
// seeded random samples or grids, JSON reports, CSV tables. Identical configs
// produce byte-identical output. Random points use std::mt19937_64 with the
// explicit mapping u = (x >> 11) * 2^-53, value = lo + (hi - lo) * u, one draw
// per coordinate in chart order per point (documented in the README).

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <mutex>
#include <thread>
#include <vector>

#include <json.hpp>

#include "nullframe/catalog.hpp"
#include "nullframe/curvature.hpp"
#include "nullframe/maxwell.hpp"
#include "nullframe/petrov.hpp"

namespace nullframe {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct RunConfig {
    int schema_version = 1;
    // scenario selection: catalog name + params, or inline definition
    std::string scenario;
    std::map<std::string, double> params;
    std::string c_expr;  // fefferman_of parameter
    ordered_json inline_def;  // empty when a catalog scenario is used

    std::vector<std::string> checks;
    std::string mode = "random";  // "random" | "grid"
    int count = 20;
    std::vector<int> shape;  // grid mode: points per coordinate
    std::uint64_t seed = 1;
    std::optional<std::vector<std::pair<double, double>>> domain;
    std::map<std::string, double> tolerances;
    std::string out_report;  // empty = stdout
    std::string out_csv;
};

inline RunConfig parse_config(const ordered_json& j) {
    RunConfig c;
    if (!j.is_object()) throw config_error("config: top level must be an object");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
        throw config_error("config: missing integer 'schema_version'");
    c.schema_version = j["schema_version"].get<int>();
    if (c.schema_version != 1) throw config_error("config: unsupported schema_version");

    const bool has_scenario = j.contains("scenario");
    const bool has_inline = j.contains("inline");
    if (has_scenario == has_inline)
        throw config_error("config: exactly one of 'scenario' or 'inline' is required");
    if (has_scenario) {
        const auto& s = j["scenario"];
        if (s.is_string()) {
            c.scenario = s.get<std::string>();
        } else if (s.is_object()) {
            if (!s.contains("name")) throw config_error("config: scenario.name missing");
            c.scenario = s["name"].get<std::string>();
            if (s.contains("params"))
                for (auto& [k, v] : s["params"].items()) {
                    if (k == "c") {
                        c.c_expr = v.get<std::string>();
                    } else {
                        if (!v.is_number()) throw config_error("config: scenario parameter '" + k + "' must be a number");
                        c.params[k] = v.get<double>();
                    }
                }
        } else {
            throw config_error("config: 'scenario' must be a string or object");
        }
    } else {
        c.inline_def = j["inline"];
    }

    if (j.contains("checks")) {
        if (!j["checks"].is_array()) throw config_error("config: 'checks' must be an array");
        for (auto& v : j["checks"]) c.checks.push_back(v.get<std::string>());
    }
    if (j.contains("sampling")) {
        const auto& s = j["sampling"];
        if (s.contains("mode")) c.mode = s["mode"].get<std::string>();
        if (c.mode != "random" && c.mode != "grid")
            throw config_error("config: sampling.mode must be 'random' or 'grid'");
        if (s.contains("count")) c.count = s["count"].get<int>();
        if (s.contains("shape"))
            for (auto& v : s["shape"]) c.shape.push_back(v.get<int>());
        if (s.contains("seed")) c.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("domain")) {
            std::vector<std::pair<double, double>> box;
            for (auto& v : s["domain"]) {
                if (!v.is_array() || v.size() != 2) throw config_error("config: domain entries are [lo, hi]");
                box.emplace_back(v[0].get<double>(), v[1].get<double>());
            }
            c.domain = box;
        }
    }
    if (j.contains("tolerances"))
        for (auto& [k, v] : j["tolerances"].items()) c.tolerances[k] = v.get<double>();
    if (j.contains("output")) {
        const auto& o = j["output"];
        if (o.contains("report")) c.out_report = o["report"].get<std::string>();
        if (o.contains("csv")) c.out_csv = o["csv"].get<std::string>();
    }
    return c;
}

// Inline scenario: chart plus expressions for lambda, mu and optionally a
// reduced lift (p, s, t, m, Lambda) or a general lift (P, W, H). Expressions
// for P, W, H live on the 4-chart (r appended); everything else on the 3-chart.
inline Scenario build_inline_scenario(const ordered_json& d) {
    Scenario sc;
    sc.name = "inline";
    if (!d.contains("chart") || !d["chart"].is_array() || d["chart"].size() != 3)
        throw config_error("inline: 'chart' must list the three base coordinates");
    Chart ch;
    for (auto& v : d["chart"]) ch.names.push_back(v.get<std::string>());
    auto form_from = [&](const char* key) {
        if (!d.contains(key) || !d[key].is_array() || d[key].size() != 3)
            throw config_error(std::string("inline: '") + key + "' must list three component expressions");
        FormField f = FormField::zero(3, 1);
        for (int a = 0; a < 3; ++a) f.comps[a] = expr_field(d[key][a].get<std::string>(), ch);
        return f;
    };
    CRStructure cr;
    cr.chart = ch;
    cr.lambda = form_from("lambda");
    cr.mu = form_from("mu");
    sc.cr = cr;
    sc.cr_normalized = d.value("normalized", false);
    sc.chart = ch;
    sc.domain.assign(3, {-1.0, 1.0});

    auto scalar3 = [&](const ordered_json& o, const char* key) {
        return expr_field(o[key].get<std::string>(), ch);
    };
    if (d.contains("lift")) {
        const auto& l = d["lift"];
        if (l.contains("P") || l.contains("W") || l.contains("H")) {
            Chart ch4 = ch.with_r();
            auto scalar4 = [&](const char* key) { return expr_field(l[key].get<std::string>(), ch4); };
            sc.coframe = lift_general(*sc.cr, scalar4("P"), scalar4("W"), scalar4("H"));
        } else {
            LiftParameters par;
            par.p = scalar3(l, "p");
            par.s = scalar3(l, "s");
            par.t = scalar3(l, "t");
            par.m = scalar3(l, "m");
            par.Lambda = l.value("Lambda", 0.0);
            sc.Lambda = par.Lambda;
            if (!sc.cr_normalized)
                throw config_error("inline: a reduced lift requires normalized CR data (set \"normalized\": true)");
            sc.lift_params = par;
            sc.coframe = lift_reduced(*sc.cr, par);
            sc.reduced_lift = true;
            sc.ricci_blocks_expected = "a";
        }
        sc.chart = sc.coframe->chart;
        sc.domain.push_back({-1.0, 1.0});
        sc.guard = [](std::span<const double>) { return true; };
    }
    return sc;
}

inline Scenario build_scenario(const RunConfig& c) {
    Scenario sc = c.inline_def.is_null() || c.inline_def.empty()
                      ? catalog_get(c.scenario, c.params, c.c_expr)
                      : build_inline_scenario(c.inline_def);
    if (c.domain) {
        if (c.domain->size() != sc.domain.size())
            throw config_error("config: domain must list one [lo, hi] per chart coordinate");
        sc.domain = *c.domain;
    }
    return sc;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

struct SampleStream {
    std::mt19937_64 eng;
    explicit SampleStream(std::uint64_t seed) : eng(seed) {}
    double uniform(double lo, double hi) {
        double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
};

inline std::vector<Point> sample_points(const Scenario& sc, const RunConfig& cfg, int want) {
    std::vector<Point> pts;
    const std::size_t dim = sc.domain.size();
    if (cfg.mode == "grid") {
        std::vector<int> shape = cfg.shape;
        if (shape.empty()) shape.assign(dim, 5);
        if (shape.size() != dim) throw config_error("config: sampling.shape must match the chart dimension");
        std::vector<Point> acc{Point{}};
        for (std::size_t i = 0; i < dim; ++i) {
            std::vector<Point> next;
            int n = shape[i];
            for (const Point& p : acc)
                for (int k = 0; k < n; ++k) {
                    Point q = p;
                    double lo = sc.domain[i].first, hi = sc.domain[i].second;
                    q.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
                    next.push_back(q);
                }
            acc = std::move(next);
        }
        return acc;
    }
    SampleStream s(cfg.seed);
    for (int k = 0; k < want; ++k) {
        Point p;
        for (std::size_t i = 0; i < dim; ++i) p.push_back(s.uniform(sc.domain[i].first, sc.domain[i].second));
        pts.push_back(p);
    }
    return pts;
}

inline int thread_budget(std::size_t npoints) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("NULLFRAME_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) n = v;
    }
    return std::min<int>(n, static_cast<int>(npoints) > 0 ? static_cast<int>(npoints) : 1);
}

// Evaluate fn(i) for i in [0, n), honoring NULLFRAME_THREADS. Numeric faults
// are recorded per index so singular points can be skipped and counted; any
// other exception (a configuration problem) is rethrown after the join.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         std::vector<bool>& ok) {
    ok.assign(n, true);
    int threads = thread_budget(n);
    std::exception_ptr fault;
    std::mutex fault_mutex;
    auto worker = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                fn(i);
            } catch (const numeric_error&) {
                ok[i] = false;
            } catch (...) {
                std::lock_guard<std::mutex> lock(fault_mutex);
                if (!fault) fault = std::current_exception();
                return;
            }
        }
    };
    if (threads <= 1 || n < 2) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (n + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
        for (int t = 0; t < threads; ++t) {
            std::size_t lo = static_cast<std::size_t>(t) * chunk;
            std::size_t hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    if (fault) std::rethrow_exception(fault);
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

struct Residual {
    std::string label;
    double abs = 0;
    double scale = 1;  // relative residual = abs / scale
};

struct Checkered {
    std::vector<Residual> rows;
    void add(std::string label, double abs, double scale = 1.0) {
        rows.push_back({std::move(label), abs, std::max(1.0, scale)});
    }
    void add(std::string label, cplx v, double scale = 1.0) { add(std::move(label), std::abs(v), scale); }
};

inline double default_tolerance(const std::string& check) {
    static const std::map<std::string, double> t = {
        {"structure_equations", 1e-10}, {"riemann_identities", 1e-9}, {"ricci_blocks", 1e-6},
        {"weyl_scalars", 1e-7},         {"classify", 1e-7},           {"optical_scalars", 1e-9},
        {"levi", 1e-10},                {"cr_identities", 1e-8},      {"maxwell", 1e-9},
        {"periodicity", 1e-12},         {"cartan", 1e-7},
    };
    auto it = t.find(check);
    if (it == t.end()) throw config_error("unknown check '" + check + "'");
    return it->second;
}

namespace checks_detail {

inline ScalarField seeded_field(std::uint64_t seed) {
    SampleStream s(seed);
    double c0r = s.uniform(-1, 1), c0i = s.uniform(-1, 1), c1 = s.uniform(-1, 1),
           c2 = s.uniform(-1, 1), c3 = s.uniform(-1, 1), c4 = s.uniform(-1, 1);
    return ScalarField([=](std::span<const double> pt, int k) {
        Jet u = Jet::variable(0, pt[0], 3, k);
        Jet x = Jet::variable(1, pt[1], 3, k);
        Jet y = Jet::variable(2, pt[2], 3, k);
        return cplx(c0r, c0i) + c1 * u * x + c2 * sin(y) + cplx(0, 1) * c3 * x + c4 * y * y * u;
    });
}

inline const CRStructure& normalized_of(const Scenario& sc, std::optional<CRStructure>& cache) {
    if (sc.cr_normalized) return *sc.cr;
    if (!cache) cache = normalize_lambda(*sc.cr);
    return *cache;
}

inline void require(bool cond, const char* msg) {
    if (!cond) throw config_error(msg);
}

}  // namespace checks_detail

// Per-point residual computation for one named check.
inline Checkered run_check_at(const std::string& name, const Scenario& sc, const RunConfig& cfg,
                              std::span<const double> pt, std::optional<CRStructure>& ncache) {
    using namespace checks_detail;
    Checkered out;
    const Point pt3(pt.begin(), pt.begin() + std::min<std::size_t>(3, pt.size()));

    if (name == "structure_equations") {
        require(sc.coframe.has_value(), "structure_equations needs a coframe");
        auto r = structure_equation_residuals(*sc.coframe, pt);
        double scl = 1;
        for (int i = 0; i < 4; ++i) {
            FormValue d = exterior_derivative(sc.coframe->theta[i].at(pt, 2));
            scl = std::max(scl, d.norm_inf());
            FormValue dd = exterior_derivative(d);
            double ddmax = 0;
            for (auto& c : dd.comps) ddmax = std::max(ddmax, std::abs(c.value()));
            out.add("d2_theta" + std::to_string(i + 1), ddmax, scl);
        }
        out.add("first_structure", r.first_structure, scl);
        out.add("connection_conjugation", r.conjugation, scl);
        out.add("coframe_reality", r.reality, 1.0);
        return out;
    }

    if (name == "riemann_identities") {
        require(sc.coframe.has_value(), "riemann_identities needs a coframe");
        CurvaturePacket p = curvature_packet(*sc.coframe, pt);
        out.add("riemann_antisymmetry", p.antisymmetry, p.scale);
        out.add("riemann_pair_symmetry", p.pair_symmetry, p.scale);
        out.add("first_bianchi", p.first_bianchi, p.scale);
        out.add("weyl_trace", p.weyl_trace, p.scale);
        return out;
    }

    if (name == "ricci_blocks") {
        require(sc.coframe.has_value(), "ricci_blocks needs a coframe");
        CurvaturePacket p = curvature_packet(*sc.coframe, pt);
        auto rb = ricci_blocks(p, sc.Lambda);
        bool gate_a = sc.ricci_blocks_expected.find('a') != std::string::npos;
        bool gate_b = sc.ricci_blocks_expected.find('b') != std::string::npos;
        bool gate_c = sc.ricci_blocks_expected.find('c') != std::string::npos;
        if (gate_a) out.add("res_a", rb.res_a, rb.scale);
        if (gate_b) out.add("res_b", rb.res_b, rb.scale);
        if (gate_c) out.add("res_c", rb.res_c, rb.scale);
        if (sc.reduced_lift) {
            cplx half_b = p.ricci[0][1] + p.ricci[2][3] - 2.0 * sc.Lambda;
            out.add("constant_ricci_scalar", half_b, rb.scale);
        }
        out.add("r44_reality", rb.r44_imag, rb.scale);
        return out;
    }

    if (name == "weyl_scalars") {
        require(sc.coframe.has_value(), "weyl_scalars needs a coframe");
        CurvaturePacket p = curvature_packet(*sc.coframe, pt);
        if (sc.algebraically_special || sc.fefferman || sc.expected_petrov == "ZERO") {
            out.add("psi0", p.psi.psi0, p.scale);
            out.add("psi1", p.psi.psi1, p.scale);
        }
        if (sc.fefferman || sc.expected_petrov == "ZERO") {
            out.add("psi2", p.psi.psi2, p.scale);
            out.add("psi3", p.psi.psi3, p.scale);
        }
        if (sc.expected_petrov == "ZERO" || (sc.fefferman && sc.cartan_flat))
            out.add("psi4", p.psi.psi4, p.scale);
        if (sc.psi2_closed) {
            cplx want = sc.psi2_closed(pt);
            out.add("psi2_closed_form", p.psi.psi2 - want, std::max(1.0, std::abs(want)));
        }
        return out;
    }

    if (name == "classify") {
        require(sc.coframe.has_value(), "classify needs a coframe");
        CurvaturePacket p = curvature_packet(*sc.coframe, pt);
        double tol = cfg.tolerances.count("classify") ? cfg.tolerances.at("classify")
                                                      : default_tolerance("classify");
        PetrovResult r = classify(p.psi, tol);
        if (!sc.expected_petrov.empty())
            out.add("label_" + to_string(r.label), to_string(r.label) == sc.expected_petrov ? 0.0 : 1.0);
        else
            out.add("label_" + to_string(r.label), 0.0);
        return out;
    }

    if (name == "optical_scalars") {
        require(sc.coframe.has_value(), "optical_scalars needs a coframe");
        OpticalScalars os = optical_scalars(*sc.coframe, pt);
        double scl = std::max(1.0, std::abs(os.rho) + std::abs(os.tau));
        if (sc.shearfree_geodesic) {
            out.add("kappa", os.kappa, scl);
            out.add("sigma", os.sigma, scl);
        }
        out.add("twist_vs_connection", os.twist_consistency, scl);
        return out;
    }

    if (name == "levi") {
        require(sc.cr.has_value(), "levi needs CR data");
        auto lr = levi_coefficient(*sc.cr, pt3);
        out.add("omega_reality", lr.imag_residual, std::max(1.0, std::abs(lr.omega)));
        if (sc.levi_closed) out.add("omega_closed_form", cplx(lr.omega) - sc.levi_closed(pt3));
        return out;
    }

    if (name == "cr_identities") {
        require(sc.cr.has_value(), "cr_identities needs CR data");
        if (!sc.cr_normalized && std::abs(levi_coefficient(*sc.cr, pt3).omega) < 0.05)
            throw singular_frame_error("Levi-degenerate sample", 0.0);
        const CRStructure& cr = normalized_of(sc, ncache);
        out.add("duality", duality_residual(cr, pt3));
        out.add("ee0_reality", reality_diagnostic_ee0(cr, pt3));
        for (int i = 0; i < 10; ++i)
            out.add("commutator_f" + std::to_string(i),
                    commutator_residual(cr, seeded_field(cfg.seed * 131 + static_cast<std::uint64_t>(i)), pt3));
        ScalarField t = seeded_field(cfg.seed * 977 + 7);
        cplx lhs = second_cr_form_residual(cr, t, pt3);
        cplx rhs = cplx(0, 1) * std::conj(residual_ee5(cr, t, pt3));
        out.add("second_form_vs_ee5", lhs - rhs, std::max(1.0, std::abs(rhs)));
        ScalarField f = seeded_field(cfg.seed * 499 + 3);
        out.add("nbm_exterior_route", residual_maxwell_nbm(cr, f, pt3).cross_residual);
        return out;
    }

    if (name == "maxwell") {
        require(sc.cr.has_value() && sc.coframe.has_value() && sc.maxwell_f.valid(),
                "maxwell needs CR data, a coframe and a field f");
        auto good = maxwell_check(*sc.cr, sc.cr_normalized, *sc.coframe, sc.maxwell_f, pt);
        out.add("dF", good.dF_residual);
        out.add("nullness", good.nullness);
        out.add("asd", good.asd_residual);
        out.add("nbm", good.nbm);
        out.add("nbm_exterior_route", good.nbm_cross_residual);
        out.add("dF_vs_nbm", good.equivalence_residual, std::max(1.0, std::abs(good.nbm)));
        if (sc.maxwell_f_bad.valid()) {
            auto bad = maxwell_check(*sc.cr, sc.cr_normalized, *sc.coframe, sc.maxwell_f_bad, pt);
            // the deliberate non-solution must be detected: residual > 0.1
            out.add("non_solution_detected", bad.dF_residual > 0.1 ? 0.0 : 1.0);
        }
        return out;
    }

    if (name == "periodicity") {
        require(sc.coframe.has_value(), "periodicity needs a coframe");
        require(sc.reduced_lift, "periodicity applies to reduced lifts");
        Point shifted(pt.begin(), pt.end());
        shifted[3] += 2.0 * std::numbers::pi;
        for (int i = 0; i < 4; ++i) {
            FormValue w0 = sc.coframe->theta[i].at(pt, 0);
            FormValue w1 = sc.coframe->theta[i].at(shifted, 0);
            double worst = 0;
            for (std::size_t a = 0; a < 4; ++a)
                worst = std::max(worst, std::abs(w0.comps[a].value() - w1.comps[a].value()));
            out.add("theta" + std::to_string(i + 1) + "_period", worst);
        }
        return out;
    }

    if (name == "cartan") {
        require(sc.cr.has_value(), "cartan needs CR data");
        if (!sc.cr_normalized && std::abs(levi_coefficient(*sc.cr, pt3).omega) < 0.05)
            throw singular_frame_error("Levi-degenerate sample", 0.0);
        const CRStructure& cr = normalized_of(sc, ncache);
        cplx inv = cartan_invariant(cr, pt3);
        double thr = cfg.tolerances.count("cartan") ? cfg.tolerances.at("cartan")
                                                    : default_tolerance("cartan");
        if (sc.cartan_flat)
            out.add("cartan_invariant", inv);  // passing flags the structure flat-equivalent
        else
            out.add("cartan_nonzero_detected", std::abs(inv) > thr ? 0.0 : 1.0);
        if (sc.fefferman && sc.coframe) {
            CurvaturePacket p = curvature_packet(*sc.coframe, pt);
            bool inv_zero = std::abs(inv) < thr;
            bool psi4_zero = std::abs(p.psi.psi4) < thr * p.scale;
            out.add("psi4_covanishing", inv_zero == psi4_zero ? 0.0 : 1.0);
        }
        return out;
    }

    throw config_error("unknown check '" + name + "'");
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct CheckSummary {
    std::string name;
    int samples = 0;
    int skipped = 0;
    double max_abs = 0;
    double max_rel = 0;
    double tolerance = 0;
    bool pass = false;
    std::map<std::string, double> worst_by_label;
};

struct RunResult {
    ordered_json report;
    bool all_pass = true;
    bool evaluation_failure = false;
    int exit_code() const { return evaluation_failure ? 3 : (all_pass ? 0 : 1); }
};

inline double resolve_tolerance(const std::string& check, const Scenario& sc, const RunConfig& cfg) {
    if (auto it = cfg.tolerances.find(check); it != cfg.tolerances.end()) return it->second;
    for (const Expectation& e : sc.expected)
        if (e.check == check) return e.tol;
    return default_tolerance(check);
}

inline RunResult run_checks(const RunConfig& cfg) {
    Scenario sc = build_scenario(cfg);
    std::vector<std::string> names = cfg.checks;
    if (names.empty())
        for (const Expectation& e : sc.expected) names.push_back(e.check);

    std::vector<Point> pts = sample_points(sc, cfg, cfg.count);

    RunResult rr;
    rr.report["schema_version"] = 1;
    if (!cfg.inline_def.is_null() && !cfg.inline_def.empty()) {
        rr.report["scenario"] = "inline";
    } else {
        ordered_json s;
        s["name"] = cfg.scenario;
        ordered_json pj = ordered_json::object();
        for (auto& [k, v] : cfg.params) pj[k] = v;
        if (!cfg.c_expr.empty()) pj["c"] = cfg.c_expr;
        s["params"] = pj;
        rr.report["scenario"] = s;
    }
    rr.report["mode"] = cfg.mode;
    rr.report["seed"] = cfg.seed;
    rr.report["checks"] = ordered_json::array();

    for (const std::string& name : names) {
        CheckSummary cs;
        cs.name = name;
        cs.tolerance = resolve_tolerance(name, sc, cfg);
        std::vector<Checkered> results(pts.size());
        std::vector<bool> in_domain(pts.size(), true);
        std::optional<CRStructure> ncache;
        // normalize once up front (lazily built caches are not thread-safe)
        if ((name == "cr_identities" || name == "cartan") && sc.cr && !sc.cr_normalized)
            ncache = normalize_lambda(*sc.cr);
        std::vector<bool> ok;
        parallel_for(pts.size(), [&](std::size_t i) {
            if (!sc.point_in_domain(pts[i])) {
                in_domain[i] = false;
                return;
            }
            results[i] = run_check_at(name, sc, cfg, pts[i], ncache);
        }, ok);

        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!in_domain[i] || !ok[i]) {
                ++cs.skipped;
                continue;
            }
            ++cs.samples;
            for (const Residual& r : results[i].rows) {
                cs.max_abs = std::max(cs.max_abs, r.abs);
                double rel = r.abs / r.scale;
                cs.max_rel = std::max(cs.max_rel, rel);
                auto [it, fresh] = cs.worst_by_label.try_emplace(r.label, rel);
                if (!fresh) it->second = std::max(it->second, rel);
            }
        }
        cs.pass = cs.max_rel < cs.tolerance && cs.samples > 0;
        if (cs.skipped > static_cast<int>(pts.size()) / 10) rr.evaluation_failure = true;
        if (!cs.pass) rr.all_pass = false;

        ordered_json cj;
        cj["name"] = cs.name;
        cj["samples"] = cs.samples;
        cj["skipped"] = cs.skipped;
        cj["max_abs_residual"] = cs.max_abs;
        cj["max_rel_residual"] = cs.max_rel;
        cj["tolerance"] = cs.tolerance;
        cj["pass"] = cs.pass;
        ordered_json wj = ordered_json::object();
        for (auto& [k, v] : cs.worst_by_label) wj[k] = v;
        cj["worst_by_label"] = wj;
        rr.report["checks"].push_back(cj);
    }
    rr.report["pass"] = rr.all_pass && !rr.evaluation_failure;
    return rr;
}

// ---------------------------------------------------------------------------
// Grid CSV
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string run_grid(const RunConfig& cfg) {
    Scenario sc = build_scenario(cfg);
    RunConfig gcfg = cfg;
    gcfg.mode = "grid";
    std::vector<Point> pts = sample_points(sc, gcfg, 0);

    std::string csv;
    for (std::size_t i = 0; i < sc.domain.size(); ++i) {
        if (i) csv += ",";
        csv += i < sc.chart.names.size() ? sc.chart.names[i] : "x" + std::to_string(i);
    }
    csv += ",omega,kappa_re,kappa_im,sigma_re,sigma_im,Omega,Theta_exp";
    for (int k = 0; k < 5; ++k)
        csv += ",psi" + std::to_string(k) + "_re,psi" + std::to_string(k) + "_im";
    csv += ",petrov,skipped\n";

    struct Row {
        bool skipped = true;
        bool has_cr = false, has_cf = false;
        double omega = 0;
        OpticalScalars os;
        WeylScalars psi;
        std::string label;
    };
    std::vector<Row> rows(pts.size());
    double tol = cfg.tolerances.count("classify") ? cfg.tolerances.at("classify")
                                                  : default_tolerance("classify");
    std::vector<bool> ok;
    parallel_for(pts.size(), [&](std::size_t i) {
        if (!sc.point_in_domain(pts[i])) return;  // stays skipped
        Row& r = rows[i];
        if (sc.cr) {
            Point pt3(pts[i].begin(), pts[i].begin() + 3);
            r.omega = levi_coefficient(*sc.cr, pt3).omega;
            r.has_cr = true;
        }
        if (sc.coframe) {
            r.os = optical_scalars(*sc.coframe, pts[i]);
            CurvaturePacket p = curvature_packet(*sc.coframe, pts[i]);
            r.psi = p.psi;
            r.label = to_string(classify(p.psi, tol).label);
            r.has_cf = true;
        }
        r.skipped = false;
    }, ok);

    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Row& r = rows[i];
        bool skipped = r.skipped || !ok[i];
        for (std::size_t c = 0; c < pts[i].size(); ++c) {
            if (c) csv += ",";
            csv += format_double(pts[i][c]);
        }
        if (skipped) {
            csv += ",,,,,,,";
            csv += ",,,,,,,,,,";  // ten psi fields
            csv += ",,1\n";
            continue;
        }
        csv += r.has_cr ? "," + format_double(r.omega) : ",";
        if (r.has_cf) {
            csv += "," + format_double(r.os.kappa.real()) + "," + format_double(r.os.kappa.imag());
            csv += "," + format_double(r.os.sigma.real()) + "," + format_double(r.os.sigma.imag());
            csv += "," + format_double(r.os.twist) + "," + format_double(r.os.expansion);
            for (int k = 0; k < 5; ++k)
                csv += "," + format_double(r.psi[k].real()) + "," + format_double(r.psi[k].imag());
            csv += "," + r.label;
        } else {
            csv += ",,,,,,";
            csv += ",,,,,,,,,,";
            csv += ",";
        }
        csv += ",0\n";
    }
    return csv;
}

}  // namespace nullframe
