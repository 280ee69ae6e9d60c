#pragma once

// Built-in, exactly specified scenarios: flat space, the (m, a, b) rotating
// black-hole family with its CR data, the Heisenberg structure and its flat
// lift, the Robinson structure with its aligned null Maxwell field, the
// r-independent type-N lift over structures with c = kappa conj(z), and the
// periodic lift over the Heisenberg structure with m = iM.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nullframe/coframe.hpp"
#include "nullframe/cr_structure.hpp"
#include "nullframe/expr.hpp"
#include "nullframe/lift.hpp"

namespace nullframe {

struct Expectation {
    std::string check;
    double tol;
    std::string note;
};

struct Scenario {
    std::string name;
    Chart chart;  // full evaluation chart (4-dim when a coframe is present)
    std::optional<CRStructure> cr;  // normalized when `cr_normalized` is true
    bool cr_normalized = false;
    std::optional<NullCoframe> coframe;
    double Lambda = 0;
    std::vector<std::pair<double, double>> domain;  // per chart coordinate
    std::function<bool(std::span<const double>)> guard;  // extra safe-domain predicate

    std::vector<Expectation> expected;

    ScalarField maxwell_f;      // aligned Maxwell candidate (when valid())
    ScalarField maxwell_f_bad;  // deliberate non-solution
    std::function<cplx(std::span<const double>)> levi_closed;
    std::function<cplx(std::span<const double>)> psi2_closed;  // on the 4-chart
    std::string expected_petrov;
    std::string ricci_blocks_expected;  // subset of "abc"
    bool algebraically_special = false; // expect Psi0 = Psi1 = 0
    bool shearfree_geodesic = false;    // expect kappa = sigma = 0
    bool cartan_flat = false;           // expect the CR invariant to vanish
    bool fefferman = false;             // co-vanishing check applies
    bool reduced_lift = false;          // r-periodicity applies
    std::optional<LiftParameters> lift_params;

    bool point_in_domain(std::span<const double> pt) const {
        for (std::size_t i = 0; i < domain.size() && i < pt.size(); ++i)
            if (pt[i] < domain[i].first || pt[i] > domain[i].second) return false;
        return !guard || guard(pt);
    }
};

namespace catalog_detail {

inline const Chart& cr_chart() {
    static const Chart c{{"u", "z_re", "z_im"}};
    return c;
}

inline FormField heisenberg_lambda() {
    FormField f = FormField::zero(3, 1);
    f.comps[0] = ScalarField::constant(1.0, 3);
    f.comps[1] = -ScalarField::coordinate(2, 3);  // -z_im d z_re
    f.comps[2] = ScalarField::coordinate(1, 3);   //  z_re d z_im
    return f;
}

inline FormField dz_form(int nvars = 3) {
    FormField f = FormField::zero(nvars, 1);
    f.comps[1] = ScalarField::constant(1.0, nvars);
    f.comps[2] = ScalarField::constant(cplx(0, 1), nvars);
    return f;
}

// 1-form  du + a dz + conj(a) dzbar  with a given as a jet closure of
// (u, z, zbar); automatically real.
inline FormField real_one_form_from_a(std::function<Jet(const Jet&, const Jet&, const Jet&)> a_fn) {
    FormField f = FormField::zero(3, 1);
    f.comps[0] = ScalarField::constant(1.0, 3);
    auto a_field = [a_fn](std::span<const double> pt, int k) {
        Jet u = Jet::variable(0, pt[0], 3, k);
        Jet z = Jet::variable(1, pt[1], 3, k) + cplx(0, 1) * Jet::variable(2, pt[2], 3, k);
        return a_fn(u, z, conj(z));
    };
    f.comps[1] = ScalarField([a_field](std::span<const double> pt, int k) {
        Jet a = a_field(pt, k);
        return a + conj(a);
    });
    f.comps[2] = ScalarField([a_field](std::span<const double> pt, int k) {
        Jet a = a_field(pt, k);
        return cplx(0, 1) * (a - conj(a));
    });
    return f;
}

inline CRStructure heisenberg_cr() {
    CRStructure cr;
    cr.chart = cr_chart();
    cr.lambda = heisenberg_lambda();
    cr.mu = dz_form();
    return cr;
}

// lambda of the (m, a, b) family:
//   du + i(2b + (a+b) z zbar) / (z (1 + z zbar / 2)^2) dz + conj dzbar
inline CRStructure kerr_family_cr(double a, double b) {
    CRStructure cr;
    cr.chart = cr_chart();
    cr.lambda = real_one_form_from_a([a, b](const Jet&, const Jet& z, const Jet& zb) {
        Jet zz = z * zb;
        Jet denom = z * pow(1.0 + 0.5 * zz, 2);
        return cplx(0, 1) * (2.0 * b + (a + b) * zz) / denom;
    });
    cr.mu = dz_form();
    return cr;
}

inline CRStructure robinson_cr() {
    CRStructure cr;
    cr.chart = cr_chart();
    // du + i(zbar dz - z dzbar): a = i zbar
    cr.lambda = real_one_form_from_a(
        [](const Jet&, const Jet&, const Jet& zb) { return cplx(0, 1) * zb; });
    cr.mu = dz_form();
    return cr;
}

// Normalized structure with structure function c = kappa conj(z), kappa real:
//   lambda = du + a dz + conj(a) dzbar,
//   a = zbar (-kappa u - i/2 + i phi(z zbar)),
//   phi(v) = 1/2 + (1 - e^{kappa v}) / (2 kappa v)      (phi = 0 for kappa = 0).
inline CRStructure kappa_zbar_cr(double kappa) {
    CRStructure cr;
    cr.chart = cr_chart();
    if (kappa == 0.0) return heisenberg_cr();
    cr.lambda = real_one_form_from_a([kappa](const Jet& u, const Jet& z, const Jet& zb) {
        Jet v = z * zb;
        Jet phi = 0.5 + (1.0 - exp(kappa * v)) / (2.0 * kappa * v);
        return zb * (-kappa * u - cplx(0, 0.5) + cplx(0, 1) * phi);
    });
    cr.mu = dz_form();
    return cr;
}

struct KerrParams {
    double m = 1, a = 0, b = 0;
};

// P^2, W, H of the family metric
//   g = 2 ( P^2 mu mubar + lambda (dr + W mu + Wbar mubar + H lambda) ),
// realized by the coframe theta^1 = P mu, theta^2 = P mubar, theta^3 = lambda,
// theta^4 = dr + W mu + Wbar mubar + H lambda.
inline NullCoframe kerr_family_coframe(const CRStructure& cr, KerrParams kp) {
    const double m = kp.m, a = kp.a, b = kp.b;
    auto zjets = [](std::span<const double> pt, int k) {
        Jet z = Jet::variable(1, pt[1], 4, k) + cplx(0, 1) * Jet::variable(2, pt[2], 4, k);
        return z;
    };
    ScalarField P2([zjets, a, b](std::span<const double> pt, int k) {
        Jet z = zjets(pt, k);
        Jet zz = z * conj(z);
        Jet r = Jet::variable(3, pt[3], 4, k);
        Jet one_p = 1.0 + 0.5 * zz;
        return r * r / (one_p * one_p) + pow(b - a + (b + a) * 0.5 * zz, 2) / pow(one_p, 4);
    });
    ScalarField P = ScalarField([P2](std::span<const double> pt, int k) { return sqrt(P2(pt, k)); });
    ScalarField W([zjets, a](std::span<const double> pt, int k) {
        Jet z = zjets(pt, k);
        Jet one_p = 1.0 + 0.5 * (z * conj(z));
        return cplx(0, 1) * a * conj(z) / (one_p * one_p);
    });
    ScalarField H([zjets, m, a, b](std::span<const double> pt, int k) {
        Jet z = zjets(pt, k);
        Jet zz = z * conj(z);
        Jet r = Jet::variable(3, pt[3], 4, k);
        Jet one_p = 1.0 + 0.5 * zz;
        Jet num = m * r + b * b - a * b * (1.0 - 0.5 * zz) / one_p;
        Jet den = r * r + pow(b - a + (b + a) * 0.5 * zz, 2) / (one_p * one_p);
        return -0.5 + num / den;
    });

    NullCoframe cf;
    cf.chart = cr.chart.with_r("rp");
    FormField mu4 = cr.mu.pulled_back_to(4);
    FormField lam4 = cr.lambda.pulled_back_to(4);
    FormField dr = FormField::zero(4, 1);
    dr.comps[3] = ScalarField::constant(1.0, 4);
    cf.theta[0] = P * mu4;
    cf.theta[1] = P * conj(mu4);
    cf.theta[2] = lam4;
    cf.theta[3] = dr + W * mu4 + f_conj(W) * conj(mu4) + H * lam4;
    return cf;
}

inline NullCoframe minkowski_coframe() {
    NullCoframe cf;
    cf.chart = Chart{{"x1", "x2", "x3", "x4"}};
    const double s = 1.0 / std::sqrt(2.0);
    for (auto& t : cf.theta) t = FormField::zero(4, 1);
    cf.theta[0].comps[0] = ScalarField::constant(s, 4);
    cf.theta[0].comps[1] = ScalarField::constant(cplx(0, s), 4);
    cf.theta[1].comps[0] = ScalarField::constant(s, 4);
    cf.theta[1].comps[1] = ScalarField::constant(cplx(0, -s), 4);
    cf.theta[2].comps[2] = ScalarField::constant(s, 4);
    cf.theta[2].comps[3] = ScalarField::constant(-s, 4);
    cf.theta[3].comps[2] = ScalarField::constant(s, 4);
    cf.theta[3].comps[3] = ScalarField::constant(s, 4);
    return cf;
}

// Robinson lift of flat space: pulling the Minkowski metric through the
// substitution u' = u - r z zbar, zeta = (r + i) z gives
// g = 2(lambda dr + (r^2+1) mu mubar), realized by theta^1 = sqrt(r^2+1) mu,
// theta^3 = lambda, theta^4 = dr. (The curvature engine confirms flatness
// with this scale.)
inline NullCoframe robinson_coframe(const CRStructure& cr) {
    NullCoframe cf;
    cf.chart = cr.chart.with_r();
    ScalarField scale([](std::span<const double> pt, int k) {
        Jet r = Jet::variable(3, pt[3], 4, k);
        return sqrt(r * r + 1.0);
    });
    FormField mu4 = cr.mu.pulled_back_to(4);
    cf.theta[0] = scale * mu4;
    cf.theta[1] = scale * conj(mu4);
    cf.theta[2] = cr.lambda.pulled_back_to(4);
    cf.theta[3] = FormField::zero(4, 1);
    cf.theta[3].comps[3] = ScalarField::constant(1.0, 4);
    return cf;
}

}  // namespace catalog_detail

struct CatalogEntry {
    std::string name;
    std::string params;
    std::string summary;
};

inline std::vector<CatalogEntry> catalog_list() {
    return {
        {"minkowski", "", "flat space, constant null coframe"},
        {"kerr_family", "m, a, b", "rotating black-hole family lift with its CR data"},
        {"heisenberg", "", "normalized Heisenberg CR structure and its flat lift"},
        {"robinson_maxwell", "", "Robinson structure, flat lift, aligned null Maxwell field"},
        {"fefferman_of", "c (expression, kappa*conj(z) with real kappa)",
         "r-independent type-N lift over a structure with c = kappa conj(z)"},
        {"taubnut_like", "M", "reduced lift over Heisenberg with p=1, s=0, t=0, m=iM"},
    };
}

inline Scenario catalog_get(const std::string& name, const std::map<std::string, double>& params = {},
                            const std::string& c_expr = "") {
    using namespace catalog_detail;
    auto param = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };

    Scenario sc;
    sc.name = name;

    if (name == "minkowski") {
        sc.coframe = minkowski_coframe();
        sc.chart = sc.coframe->chart;
        sc.domain = {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}};
        sc.ricci_blocks_expected = "abc";
        sc.expected_petrov = "ZERO";
        sc.shearfree_geodesic = true;
        sc.expected = {{"structure_equations", 1e-10, "flat coframe"},
                       {"ricci_blocks", 1e-9, "vacuum with Lambda=0"},
                       {"riemann_identities", 1e-9, ""},
                       {"weyl_scalars", 1e-9, "all Psi vanish"},
                       {"classify", 1e-7, "ZERO"},
                       {"optical_scalars", 1e-9, "parallel congruence"}};
        return sc;
    }

    if (name == "kerr_family") {
        KerrParams kp{param("m", 1.0), param("a", 0.0), param("b", 0.0)};
        CRStructure cr = kerr_family_cr(kp.a, kp.b);
        sc.cr = cr;
        sc.coframe = kerr_family_coframe(cr, kp);
        sc.chart = sc.coframe->chart;
        sc.domain = {{-1, 1}, {0.3, 1.4}, {0.3, 1.4}, {1.0, 3.0}};
        const double a = kp.a, b = kp.b;
        sc.guard = [a, b](std::span<const double> pt) {
            double zz = pt[1] * pt[1] + pt[2] * pt[2];
            if (zz < 0.05) return false;  // the lambda expression has 1/z terms
            double one_p = 1.0 + 0.5 * zz;
            double p2 = pt[3] * pt[3] / (one_p * one_p) +
                        std::pow(b - a + (b + a) * 0.5 * zz, 2) / std::pow(one_p, 4);
            return p2 > 1e-3;
        };
        sc.levi_closed = [a, b](std::span<const double> pt) {
            double zz = pt[1] * pt[1] + pt[2] * pt[2];
            return cplx(((a + b) * zz - 2.0 * (a - b)) / std::pow(1.0 + 0.5 * zz, 3));
        };
        sc.ricci_blocks_expected = "abc";
        sc.algebraically_special = true;
        sc.shearfree_geodesic = true;
        sc.expected = {{"structure_equations", 1e-10, ""},
                       {"ricci_blocks", 1e-6, "Ricci flat for all m,a,b"},
                       {"riemann_identities", 1e-9, ""},
                       {"weyl_scalars", 1e-7, "Psi0 = Psi1 = 0"},
                       {"optical_scalars", 1e-9, "null geodesic shearfree"},
                       {"levi", 1e-10, "closed-form Levi coefficient"}};
        return sc;
    }

    if (name == "heisenberg") {
        CRStructure cr = heisenberg_cr();
        sc.cr = cr;
        sc.cr_normalized = true;
        sc.coframe = lift_general(cr, ScalarField::constant(1.0, 4), ScalarField::zero(4),
                                  ScalarField::zero(4));
        sc.chart = sc.coframe->chart;
        sc.domain = {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}};
        sc.shearfree_geodesic = true;
        sc.cartan_flat = true;
        sc.levi_closed = [](std::span<const double>) { return cplx(1.0); };
        sc.expected = {{"structure_equations", 1e-10, ""},
                       {"optical_scalars", 1e-9, "kappa = sigma = 0"},
                       {"levi", 1e-10, "omega = 1"},
                       {"cr_identities", 1e-8, ""},
                       {"cartan", 1e-9, "flat structure"}};
        return sc;
    }

    if (name == "robinson_maxwell") {
        CRStructure cr = robinson_cr();
        sc.cr = cr;
        sc.coframe = robinson_coframe(cr);
        sc.chart = sc.coframe->chart;
        sc.domain = {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}};
        sc.shearfree_geodesic = true;
        sc.levi_closed = [](std::span<const double>) { return cplx(-2.0); };
        // f = u - i z zbar solves the tangential equation; f = zbar does not
        sc.maxwell_f = ScalarField([](std::span<const double> pt, int k) {
            Jet u = Jet::variable(0, pt[0], 3, k);
            Jet z = Jet::variable(1, pt[1], 3, k) + cplx(0, 1) * Jet::variable(2, pt[2], 3, k);
            return u - cplx(0, 1) * (z * conj(z));
        });
        sc.maxwell_f_bad = ScalarField([](std::span<const double> pt, int k) {
            Jet z = Jet::variable(1, pt[1], 3, k) + cplx(0, 1) * Jet::variable(2, pt[2], 3, k);
            return conj(z);
        });
        sc.expected = {{"structure_equations", 1e-10, ""},
                       {"levi", 1e-10, "omega = -2"},
                       {"maxwell", 1e-9, "aligned null Maxwell field"},
                       {"optical_scalars", 1e-9, ""}};
        return sc;
    }

    if (name == "fefferman_of") {
        // accepted family: c = kappa * conj(z) with real constant kappa
        const Chart& ch = cr_chart();
        ExprPtr expr = parse(c_expr.empty() ? "0" : c_expr, ch);
        auto cval = [&](double zr, double zi) {
            return eval_jet(expr, Point{0.2, zr, zi}, 0, 3).value();
        };
        cplx probe = cval(1.0, 0.0);
        if (std::abs(probe.imag()) > 1e-12)
            throw config_error("fefferman_of: c must be kappa*conj(z) with real kappa");
        double kappa = probe.real();
        for (auto [zr, zi] : {std::pair{0.7, -0.4}, std::pair{-0.3, 0.9}, std::pair{1.1, 0.5}}) {
            cplx want = kappa * std::conj(cplx(zr, zi));
            if (std::abs(cval(zr, zi) - want) > 1e-9)
                throw config_error(
                    "fefferman_of: unsupported c expression; the catalog realizes exactly the "
                    "family c = kappa*conj(z) with real kappa (e.g. \"0\" or \"0.3*(z_re - i*z_im)\")");
        }
        CRStructure cr = kappa_zbar_cr(kappa);
        sc.cr = cr;
        sc.cr_normalized = true;
        sc.coframe = lift_fefferman(cr);
        sc.chart = sc.coframe->chart;
        sc.domain = {{-1, 1}, {0.35, 1.2}, {0.35, 1.2}, {-1, 1}};
        sc.fefferman = true;
        sc.shearfree_geodesic = true;
        sc.expected_petrov = kappa == 0.0 ? "ZERO" : "N";
        sc.cartan_flat = kappa == 0.0;
        // No Ricci-block expectation: this representative of the conformal
        // class is not Einstein (Ric(k,k) = 1/2 already for the flat
        // structure), and only the conformally invariant statements apply.
        sc.expected = {{"structure_equations", 1e-10, ""},
                       {"weyl_scalars", 1e-7, "type N: Psi0..Psi3 vanish"},
                       {"classify", 1e-7, sc.expected_petrov},
                       {"optical_scalars", 1e-9, "shearfree geodesic by construction"},
                       {"cr_identities", 1e-8, ""},
                       {"cartan", 1e-7, "co-vanishing with the geometric Psi4"}};
        return sc;
    }

    if (name == "taubnut_like") {
        double M = param("M", 1.0);
        CRStructure cr = heisenberg_cr();
        sc.cr = cr;
        sc.cr_normalized = true;
        LiftParameters par;
        par.p = ScalarField::constant(1.0, 3);
        par.s = ScalarField::zero(3);
        par.t = ScalarField::zero(3);
        par.m = ScalarField::constant(cplx(0, M), 3);
        par.Lambda = 0;
        sc.lift_params = par;
        sc.coframe = lift_reduced(cr, par);
        sc.chart = sc.coframe->chart;
        sc.domain = {{-1, 1}, {-1, 1}, {-1, 1}, {-3.0, 3.0}};
        sc.guard = [](std::span<const double> pt) { return std::abs(std::cos(0.5 * pt[3])) > 0.05; };
        sc.reduced_lift = true;
        sc.ricci_blocks_expected = "abc";
        sc.algebraically_special = true;
        sc.shearfree_geodesic = true;
        sc.expected_petrov = "II_OR_D";
        sc.psi2_closed = [M](std::span<const double> pt) {
            cplx e = std::exp(cplx(0, pt[3]));
            return cplx(0, M) * std::pow(1.0 + e, 3) / 2.0;
        };
        sc.expected = {{"structure_equations", 1e-10, ""},
                       {"ricci_blocks", 1e-6, "vacuum"},
                       {"riemann_identities", 1e-9, ""},
                       {"weyl_scalars", 1e-7, "Psi2 closed form"},
                       {"classify", 1e-7, "II_OR_D"},
                       {"optical_scalars", 1e-9, ""},
                       {"periodicity", 1e-12, "coefficients 2 pi periodic in r"}};
        return sc;
    }

    throw config_error("unknown catalog scenario '" + name + "'");
}

}  // namespace nullframe
