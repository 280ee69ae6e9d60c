#pragma once

// 3-dimensional CR structures given by a real 1-form lambda and a complex
// 1-form mu with lambda ^ mu ^ mubar != 0. Provides the Levi coefficient,
// normalization, the structure function c of the normalized equation
//   d lambda = i mu ^ mubar + (c mu + cbar mubar) ^ lambda,    d mu = 0,
// the dual operator frame (d0, del, delbar), and the point residuals of the
// reduced equations and invariants built from them. Operators applied to
// derived fields re-evaluate the inner field one jet order higher, so the
// deepest pipelines (third derivatives of c, fourth of p) need lambda and mu
// evaluable at jet order 4.

#include <array>
#include <cmath>

#include "nullframe/chart.hpp"
#include "nullframe/errors.hpp"
#include "nullframe/forms.hpp"
#include "nullframe/jet.hpp"
#include "nullframe/linalg.hpp"

namespace nullframe {

struct CRStructure {
    Chart chart;       // 3 coordinates
    FormField lambda;  // real
    FormField mu;      // complex; the reduced equations additionally need d mu = 0
};

struct CRFrameJets {
    int order = 0;
    std::array<std::array<Jet, 3>, 3> forms;  // rows lambda, mu, mubar; columns coordinates
    std::array<std::array<Jet, 3>, 3> inv;    // inv[a][i]: e_i = inv[a][i] d_a for (d0, del, delbar)
    double cond = 0;
};

inline CRFrameJets eval_cr_frame(const CRStructure& cr, std::span<const double> pt, int order) {
    CRFrameJets fr;
    fr.order = order;
    FormValue lam = cr.lambda.at(pt, order);
    FormValue mu = cr.mu.at(pt, order);
    JetMat<3> m;
    for (int a = 0; a < 3; ++a) {
        m(0, a) = lam.comps[a];
        m(1, a) = mu.comps[a];
        m(2, a) = conj(mu.comps[a]);
        for (int r = 0; r < 3; ++r) fr.forms[r][a] = m(r, a);
    }
    JetMat<3> mi = jet_mat_inverse<3>(m, &fr.cond);
    if (!(fr.cond < kFrameConditionLimit))
        throw singular_frame_error("degenerate CR coframe (condition " + std::to_string(fr.cond) + ")",
                                   fr.cond);
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 3; ++i) fr.inv[a][i] = mi(a, i);
    return fr;
}

// Pairing of (lambda, mu, mubar) against (d0, del, delbar), deviation from identity.
inline double duality_residual(const CRStructure& cr, std::span<const double> pt) {
    CRFrameJets fr = eval_cr_frame(cr, pt, 0);
    double worst = 0;
    for (int r = 0; r < 3; ++r)
        for (int i = 0; i < 3; ++i) {
            cplx s = 0;
            for (int a = 0; a < 3; ++a)
                s += fr.forms[r][a].value() * fr.inv[a][i].value();
            worst = std::max(worst, std::abs(s - (r == i ? 1.0 : 0.0)));
        }
    return worst;
}

// The Levi coefficient as a jet: lambda ^ d lambda = i omega lambda ^ mu ^ mubar.
inline Jet levi_jet(const CRStructure& cr, std::span<const double> pt, int order) {
    FormValue lam1 = cr.lambda.at(pt, order + 1);
    FormValue dlam = exterior_derivative(lam1);
    FormValue lam = lam1.truncated(order);
    FormValue mu = cr.mu.at(pt, order);
    FormValue top = wedge(lam, dlam);
    FormValue basis = wedge(lam, wedge(mu, conj(mu)));
    Jet b = basis.comps[0];
    if (std::abs(b.value()) < 1e-300) throw singular_frame_error("lambda ^ mu ^ mubar vanishes", 0.0);
    return cplx(0, -1) * (top.comps[0] / b);
}

struct LeviResult {
    double omega;
    double imag_residual;  // omega is real for real lambda
};

inline LeviResult levi_coefficient(const CRStructure& cr, std::span<const double> pt) {
    Jet w = levi_jet(cr, pt, 0);
    return {w.value().real(), std::abs(w.value().imag())};
}

inline ScalarField levi_field(const CRStructure& cr) {
    CRStructure c = cr;
    return ScalarField([c](std::span<const double> pt, int k) { return levi_jet(c, pt, k); });
}

// lambda' = lambda / omega; preserves the class (the factor is real and
// nonvanishing on a strictly pseudoconvex domain).
inline CRStructure normalize_lambda(const CRStructure& cr) {
    ScalarField w = levi_field(cr);
    ScalarField winv = ScalarField([w](std::span<const double> pt, int k) {
        Jet wj = w(pt, k);
        if (std::abs(wj.value()) < 1e-12)
            throw domain_error("normalize_lambda: Levi coefficient vanishes (Levi-degenerate point)");
        return recip(wj);
    });
    CRStructure out = cr;
    out.lambda = winv * cr.lambda;
    return out;
}

// Decomposition of d lambda in the basis {mu ^ mubar, mu ^ lambda, mubar ^ lambda};
// for a normalized structure the coefficients are (i, c, conj c).
struct StructureDecomposition {
    Jet mu_mubar, mu_lambda, mubar_lambda;
};

inline StructureDecomposition decompose_dlambda(const CRStructure& cr, std::span<const double> pt,
                                                int order) {
    FormValue lam1 = cr.lambda.at(pt, order + 1);
    FormValue dlam = exterior_derivative(lam1);
    FormValue lam = lam1.truncated(order);
    FormValue mu = cr.mu.at(pt, order);
    FormValue mub = conj(mu);
    std::array<FormValue, 3> basis = {wedge(mu, mub), wedge(mu, lam), wedge(mub, lam)};
    JetMat<3> m;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m(a, b) = basis[b].comps[a];
    JetMat<3> mi = jet_mat_inverse<3>(m);
    std::array<Jet, 3> q;
    for (int b = 0; b < 3; ++b) {
        Jet acc = Jet::zero(3, order);
        for (int a = 0; a < 3; ++a) acc += mi(b, a) * dlam.comps[a];
        q[b] = acc;
    }
    return {q[0], q[1], q[2]};
}

// Residuals of the normalized-structure requirements at a point.
struct NormalizationChecks {
    double dmu = 0;              // |d mu|
    double levi_minus_one = 0;   // |coefficient of i mu ^ mubar - 1|
    double conj_consistency = 0; // |coeff(mubar ^ lambda) - conj coeff(mu ^ lambda)|
    double lambda_reality = 0;
};

inline NormalizationChecks normalization_checks(const CRStructure& cr, std::span<const double> pt) {
    NormalizationChecks r;
    FormValue dmu = exterior_derivative(cr.mu.at(pt, 1));
    for (auto& c : dmu.comps) r.dmu = std::max(r.dmu, std::abs(c.value()));
    StructureDecomposition d = decompose_dlambda(cr, pt, 0);
    r.levi_minus_one = std::abs(d.mu_mubar.value() - cplx(0, 1));
    r.conj_consistency = std::abs(d.mubar_lambda.value() - std::conj(d.mu_lambda.value()));
    FormValue lam = cr.lambda.at(pt, 0);
    for (auto& c : lam.comps) r.lambda_reality = std::max(r.lambda_reality, std::abs(c.value().imag()));
    return r;
}

// Structure function c of the normalized equation, as a scalar field.
inline ScalarField structure_function_c(const CRStructure& cr) {
    CRStructure c = cr;
    return ScalarField([c](std::span<const double> pt, int k) {
        return decompose_dlambda(c, pt, k).mu_lambda;
    });
}

// The reduced equations assume mu is exact (mu = d zeta); reject other inputs.
inline void require_closed_mu(const CRStructure& cr, std::span<const double> pt, double tol = 1e-10) {
    FormValue dmu = exterior_derivative(cr.mu.at(pt, 1));
    for (auto& c : dmu.comps)
        if (std::abs(c.value()) > tol)
            throw domain_error("reduced-equation residuals need a closed mu (|d mu| = " +
                               std::to_string(std::abs(c.value())) + ")");
}

enum class CROp { D0, Del, DelBar };

inline ScalarField cr_apply(const CRStructure& cr, ScalarField f, CROp op) {
    CRStructure cc = cr;
    int col = op == CROp::D0 ? 0 : (op == CROp::Del ? 1 : 2);
    return ScalarField([cc, f, col](std::span<const double> pt, int k) {
        CRFrameJets fr = eval_cr_frame(cc, pt, k);
        Jet fj = f(pt, k + 1);
        Jet acc = Jet::zero(3, k);
        for (int a = 0; a < 3; ++a)
            acc += fr.inv[a][col] * fj.derivative(a);
        return acc;
    });
}

inline Jet cr_apply(const CRStructure& cr, const ScalarField& f, CROp op, std::span<const double> pt,
                    int order) {
    return cr_apply(cr, f, op)(pt, order);
}

// (d0 del - del d0) f - c d0 f at a point; vanishes for valid normalized data.
inline cplx commutator_residual(const CRStructure& cr, const ScalarField& f,
                                std::span<const double> pt) {
    ScalarField c = structure_function_c(cr);
    ScalarField d0f = cr_apply(cr, f, CROp::D0);
    ScalarField df = cr_apply(cr, f, CROp::Del);
    ScalarField lhs = cr_apply(cr, df, CROp::D0) - cr_apply(cr, d0f, CROp::Del) - c * d0f;
    return lhs(pt, 0).value();
}

// del cbar - delbar c; real del cbar is a closure condition of the normalized
// structure, reported as a diagnostic.
inline cplx reality_diagnostic_ee0(const CRStructure& cr, std::span<const double> pt) {
    ScalarField c = structure_function_c(cr);
    ScalarField r = cr_apply(cr, f_conj(c), CROp::Del) - cr_apply(cr, c, CROp::DelBar);
    return r(pt, 0).value();
}

// del t + (c - t) t
inline cplx residual_ee5(const CRStructure& cr, const ScalarField& t, std::span<const double> pt) {
    require_closed_mu(cr, pt);
    ScalarField c = structure_function_c(cr);
    ScalarField r = cr_apply(cr, t, CROp::Del) + (c - t) * t;
    return r(pt, 0).value();
}

// Coefficient of mu ^ mubar ^ lambda in d phi ^ phi for phi = mu + i conj(t) lambda;
// equals i conj(residual_ee5) for normalized data.
inline cplx second_cr_form_residual(const CRStructure& cr, const ScalarField& t,
                                    std::span<const double> pt) {
    FormField phi = cr.mu + (cplx(0, 1) * f_conj(t)) * cr.lambda;
    FormValue phi1 = phi.at(pt, 1);
    FormValue w = wedge(exterior_derivative(phi1), phi1.truncated(0));
    FormValue mu = cr.mu.at(pt, 0);
    FormValue basis = wedge(wedge(mu, conj(mu)), cr.lambda.at(pt, 0));
    return extract_coefficient(w, basis).q;
}

// [del delbar + delbar del + cbar del + c delbar + 1/2 c cbar
//  + 3/4 (del cbar + delbar c) - 3/2 (del tbar + delbar t + t tbar)] p
//  - (m + mbar)/p^3 - 2/3 Lambda p^3
inline cplx residual_ee7(const CRStructure& cr, const ScalarField& p, const ScalarField& t,
                         const ScalarField& m, double lambda, std::span<const double> pt) {
    require_closed_mu(cr, pt);
    ScalarField c = structure_function_c(cr);
    ScalarField cb = f_conj(c);
    ScalarField tb = f_conj(t);
    auto D = [&](ScalarField f) { return cr_apply(cr, f, CROp::Del); };
    auto Db = [&](ScalarField f) { return cr_apply(cr, f, CROp::DelBar); };
    ScalarField lhs = D(Db(p)) + Db(D(p)) + cb * D(p) + c * Db(p) + cplx(0.5) * c * cb * p +
                      cplx(0.75) * (D(cb) + Db(c)) * p -
                      cplx(1.5) * (D(tb) + Db(t) + t * tb) * p;
    ScalarField rhs = (m + f_conj(m)) / (p * p * p) + cplx(2.0 / 3.0 * lambda) * p * p * p;
    return (lhs - rhs)(pt, 0).value();
}

// del m + 3 (c - t) m
inline cplx residual_ee8(const CRStructure& cr, const ScalarField& m, const ScalarField& t,
                         std::span<const double> pt) {
    require_closed_mu(cr, pt);
    ScalarField c = structure_function_c(cr);
    ScalarField r = cr_apply(cr, m, CROp::Del) + 3.0 * ((c - t) * m);
    return r(pt, 0).value();
}

// del fbar + c fbar, plus the exterior-calculus cross-check: the coefficient
// of lambda ^ mu ^ mubar in d(f lambda ^ mu) equals delbar f + cbar f.
struct MaxwellNbmResult {
    cplx nbm;               // del fbar + c fbar
    cplx exterior_coeff;    // coefficient extracted from d(f lambda ^ mu)
    double cross_residual;  // |conj(exterior_coeff) - nbm|
};

inline MaxwellNbmResult residual_maxwell_nbm(const CRStructure& cr, const ScalarField& f,
                                             std::span<const double> pt) {
    ScalarField c = structure_function_c(cr);
    ScalarField fb = f_conj(f);
    cplx nbm = (cr_apply(cr, fb, CROp::Del) + c * fb)(pt, 0).value();
    FormField F = f * wedge(cr.lambda, cr.mu);
    FormValue dF = exterior_derivative(F.at(pt, 1));
    FormValue mu = cr.mu.at(pt, 0);
    FormValue basis = wedge(cr.lambda.at(pt, 0), wedge(mu, conj(mu)));
    cplx coeff = extract_coefficient(dF, basis).q;
    return {nbm, coeff, std::abs(std::conj(coeff) - nbm)};
}

// del delbar del c + 3 c delbar del c - 7 i c d0 c - 3 i del d0 c
// + (del c + 2 c^2) delbar c  -- the lowest-order invariant of the structure;
// vanishes identically exactly for structures equivalent to the flat
// (Heisenberg) one. Needs lambda, mu at jet order 4.
inline cplx cartan_invariant(const CRStructure& cr, std::span<const double> pt) {
    ScalarField c = structure_function_c(cr);
    auto D = [&](ScalarField f) { return cr_apply(cr, f, CROp::Del); };
    auto Db = [&](ScalarField f) { return cr_apply(cr, f, CROp::DelBar); };
    auto D0 = [&](ScalarField f) { return cr_apply(cr, f, CROp::D0); };
    ScalarField dc = D(c);
    ScalarField expr = D(Db(dc)) + 3.0 * (c * Db(dc)) - cplx(0, 7) * (c * D0(c)) -
                       cplx(0, 3) * D(D0(c)) + (dc + 2.0 * (c * c)) * Db(c);
    return expr(pt, 0).value();
}

// Conformally invariant wave operator
//   [del delbar + delbar del + c delbar + cbar del + 1/2 c cbar
//    + 3/8 (del cbar + delbar c)] f
struct LaplacianResult {
    double value;
    double imag_residual;
};

inline LaplacianResult cr_laplacian(const CRStructure& cr, const ScalarField& f,
                                    std::span<const double> pt) {
    ScalarField c = structure_function_c(cr);
    ScalarField cb = f_conj(c);
    auto D = [&](ScalarField g) { return cr_apply(cr, g, CROp::Del); };
    auto Db = [&](ScalarField g) { return cr_apply(cr, g, CROp::DelBar); };
    ScalarField expr = D(Db(f)) + Db(D(f)) + c * Db(f) + cb * D(f) + cplx(0.5) * c * cb * f +
                       cplx(0.375) * (D(cb) + Db(c)) * f;
    cplx v = expr(pt, 0).value();
    return {v.real(), std::abs(v.imag())};
}

// Invariants of the Lambda = 0, m = 0 branch:
//   I = del(del log p + c) + (del log p + c)^2
// together with del conj(I), the closed forms for R_33 and Psi_3 at given
// (r, s), and the candidate Psi_4 closed form when del conj(I) = 0. The
// O(Lambda) addends are included verbatim when lambda != 0.
struct TypeIIIInvariants {
    cplx I;
    cplx del_I_bar;
    cplx r33_closed;
    cplx psi3_closed;
    cplx psi4_closed;   // 2 i d0 conj(I) e^{-i(r+s)/2} cos^3((r+s)/2) / p^2
    bool type_n_candidate;
};

inline TypeIIIInvariants type_iii_invariants(const CRStructure& cr, const ScalarField& p,
                                             std::span<const double> pt, double r = 0, double s = 0,
                                             double lambda = 0, double tol = 1e-9) {
    ScalarField c = structure_function_c(cr);
    auto D = [&](ScalarField g) { return cr_apply(cr, g, CROp::Del); };
    auto Db = [&](ScalarField g) { return cr_apply(cr, g, CROp::DelBar); };
    auto D0 = [&](ScalarField g) { return cr_apply(cr, g, CROp::D0); };
    ScalarField dlogp = D(p) / p;
    ScalarField If = D(dlogp + c) + (dlogp + c) * (dlogp + c);
    ScalarField dIb = D(f_conj(If));
    ScalarField inner = D(p * p * dIb) + 2.0 * (c * (p * p * dIb));

    TypeIIIInvariants out;
    out.I = If(pt, 0).value();
    out.del_I_bar = dIb(pt, 0).value();
    double half = 0.5 * (r + s);
    double c2 = std::cos(half);
    cplx pv = p(pt, 0).value();
    cplx p2 = pv * pv, p4 = p2 * p2;
    out.r33_closed = 8.0 * std::pow(c2, 4) / p4 * inner(pt, 0).value();
    out.psi3_closed = cplx(0, 2) * out.del_I_bar * std::exp(cplx(0, half)) * std::pow(c2, 3) / p2;
    cplx d0Ib = D0(f_conj(If))(pt, 0).value();
    out.psi4_closed = cplx(0, 2) * d0Ib * std::exp(cplx(0, -half)) * std::pow(c2, 3) / p2;
    if (lambda != 0) {
        ScalarField dblogp = Db(p) / p;
        ScalarField d0logp = D0(p) / p;
        cplx cv = c(pt, 0).value(), cbv = std::conj(cv);
        cplx dlp = dlogp(pt, 0).value(), dblp = dblogp(pt, 0).value();
        cplx pd = (D(f_conj(c)) + Db(c))(pt, 0).value();
        cplx bracket = 4.0 / 3.0 * lambda * p2 + 6.0 * (cbv * dlp + cv * dblp) + 12.0 * dlp * dblp +
                       3.0 * cv * cbv - 0.5 * pd - cplx(0, 2) * d0logp(pt, 0).value();
        out.r33_closed += -8.0 * lambda * std::pow(c2, 4) * bracket;
        out.psi3_closed += cplx(0, -4) * lambda * (2.0 * dblp + cbv) * std::exp(cplx(0, half)) *
                           std::pow(c2, 3);
    }
    out.type_n_candidate = std::abs(out.del_I_bar) < tol;
    return out;
}

// Gauge transformation generated by (h != 0, t0):
//   mu' = h^{-1}(mu + i conj(t0) lambda),  lambda' = |h|^{-2} lambda,
//   c' = h(c - t0 - del log(h hbar)),      t' = h(t - t0).
struct GaugeTransformResult {
    CRStructure cr;        // (lambda', mu')
    ScalarField c_prime;   // transformation law for the structure function
    ScalarField t_prime;
};

inline GaugeTransformResult gauge_transform(const CRStructure& cr, const ScalarField& t,
                                            const ScalarField& h, const ScalarField& t0) {
    ScalarField hb = f_conj(h);
    ScalarField hh = h * hb;
    ScalarField c = structure_function_c(cr);
    GaugeTransformResult out;
    out.cr.chart = cr.chart;
    ScalarField hinv = ScalarField([h](std::span<const double> pt, int k) {
        Jet hj = h(pt, k);
        if (std::abs(hj.value()) < 1e-14) throw domain_error("gauge_transform: h vanishes");
        return recip(hj);
    });
    out.cr.mu = hinv * (cr.mu + (cplx(0, 1) * f_conj(t0)) * cr.lambda);
    out.cr.lambda = (ScalarField::constant(1.0, cr.chart.dim()) / hh) * cr.lambda;
    out.c_prime = h * (c - t0 - cr_apply(cr, hh, CROp::Del) / hh);
    out.t_prime = h * (t - t0);
    return out;
}

}  // namespace nullframe
