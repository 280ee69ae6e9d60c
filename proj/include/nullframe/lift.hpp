#pragma once

// Lifts of a CR structure (lambda, mu) on M to null coframes on the 4-chart
// (M-coordinates, r):
//
//   theta^1 = P mu,  theta^2 = P mubar,  theta^3 = P lambda,
//   theta^4 = P (dr + W mu + Wbar mubar + H lambda),
//
// which induces g = 2 P^2 [mu mubar + lambda(dr + W mu + Wbar mubar + H lambda)].
// lift_reduced assembles P, W, H from r-independent data (p, s, t, m, Lambda)
// on M so that the Einstein block (a) and the constant-scalar part of (b)
// hold whenever t solves del t + (c - t) t = 0; lift_fefferman is the
// r-independent subfamily P = 1, W = -(i/3) c, H = -(1/12)(del cbar + delbar c).

#include <cmath>

#include "nullframe/coframe.hpp"
#include "nullframe/cr_structure.hpp"

namespace nullframe {

struct LiftParameters {
    ScalarField p;  // real, nonvanishing
    ScalarField s;  // real
    ScalarField t;  // complex
    ScalarField m;  // complex
    double Lambda = 0;
};

// theta^4 component fields from W (complex) and H (real) on the 4-chart.
inline NullCoframe lift_general(const CRStructure& cr, ScalarField P, ScalarField W, ScalarField H) {
    NullCoframe cf;
    cf.chart = cr.chart.with_r();
    FormField mu4 = cr.mu.pulled_back_to(4);
    FormField mub4 = conj(mu4);
    FormField lam4 = cr.lambda.pulled_back_to(4);
    FormField dr = FormField::zero(4, 1);
    dr.comps[3] = ScalarField::constant(1.0, 4);
    cf.theta[0] = P * mu4;
    cf.theta[1] = P * mub4;
    cf.theta[2] = P * lam4;
    FormField inner = dr + W * mu4 + f_conj(W) * mub4 + H * lam4;
    cf.theta[3] = P * inner;
    return cf;
}

// Derived 4-chart fields of the reduced lift, exposed for structural checks.
struct ReducedLiftFields {
    ScalarField P, W, H;      // on the 4-chart
    ScalarField x, y, Q, h;   // x, y, Q, h on M (3-chart)
};

inline ReducedLiftFields reduced_lift_fields(const CRStructure& cr, const LiftParameters& par) {
    ScalarField c = structure_function_c(cr);
    auto D = [&](ScalarField f) { return cr_apply(cr, f, CROp::Del); };
    auto Db = [&](ScalarField f) { return cr_apply(cr, f, CROp::DelBar); };
    auto D0 = [&](ScalarField f) { return cr_apply(cr, f, CROp::D0); };

    ScalarField p = par.p, s = par.s, t = par.t, m = par.m;
    ScalarField dlogp = D(p) / p;
    ScalarField tb = f_conj(t), cb = f_conj(c), mb = f_conj(m);
    const cplx I(0, 1);

    // e^{is} x = c + 2 del log p - t   and   y = i c + 2 i del log p + del s - 2 i t
    ScalarField x = f_exp(cplx(0, -1) * s) * (c + 2.0 * dlogp - t);
    ScalarField y = I * c + 2.0 * I * dlogp + D(s) - 2.0 * I * t;

    ScalarField p2 = p * p, p4 = p2 * p2;
    ScalarField grad_term = (2.0 * (D(p) * Db(p)) - p * (D(Db(p)) + Db(D(p))));
    ScalarField Q = (3.0 * m + mb) / p4 + cplx(2.0 / 3.0 * par.Lambda) * p2 +
                    grad_term / (2.0 * p2) - 0.5 * I * D0(p) / p - 2.0 * (t * Db(p)) -
                    tb * dlogp + 1.5 * Db(t) - cb * t - 0.5 * (c * tb) + 2.5 * (t * tb) +
                    D(tb) - Db(c);
    ScalarField h = 3.0 * (m + mb) / p4 + cplx(2.0 * par.Lambda) * p2 + grad_term / p2 -
                    3.0 * (t * (Db(p) / p) + tb * dlogp) + 2.5 * (D(tb) + Db(t)) +
                    6.0 * (t * tb) - 1.5 * (c * tb + cb * t) - 2.0 * Db(c) + D0(s);

    ReducedLiftFields out;
    out.x = x;
    out.y = y;
    out.Q = Q;
    out.h = h;

    ScalarField p4c = p.promoted(4), s4 = s.promoted(4);
    ScalarField x4 = x.promoted(4), y4 = y.promoted(4);
    ScalarField Q4 = Q.promoted(4), h4 = h.promoted(4);
    ScalarField m4 = m.promoted(4), p44 = (p4).promoted(4);
    ScalarField r = ScalarField::coordinate(3, 4);

    // P = p / cos((r+s)/2), with the |cos| branch so that the coframe
    // coefficients themselves are 2 pi periodic in r. The two branches differ
    // by the adapted transform with A = -1, phi = pi, which leaves the metric
    // and every reported scalar unchanged.
    ScalarField cos_half = f_cos(0.5 * (r + s4));
    ScalarField abs_cos([cos_half](std::span<const double> pt, int k) {
        Jet c = cos_half(pt, k);
        return c.value().real() < 0.0 ? -c : c;
    });
    out.P = p4c / abs_cos;
    // W = i e^{-ir} x + y
    out.W = I * f_exp(cplx(0, -1) * r) * x4 + y4;
    // H = m/p^4 e^{2i(r+s)} + conj + Q e^{i(r+s)} + conj + h
    ScalarField phase = f_exp(cplx(0, 1) * (r + s4));
    ScalarField phase2 = phase * phase;
    out.H = (m4 / p44) * phase2 + f_conj(m4) / p44 * f_conj(phase2) + Q4 * phase +
            f_conj(Q4) * f_conj(phase) + h4;
    return out;
}

inline NullCoframe lift_reduced(const CRStructure& cr, const LiftParameters& par) {
    ReducedLiftFields f = reduced_lift_fields(cr, par);
    return lift_general(cr, f.P, f.W, f.H);
}

// Fefferman representative: P = 1, W = -(i/3) c, H = -(1/12)(del cbar + delbar c);
// all coefficients r-independent. Curvature of the c-derivative terms consumes
// the full order-4 budget of lambda, mu.
inline NullCoframe lift_fefferman(const CRStructure& cr) {
    ScalarField c = structure_function_c(cr);
    ScalarField W = (cplx(0, -1.0 / 3.0) * c).promoted(4);
    ScalarField H =
        (cplx(-1.0 / 12.0) * (cr_apply(cr, f_conj(c), CROp::Del) + cr_apply(cr, c, CROp::DelBar)))
            .promoted(4);
    return lift_general(cr, ScalarField::constant(1.0, 4), W, H);
}

}  // namespace nullframe
