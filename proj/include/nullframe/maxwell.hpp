#pragma once

// 2-form electromagnetism in the null frame. The Hodge star on 2-forms uses
// the frame metric g_12 = g_34 = 1 with the volume normalization fixed once by
// *(theta^3 ^ theta^1) = -i theta^3 ^ theta^1, so the aligned fields
// F = f lambda ^ mu are anti-self-dual. On 2-forms ** = -1 (Lorentzian).

#include <array>
#include <cmath>

#include "nullframe/coframe.hpp"
#include "nullframe/cr_structure.hpp"

namespace nullframe {

namespace detail {

inline int levi_civita4(int i, int j, int k, int l) {
    int p[4] = {i, j, k, l};
    int sign = 1;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            if (p[a] == p[b]) return 0;
            if (p[a] > p[b]) sign = -sign;
        }
    return sign;
}

}  // namespace detail

// Star of a 2-form given by frame components w[t], t indexing the increasing
// pairs of form_combos(4, 2): (*w)_ij = (i/2) eps_ijkl w^{kl},
// w^{kl} = w_{dual(k) dual(l)}.
inline std::array<cplx, 6> hodge_star_frame(const std::array<cplx, 6>& w) {
    const auto& combos = form_combos(4, 2);
    auto get = [&](int i, int j) -> cplx {
        if (i == j) return 0;
        int s = 1, a = i, b = j;
        if (a > b) {
            std::swap(a, b);
            s = -1;
        }
        int arr[2] = {a, b};
        int t = combo_index(4, 2, std::span<const int>(arr, 2));
        return double(s) * w[t];
    };
    std::array<cplx, 6> out{};
    for (std::size_t t = 0; t < combos.size(); ++t) {
        int i = combos[t][0], j = combos[t][1];
        cplx acc = 0;
        for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) {
                int eps = detail::levi_civita4(i, j, k, l);
                if (eps == 0) continue;
                acc += double(eps) * get(metric_dual(k), metric_dual(l));
            }
        out[t] = cplx(0, 0.5) * acc;
    }
    return out;
}

// Star of a coordinate-component 2-form at a point, through the frame.
inline FormValue hodge_star(const NullCoframe& cf, const FormValue& w, std::span<const double> pt) {
    FrameJets fr = eval_frame(cf, pt, w.order());
    std::vector<Jet> fc = to_frame(w, fr);
    std::array<cplx, 6> comps{};
    for (std::size_t t = 0; t < 6; ++t) comps[t] = fc[t].value();
    std::array<cplx, 6> starred = hodge_star_frame(comps);
    // back to coordinates: w'_ab = sum_{i<j} (*w)_ij (theta^i_a theta^j_b - theta^i_b theta^j_a)
    FormValue out = FormValue::zero(4, 2, 0);
    const auto& combos = form_combos(4, 2);
    const auto& cc = form_combos(4, 2);
    for (std::size_t t = 0; t < combos.size(); ++t) {
        int i = combos[t][0], j = combos[t][1];
        for (std::size_t u = 0; u < cc.size(); ++u) {
            int a = cc[u][0], b = cc[u][1];
            cplx v = fr.theta[i][a].value() *
                         fr.theta[j][b].value() -
                     fr.theta[i][b].value() *
                         fr.theta[j][a].value();
            out.comps[u] += starred[t] * v * Jet::constant(1.0, 4, 0);
        }
    }
    return out;
}

// Residuals of the aligned-field conditions for F = f lambda ^ mu at a point:
// d F = 0 (4-chart), F ^ F = 0, *F = -i F, and the structure-level equation
// del fbar + c fbar = 0 evaluated on the internally normalized data with
// f~ = omega f (so that f~ lambda' ^ mu = f lambda ^ mu).
struct MaxwellCheckResult {
    double dF_residual = 0;
    double nullness = 0;
    double asd_residual = 0;
    cplx nbm = 0;
    double nbm_cross_residual = 0;   // 3-chart exterior route vs operator route
    double equivalence_residual = 0; // 4-chart dF coefficient vs conj(nbm)
};

inline MaxwellCheckResult maxwell_check(const CRStructure& cr, bool normalized,
                                        const NullCoframe& cf, const ScalarField& f,
                                        std::span<const double> pt) {
    MaxwellCheckResult out;

    CRStructure crn = normalized ? cr : normalize_lambda(cr);
    ScalarField ft = normalized ? f : levi_field(cr) * f;
    auto nbm = residual_maxwell_nbm(crn, ft, pt);
    out.nbm = nbm.nbm;
    out.nbm_cross_residual = nbm.cross_residual;

    // 4-chart F = f lambda ^ mu, r-independent
    FormField F = f.promoted(4) * wedge(cr.lambda.pulled_back_to(4), cr.mu.pulled_back_to(4));
    Point pt3(pt.begin(), pt.begin() + 3);
    FormValue Fv = F.at(pt, 1);
    FormValue dF = exterior_derivative(Fv);
    for (auto& c : dF.comps) out.dF_residual = std::max(out.dF_residual, std::abs(c.value()));

    FormValue FF = wedge(Fv.truncated(0), Fv.truncated(0));
    for (auto& c : FF.comps) out.nullness = std::max(out.nullness, std::abs(c.value()));

    FormValue star = hodge_star(cf, Fv.truncated(0), pt);
    for (std::size_t k = 0; k < star.comps.size(); ++k)
        out.asd_residual = std::max(out.asd_residual,
                                    std::abs(star.comps[k].value() + cplx(0, 1) * Fv.comps[k].value()));

    // coefficient of d F against lambda' ^ mu ^ mubar equals conj(nbm)
    FormValue lamp = crn.lambda.pulled_back_to(4).at(pt, 0);
    FormValue mup = cr.mu.pulled_back_to(4).at(pt, 0);
    FormValue basis = wedge(lamp, wedge(mup, conj(mup)));
    cplx coeff = extract_coefficient(dF, basis).q;
    out.equivalence_residual = std::abs(std::conj(coeff) - out.nbm);
    return out;
}

}  // namespace nullframe
