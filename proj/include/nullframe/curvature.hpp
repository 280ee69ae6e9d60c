#pragma once

// Curvature from the second structure equation
//   d Gamma^i_j + Gamma^i_k ^ Gamma^k_j = 1/2 R^i_{jkl} theta^k ^ theta^l,
// with Ricci R_ij = R^k_{ikj}, scalar R = g^{ij} R_ij, the Weyl tensor, the
// Weyl scalars Psi_0..Psi_4 in the adapted frame, and residuals of the
// Einstein blocks (a) R22 = R24 = R44 = 0, (b) R12 = R34 = Lambda,
// (c) R33 = R23 = R13 = 0.

#include <array>
#include <cmath>

#include "nullframe/coframe.hpp"

namespace nullframe {

struct WeylScalars {
    cplx psi0, psi1, psi2, psi3, psi4;

    cplx operator[](int k) const {
        switch (k) {
            case 0: return psi0;
            case 1: return psi1;
            case 2: return psi2;
            case 3: return psi3;
            default: return psi4;
        }
    }
    double norm_inf() const {
        double m = 0;
        for (int k = 0; k < 5; ++k) m = std::max(m, std::abs((*this)[k]));
        return m;
    }
};

struct CurvaturePacket {
    // all frame components; 1-based frame indices stored 0-based
    std::array<std::array<std::array<std::array<cplx, 4>, 4>, 4>, 4> riemann_low{};
    std::array<std::array<cplx, 4>, 4> ricci{};
    cplx ricci_scalar{};
    std::array<std::array<std::array<std::array<cplx, 4>, 4>, 4>, 4> weyl_low{};
    WeylScalars psi{};
    double scale = 1;  // max(1, |Psi_2|, |Riemann|_inf), tolerance reference

    // identity residuals (absolute)
    double antisymmetry = 0;
    double pair_symmetry = 0;
    double first_bianchi = 0;
    double weyl_trace = 0;
};

inline CurvaturePacket curvature_packet(const NullCoframe& cf, std::span<const double> pt) {
    ConnectionForms cn = connection(cf, pt, 2);  // gamma jets at order 1
    FrameJets fr0 = eval_frame(cf, pt, 0);

    // curvature 2-forms F^i_j = d Gamma^i_j + Gamma^i_k ^ Gamma^k_j
    std::array<std::array<std::array<std::array<cplx, 4>, 4>, 4>, 4> rup{};
    const auto& combos2 = form_combos(4, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            FormValue f = exterior_derivative(cn.gamma_form_up(i, j));
            for (int k = 0; k < 4; ++k)
                f += wedge(cn.gamma_form_up(i, k).truncated(0), cn.gamma_form_up(k, j).truncated(0));
            std::vector<Jet> fc = to_frame(f, fr0);
            // F^i_j = 1/2 R^i_{jkl} theta^k ^ theta^l  =>  R^i_{jkl} = F^i_j(e_k, e_l)
            for (std::size_t t = 0; t < combos2.size(); ++t) {
                int k = combos2[t][0], l = combos2[t][1];
                cplx v = fc[t].value();
                rup[i][j][k][l] = v;
                rup[i][j][l][k] = -v;
            }
        }

    CurvaturePacket p;
    auto& rl = p.riemann_low;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    rl[i][j][k][l] =
                        rup[metric_dual(i)][j][k][l];

    double rnorm = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) rnorm = std::max(rnorm, std::abs(rl[i][j][k][l]));

    // Ricci and scalar: R_ij = R^k_{ikj}, R = g^{ij} R_ij with g^{12}=g^{34}=1
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx s = 0;
            for (int k = 0; k < 4; ++k) s += rup[k][i][k][j];
            p.ricci[i][j] = s;
        }
    p.ricci_scalar = 2.0 * (p.ricci[0][1] + p.ricci[2][3]);

    // Weyl: C_ijkl = R_ijkl + R/6 (g_ik g_lj - g_il g_kj)
    //       + 1/2 (g_il R_kj - g_ik R_lj + g_jk R_li - g_jl R_ki)
    auto g = [](int a, int b) { return (b == metric_dual(a)) ? 1.0 : 0.0; };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    cplx w = rl[i][j][k][l];
                    w += p.ricci_scalar / 6.0 * (g(i, k) * g(l, j) - g(i, l) * g(k, j));
                    w += 0.5 * (g(i, l) * p.ricci[k][j] -
                                g(i, k) * p.ricci[l][j] +
                                g(j, k) * p.ricci[l][i] -
                                g(j, l) * p.ricci[k][i]);
                    p.weyl_low[i][j][k][l] = w;
                }

    // Weyl scalars in 1-based frame indices: Psi0 = R_4141, Psi1 = (R_4341 + R_1421)/2,
    // Psi2 = C_4132, Psi3 = (R_3432 + R_2312)/2, Psi4 = R_3232.
    auto R = [&](int a, int b, int c, int d) { return rl[a - 1][b - 1][c - 1][d - 1]; };
    auto C = [&](int a, int b, int c, int d) { return p.weyl_low[a - 1][b - 1][c - 1][d - 1]; };
    p.psi.psi0 = R(4, 1, 4, 1);
    p.psi.psi1 = 0.5 * (R(4, 3, 4, 1) + R(1, 4, 2, 1));
    p.psi.psi2 = C(4, 1, 3, 2);
    p.psi.psi3 = 0.5 * (R(3, 4, 3, 2) + R(2, 3, 1, 2));
    p.psi.psi4 = R(3, 2, 3, 2);

    p.scale = std::max({1.0, std::abs(p.psi.psi2), rnorm});

    // identity residuals
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    cplx v = rl[i][j][k][l];
                    p.antisymmetry = std::max(p.antisymmetry,
                                              std::abs(v + rl[j][i][k][l]));
                    p.pair_symmetry = std::max(p.pair_symmetry,
                                               std::abs(v - rl[k][l][i][j]));
                    cplx b = v + rl[i][k][l][j] +
                             rl[i][l][j][k];
                    p.first_bianchi = std::max(p.first_bianchi, std::abs(b));
                }
    // Weyl tracelessness: contract first/third slots with g^{ij}
    for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) {
            cplx tr = 0;
            for (int i = 0; i < 4; ++i)
                tr += p.weyl_low[metric_dual(i)][j][i][l];
            p.weyl_trace = std::max(p.weyl_trace, std::abs(tr));
        }
    return p;
}

struct RicciBlockResiduals {
    double res_a = 0;   // max |R22|, |R24|, |R44|
    double res_b = 0;   // max |R12 - Lambda|, |R34 - Lambda|
    double res_c = 0;   // max |R33|, |R23|, |R13|
    double r44_imag = 0;
    double scale = 1;
};

inline RicciBlockResiduals ricci_blocks(const CurvaturePacket& p, double lambda = 0.0) {
    RicciBlockResiduals r;
    auto ric = [&](int a, int b) { return p.ricci[a - 1][b - 1]; };
    r.res_a = std::max({std::abs(ric(2, 2)), std::abs(ric(2, 4)), std::abs(ric(4, 4))});
    r.res_b = std::max(std::abs(ric(1, 2) - lambda), std::abs(ric(3, 4) - lambda));
    r.res_c = std::max({std::abs(ric(3, 3)), std::abs(ric(2, 3)), std::abs(ric(1, 3))});
    r.r44_imag = std::abs(ric(4, 4).imag());
    r.scale = p.scale;
    return r;
}

}  // namespace nullframe
