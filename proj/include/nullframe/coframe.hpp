#pragma once

// Null coframes theta^1..theta^4 on a 4-chart with the rigid frame metric
// g_12 = g_34 = 1 (complex conjugation swaps frame indices 1<->2 and fixes
// 3, 4). Provides frame decomposition, structure coefficients, the
// metric-compatible torsion-free connection solving the first structure
// equation, optical scalars and the adapted coframe transformations.
//
// Code uses 0-based frame indices: conventional labels 1,2,3,4 -> 0,1,2,3.

#include <array>
#include <cmath>
#include <complex>
#include <span>

#include "nullframe/chart.hpp"
#include "nullframe/errors.hpp"
#include "nullframe/forms.hpp"
#include "nullframe/jet.hpp"
#include "nullframe/linalg.hpp"

namespace nullframe {

// Frame-index involution implementing raising/lowering with g_12 = g_34 = 1.
inline constexpr int metric_dual(int i) { return i ^ 1; }

struct NullCoframe {
    Chart chart;  // 4 coordinates, r last by convention
    std::array<FormField, 4> theta;
};

// Coframe and inverse-frame jets at a point: theta[i][a] are coordinate
// components of theta^i, inv[a][i] those of the dual frame vector e_i.
struct FrameJets {
    int order = 0;
    std::array<std::array<Jet, 4>, 4> theta;
    std::array<std::array<Jet, 4>, 4> inv;
    double cond = 0;
};

inline constexpr double kFrameConditionLimit = 1e8;

inline std::array<std::array<cplx, 4>, 4> coframe_values(const NullCoframe& cf, std::span<const double> pt) {
    std::array<std::array<cplx, 4>, 4> v{};
    for (int i = 0; i < 4; ++i) {
        FormValue w = cf.theta[i].at(pt, 0);
        for (int a = 0; a < 4; ++a) v[i][a] = w.comps[a].value();
    }
    return v;
}

inline FrameJets eval_frame(const NullCoframe& cf, std::span<const double> pt, int order) {
    FrameJets fr;
    fr.order = order;
    JetMat<4> m;
    for (int i = 0; i < 4; ++i) {
        FormValue w = cf.theta[i].at(pt, order);
        for (int a = 0; a < 4; ++a) {
            fr.theta[i][a] = w.comps[a];
            m(i, a) = w.comps[a];
        }
    }
    JetMat<4> mi = jet_mat_inverse<4>(m, &fr.cond);
    if (!(fr.cond < kFrameConditionLimit))
        throw singular_frame_error("degenerate coframe (condition " + std::to_string(fr.cond) + ")", fr.cond);
    // m(i,a) = theta^i_a; inverse gives (mi)(a,i) = e_i^a
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 4; ++i) fr.inv[a][i] = mi(a, i);
    return fr;
}

// Frame components of a p-form (jet-valued): T_{i1..ip} = T(e_{i1},..,e_{ip})
// for increasing frame tuples, via p x p determinants of inverse-frame jets.
inline std::vector<Jet> to_frame(const FormValue& w, const FrameJets& fr) {
    const int n = 4, p = w.degree;
    const int ord = std::min(w.order(), fr.order);
    const auto& combos = form_combos(n, p);
    std::vector<Jet> out(combos.size(), Jet::zero(n, ord));
    for (std::size_t t = 0; t < combos.size(); ++t) {
        Jet acc = Jet::zero(n, ord);
        for (std::size_t s = 0; s < combos.size(); ++s) {
            // det of the p x p matrix M[r][c] = e_{combo_t[c]}^{combo_s[r]}
            Jet det = Jet::zero(n, ord);
            if (p == 1) {
                det = fr.inv[combos[s][0]][combos[t][0]].truncated(ord);
            } else if (p == 2) {
                auto e = [&](int r, int c) {
                    return fr.inv[combos[s][r]][combos[t][c]].truncated(ord);
                };
                det = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
            } else {
                // p = 3 or 4: Laplace expansion over permutations
                std::array<int, 4> perm{};
                for (int i = 0; i < p; ++i) perm[i] = i;
                auto e = [&](int r, int c) {
                    return fr.inv[combos[s][r]][combos[t][c]].truncated(ord);
                };
                // iterate permutations of 0..p-1
                std::array<int, 4> idx = perm;
                bool first = true;
                while (true) {
                    if (!first) {
                        int i = p - 2;
                        while (i >= 0 && idx[i] >= idx[i + 1]) --i;
                        if (i < 0) break;
                        int j = p - 1;
                        while (idx[j] <= idx[i]) --j;
                        std::swap(idx[i], idx[j]);
                        for (int l = i + 1, rr = p - 1; l < rr; ++l, --rr)
                            std::swap(idx[l], idx[rr]);
                    }
                    first = false;
                    int invs = 0;
                    for (int x = 0; x < p; ++x)
                        for (int y = x + 1; y < p; ++y)
                            if (idx[x] > idx[y]) ++invs;
                    Jet term = e(0, idx[0]);
                    for (int r = 1; r < p; ++r) term = term * e(r, idx[r]);
                    det += (invs % 2 == 0) ? term : -term;
                }
            }
            acc += w.comps[s].truncated(ord) * det;
        }
        out[t] = acc;
    }
    return out;
}

inline std::array<cplx, 4> frame_decompose(const FormValue& omega, const FrameJets& fr) {
    if (omega.degree != 1) throw mismatch_error("frame_decompose expects a 1-form");
    std::array<cplx, 4> out{};
    for (int i = 0; i < 4; ++i) {
        cplx s = 0;
        for (int a = 0; a < 4; ++a)
            s += omega.comps[a].value() * fr.inv[a][i].value();
        out[i] = s;
    }
    return out;
}

// Structure coefficients c^i_{jk} (jets, one order below the frame order),
// defined by d theta^i = -1/2 c^i_{jk} theta^j ^ theta^k.
struct StructureCoefficients {
    int order = 0;
    std::array<std::array<std::array<Jet, 4>, 4>, 4> c;  // [i][j][k], antisymmetric in j,k
};

inline StructureCoefficients structure_coefficients(const NullCoframe& cf, std::span<const double> pt,
                                                    int order) {
    FrameJets fr = eval_frame(cf, pt, order);
    StructureCoefficients sc;
    sc.order = order - 1;
    for (int i = 0; i < 4; ++i) {
        FormValue dth = exterior_derivative(cf.theta[i].at(pt, order));
        std::vector<Jet> comps = to_frame(dth, fr);  // increasing (j,k) frame components
        const auto& combos = form_combos(4, 2);
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) sc.c[i][j][k] = Jet::zero(4, order - 1);
        for (std::size_t t = 0; t < combos.size(); ++t) {
            int j = combos[t][0], k = combos[t][1];
            // d theta^i (e_j, e_k) = -c^i_{jk}
            Jet v = -comps[t];
            sc.c[i][j][k] = v;
            sc.c[i][k][j] = -v;
        }
    }
    return sc;
}

// Levi-Civita connection in the rigid frame: 1-forms Gamma_ij = gamma_ijk theta^k
// with Gamma_ij = -Gamma_ji and d theta^i + Gamma^i_j ^ theta^j = 0. With the
// structure convention above the solution is
//   gamma_ijk = 1/2 (c_kij - c_ijk - c_jki),   c_ijk = g_im c^m_jk.
struct ConnectionForms {
    int order = 0;
    std::array<std::array<std::array<Jet, 4>, 4>, 4> gamma;  // gamma_ijk (all indices down)
    FrameJets frame;

    Jet gamma_up(int i, int j, int k) const {  // gamma^i_{jk}
        return gamma[metric_dual(i)][j][k];
    }

    // Coordinate components of Gamma^i_j as a jet-valued 1-form.
    FormValue gamma_form_up(int i, int j) const {
        FormValue w = FormValue::zero(4, 1, order);
        for (int k = 0; k < 4; ++k)
            for (int a = 0; a < 4; ++a)
                w.comps[a] +=
                    gamma_up(i, j, k) * frame.theta[k][a].truncated(order);
        return w;
    }

    FormValue gamma_form_low(int i, int j) const { return gamma_form_up(metric_dual(i), j); }
};

inline ConnectionForms connection(const NullCoframe& cf, std::span<const double> pt, int order) {
    StructureCoefficients sc = structure_coefficients(cf, pt, order);
    ConnectionForms cn;
    cn.order = order - 1;
    cn.frame = eval_frame(cf, pt, order);
    auto clow = [&](int i, int j, int k) {
        return sc.c[metric_dual(i)][j][k];
    };
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                Jet g = 0.5 * (clow(k, i, j) - clow(i, j, k) - clow(j, k, i));
                // store the antisymmetric pair from one evaluation so that
                // Gamma_ij = -Gamma_ji holds exactly
                cn.gamma[i][j][k] = g;
                cn.gamma[j][i][k] = -g;
                if (i == j) cn.gamma[i][j][k] = Jet::zero(4, cn.order);
            }
    return cn;
}

// Optical scalars of the congruence direction k = e_4 dual to theta^4, read from
// the 4-form ratios  d theta^3 ^ theta^1 ^ theta^3 = -conj(kappa) vol  and
// d theta^1 ^ theta^1 ^ theta^3 = -conj(sigma) vol, the theta^1^2^3 component
// of d theta^3 ^ theta^3, and the expansion of Gamma_24 in theta^1, theta^3.
struct OpticalScalars {
    cplx kappa, sigma, tau, rho;
    double twist = 0;      // Omega
    double expansion = 0;  // Theta
    double twist_consistency = 0;  // |Omega(structure) - 2 Im rho(connection)|
    bool shearfree_geodesic = false;
    bool twisting = false;
    bool diverging = false;
};

inline OpticalScalars optical_scalars(const NullCoframe& cf, std::span<const double> pt,
                                      double tol = 1e-7) {
    const int ord = 1;
    FrameJets fr = eval_frame(cf, pt, ord);
    std::array<FormValue, 4> th;
    for (int i = 0; i < 4; ++i) th[i] = cf.theta[i].at(pt, ord);
    FormValue dth3 = exterior_derivative(th[2]);
    FormValue dth1 = exterior_derivative(th[0]);
    FormValue vol = wedge(wedge(th[0].truncated(0), th[1].truncated(0)), wedge(th[2].truncated(0), th[3].truncated(0)));

    OpticalScalars os;
    auto ratio_to_vol = [&](const FormValue& f) {
        return extract_coefficient(f, vol).q;
    };
    FormValue t13 = wedge(th[0].truncated(0), th[2].truncated(0));
    os.kappa = std::conj(-ratio_to_vol(wedge(dth3, t13)));
    os.sigma = std::conj(-ratio_to_vol(wedge(dth1, t13)));

    // twist from the theta^1 ^ theta^2 ^ theta^3 frame component of d theta^3 ^ theta^3
    FormValue t3wedge = wedge(dth3, th[2].truncated(0));
    std::vector<Jet> f3 = to_frame(t3wedge, fr);
    const auto& c3 = form_combos(4, 3);
    cplx i_omega = 0;
    for (std::size_t t = 0; t < c3.size(); ++t)
        if (c3[t][0] == 0 && c3[t][1] == 1 && c3[t][2] == 2) i_omega = f3[t].value();
    double omega = (i_omega / cplx(0, 1)).real();

    // rho, tau from Gamma_24 = -conj(rho) theta^1 - conj(tau) theta^3
    ConnectionForms cn = connection(cf, pt, ord);
    cplx g24_1 = cn.gamma[1][3][0].value();  // Gamma_24 component along theta^1
    cplx g24_3 = cn.gamma[1][3][2].value();  // along theta^3
    cplx rho_conn = std::conj(-g24_1);
    os.tau = std::conj(-g24_3);
    os.expansion = -2.0 * rho_conn.real();
    os.twist = omega;
    os.rho = 0.5 * cplx(-os.expansion, os.twist);
    os.twist_consistency = std::abs(omega - 2.0 * rho_conn.imag());

    double scl = std::max(1.0, std::abs(os.rho) + std::abs(os.tau));
    os.shearfree_geodesic = std::abs(os.kappa) < tol * scl && std::abs(os.sigma) < tol * scl;
    os.twisting = std::abs(os.twist) > tol * scl;
    os.diverging = std::abs(os.rho) > tol * scl;
    return os;
}

// Adapted coframe transformation preserving the null direction:
//   theta^1' = e^{i phi}(theta^1 + conj(B) theta^3)
//   theta^2' = e^{-i phi}(theta^2 + B theta^3)
//   theta^3' = A theta^3
//   theta^4' = A^{-1}(theta^4 - B theta^1 - conj(B) theta^2 - B conj(B) theta^3)
inline NullCoframe adapted_transform(const NullCoframe& cf, ScalarField A, ScalarField phi,
                                     ScalarField B) {
    NullCoframe out;
    out.chart = cf.chart;
    ScalarField eip = f_exp(cplx(0, 1) * phi);
    ScalarField eim = f_exp(cplx(0, -1) * phi);
    ScalarField Bc = f_conj(B);
    ScalarField Ainv = ScalarField::constant(1.0, 4) / A;
    out.theta[0] = eip * cf.theta[0] + (eip * Bc) * cf.theta[2];
    out.theta[1] = eim * cf.theta[1] + (eim * B) * cf.theta[2];
    out.theta[2] = A * cf.theta[2];
    out.theta[3] = Ainv * cf.theta[3] + (-Ainv * B) * cf.theta[0] + (-Ainv * Bc) * cf.theta[1] +
                   (-Ainv * B * Bc) * cf.theta[2];
    return out;
}

// Symmetric metric tensor components g_ab = 2(theta^1 theta^2 + theta^3 theta^4)
// at a point (value level), for invariance checks and coordinate oracles.
inline std::array<std::array<cplx, 4>, 4> metric_values(const NullCoframe& cf, std::span<const double> pt) {
    auto th = coframe_values(cf, pt);
    std::array<std::array<cplx, 4>, 4> g{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            g[a][b] =
                th[0][a] * th[1][b] +
                th[0][b] * th[1][a] +
                th[2][a] * th[3][b] +
                th[2][b] * th[3][a];
    return g;
}

// Residual of the first structure equation d theta^i + Gamma^i_j ^ theta^j = 0
// and of the conjugation rule Gamma_24 = conj(Gamma_14) etc., at value level.
struct StructureEquationResiduals {
    double first_structure = 0;
    double conjugation = 0;
    double reality = 0;  // Im theta^3, Im theta^4, theta^2 - conj theta^1
};

inline StructureEquationResiduals structure_equation_residuals(const NullCoframe& cf,
                                                               std::span<const double> pt) {
    StructureEquationResiduals r;
    ConnectionForms cn = connection(cf, pt, 2);
    std::array<FormValue, 4> th;
    for (int i = 0; i < 4; ++i) th[i] = cf.theta[i].at(pt, 1);
    for (int i = 0; i < 4; ++i) {
        FormValue lhs = exterior_derivative(th[i]);
        for (int j = 0; j < 4; ++j)
            lhs += wedge(cn.gamma_form_up(i, j).truncated(0), th[j].truncated(0));
        r.first_structure = std::max(r.first_structure, lhs.norm_inf());
    }
    // conjugation swaps 1<->2 (0<->1 here) and fixes 3,4
    auto cswap = [](int i) { return i < 2 ? 1 - i : i; };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                cplx a = cn.gamma[i][j][k].value();
                cplx b = cn.gamma[cswap(i)][cswap(j)][cswap(k)].value();
                r.conjugation = std::max(r.conjugation, std::abs(std::conj(a) - b));
            }
    for (int a = 0; a < 4; ++a) {
        r.reality = std::max(r.reality, std::abs(th[2].comps[a].value().imag()));
        r.reality = std::max(r.reality, std::abs(th[3].comps[a].value().imag()));
        r.reality = std::max(r.reality, std::abs(th[1].comps[a].value() -
                                                 std::conj(th[0].comps[a].value())));
    }
    return r;
}

}  // namespace nullframe
