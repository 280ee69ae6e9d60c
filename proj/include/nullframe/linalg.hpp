#pragma once

// Small dense linear algebra over the jet ring: Gauss-Jordan inversion with
// partial pivoting on coefficient values. Jets form a commutative ring in
// which division by any element with nonzero value is exact, so the inverse
// of a matrix of jets is the jet of the inverse-matrix field.

#include <array>
#include <cmath>

#include "nullframe/errors.hpp"
#include "nullframe/jet.hpp"

namespace nullframe {

template <int N>
struct JetMat {
    std::array<Jet, static_cast<std::size_t>(N * N)> m;
    Jet& operator()(int r, int c) { return m[r * N + c]; }
    const Jet& operator()(int r, int c) const { return m[r * N + c]; }
};

// Infinity-norm condition estimate from the value parts.
template <int N>
double value_cond(const JetMat<N>& a, const JetMat<N>& inv) {
    auto norm = [](const JetMat<N>& x) {
        double best = 0;
        for (int r = 0; r < N; ++r) {
            double row = 0;
            for (int c = 0; c < N; ++c) row += std::abs(x(r, c).value());
            best = std::max(best, row);
        }
        return best;
    };
    return norm(a) * norm(inv);
}

template <int N>
JetMat<N> jet_mat_inverse(const JetMat<N>& in, double* cond_out = nullptr) {
    JetMat<N> a = in;
    const int nv = in(0, 0).nvars();
    const int ord = in(0, 0).order();
    JetMat<N> inv;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) inv(r, c) = Jet::constant(r == c ? 1.0 : 0.0, nv, ord);

    for (int col = 0; col < N; ++col) {
        int piv = col;
        double best = std::abs(a(col, col).value());
        for (int r = col + 1; r < N; ++r) {
            double v = std::abs(a(r, col).value());
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < 1e-300) throw singular_frame_error("singular matrix over jets", 0.0);
        if (piv != col)
            for (int c = 0; c < N; ++c) {
                std::swap(a(piv, c), a(col, c));
                std::swap(inv(piv, c), inv(col, c));
            }
        Jet scale = recip(a(col, col));
        for (int c = 0; c < N; ++c) {
            a(col, c) = scale * a(col, c);
            inv(col, c) = scale * inv(col, c);
        }
        for (int r = 0; r < N; ++r) {
            if (r == col) continue;
            Jet f = a(r, col);
            if (f.norm_inf() == 0.0) continue;
            for (int c = 0; c < N; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    if (cond_out) *cond_out = value_cond(in, inv);
    return inv;
}

// Plain real 4x4 inverse (used by value-level metric work).
inline std::array<std::array<double, 4>, 4> invert4_real(const std::array<std::array<double, 4>, 4>& g) {
    std::array<std::array<double, 8>, 4> a{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) a[r][c] = g[r][c];
        a[r][4 + r] = 1.0;
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) throw singular_frame_error("singular metric", 0.0);
        std::swap(a[piv], a[col]);
        double s = 1.0 / a[col][col];
        for (int c = 0; c < 8; ++c) a[col][c] *= s;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            double f = a[r][col];
            for (int c = 0; c < 8; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::array<std::array<double, 4>, 4> out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[r][c] = a[r][4 + c];
    return out;
}

}  // namespace nullframe
