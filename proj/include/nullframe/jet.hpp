#pragma once

// Truncated multivariate Taylor arithmetic ("jets") over complex coefficients:
// the scalar type on which every differential operator in this library runs.
// A Jet of order K in n real variables stores the Taylor coefficients
// f_alpha = d^alpha f / alpha! for all multi-indices |alpha| <= K, so first
// derivatives are the degree-1 coefficients, second derivatives carry the 1/2!
// factor, and so on. Supported sizes: K in 0..4, n in {3, 4}.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>

#include "nullframe/errors.hpp"

namespace nullframe {

using cplx = std::complex<double>;

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetVars = 4;
inline constexpr int kMaxJetCoeffs = 70;  // C(4+4,4)

namespace detail {

constexpr int binom(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<int>(r);
}

}  // namespace detail

// Per-(nvars, order) multi-index tables: exponent tuples in graded-lex order,
// slot lookup, and the truncated product map. Built once and shared.
class JetLayout {
  public:
    int nvars = 0;
    int order = 0;
    int count = 0;
    std::array<std::array<std::uint8_t, kMaxJetVars>, kMaxJetCoeffs> exps{};
    std::array<std::uint8_t, kMaxJetCoeffs> degree{};
    std::array<int, kMaxJetVars> unit_slot{};  // slot of the multi-index e_i

    static const JetLayout& get(int nvars, int order) {
        if (nvars < 1 || nvars > kMaxJetVars)
            throw order_error("jet variable count " + std::to_string(nvars) + " unsupported");
        if (order < 0 || order > kMaxJetOrder)
            throw order_error("jet order " + std::to_string(order) + " outside 0..4");
        static const std::array<std::array<JetLayout, kMaxJetOrder + 1>, kMaxJetVars> table = [] {
            std::array<std::array<JetLayout, kMaxJetOrder + 1>, kMaxJetVars> t{};
            for (int n = 1; n <= kMaxJetVars; ++n)
                for (int k = 0; k <= kMaxJetOrder; ++k) t[n - 1][k].build(n, k);
            return t;
        }();
        return table[nvars - 1][order];
    }

    int slot_of(std::span<const std::uint8_t> e) const {
        int code = 0, base = 1;
        for (int i = 0; i < nvars; ++i) {
            code += e[i] * base;
            base *= kMaxJetOrder + 1;
        }
        return slot_[code];
    }

    // Slot of the product monomial, or -1 when the total degree exceeds `order`.
    int product_slot(int a, int b) const { return prod_[a * count + b]; }

  private:
    std::array<std::int16_t, 625> slot_{};  // 5^4 mixed-radix codes
    std::array<std::int16_t, kMaxJetCoeffs * kMaxJetCoeffs> prod_{};

    void build(int n, int k) {
        nvars = n;
        order = k;
        slot_.fill(-1);
        // graded-lex: by total degree, then lexicographic on exponents
        count = 0;
        for (int d = 0; d <= k; ++d) enumerate(d, 0, {}, n);
        for (int i = 0; i < n; ++i) {
            std::array<std::uint8_t, kMaxJetVars> e{};
            if (k >= 1) {
                e[i] = 1;
                unit_slot[i] = slot_of(e);
            } else {
                unit_slot[i] = -1;
            }
        }
        for (int a = 0; a < count; ++a)
            for (int b = 0; b < count; ++b) {
                if (degree[a] + degree[b] > k) {
                    prod_[a * count + b] = -1;
                    continue;
                }
                std::array<std::uint8_t, kMaxJetVars> e{};
                for (int i = 0; i < n; ++i) e[i] = static_cast<std::uint8_t>(exps[a][i] + exps[b][i]);
                prod_[a * count + b] = static_cast<std::int16_t>(slot_of(e));
            }
    }

    void enumerate(int remaining, int var, std::array<std::uint8_t, kMaxJetVars> e, int n) {
        if (var == n - 1) {
            e[var] = static_cast<std::uint8_t>(remaining);
            exps[count] = e;
            degree[count] = 0;
            for (int i = 0; i < n; ++i) degree[count] = static_cast<std::uint8_t>(degree[count] + e[i]);
            int code = 0, base = 1;
            for (int i = 0; i < n; ++i) {
                code += e[i] * base;
                base *= kMaxJetOrder + 1;
            }
            slot_[code] = static_cast<std::int16_t>(count);
            ++count;
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            e[var] = static_cast<std::uint8_t>(v);
            enumerate(remaining - v, var + 1, e, n);
        }
    }
};

class Jet {
  public:
    Jet() = default;  // invalid until assigned

    static Jet zero(int nvars, int order) { return Jet(&JetLayout::get(nvars, order)); }

    static Jet constant(cplx v, int nvars, int order) {
        Jet j(&JetLayout::get(nvars, order));
        j.c_[0] = v;
        return j;
    }

    // Coordinate seed: value v, unit derivative along variable i.
    static Jet variable(int i, double v, int nvars, int order) {
        Jet j = constant(v, nvars, order);
        if (order >= 1) j.c_[j.lay_->unit_slot[i]] = 1.0;
        return j;
    }

    bool valid() const { return lay_ != nullptr; }
    int nvars() const { return lay_->nvars; }
    int order() const { return lay_->order; }
    int size() const { return lay_->count; }
    const JetLayout& layout() const { return *lay_; }

    cplx value() const { return c_[0]; }
    cplx coeff(int slot) const { return c_[slot]; }
    cplx& coeff(int slot) { return c_[slot]; }

    // First derivative along variable i (exact: degree-1 Taylor coefficient).
    cplx grad(int i) const {
        if (lay_->order < 1) throw order_error("gradient of an order-0 jet");
        return c_[lay_->unit_slot[i]];
    }

    // The jet of df/dx_i, one order lower.
    Jet derivative(int i) const {
        if (lay_->order < 1) throw order_error("derivative of an order-0 jet: order budget exhausted");
        Jet r(&JetLayout::get(lay_->nvars, lay_->order - 1));
        const JetLayout& rl = *r.lay_;
        for (int t = 0; t < rl.count; ++t) {
            std::array<std::uint8_t, kMaxJetVars> e = rl.exps[t];
            e[i] = static_cast<std::uint8_t>(e[i] + 1);
            int s = lay_->slot_of(e);
            r.c_[t] = static_cast<double>(e[i]) * c_[s];
        }
        return r;
    }

    Jet truncated(int new_order) const {
        if (new_order > lay_->order) throw order_error("cannot extend a jet to higher order");
        if (new_order == lay_->order) return *this;
        Jet r(&JetLayout::get(lay_->nvars, new_order));
        for (int t = 0; t < r.lay_->count; ++t) r.c_[t] = c_[lay_->slot_of(r.lay_->exps[t])];
        return r;
    }

    // Embed a jet on an n-chart into an (n+1)-chart whose extra variable the
    // field does not depend on (all new derivatives zero).
    Jet promoted(int new_nvars) const {
        if (new_nvars < lay_->nvars) throw mismatch_error("promotion cannot drop variables");
        if (new_nvars == lay_->nvars) return *this;
        Jet r(&JetLayout::get(new_nvars, lay_->order));
        for (int s = 0; s < lay_->count; ++s) {
            std::array<std::uint8_t, kMaxJetVars> e{};
            for (int i = 0; i < lay_->nvars; ++i) e[i] = lay_->exps[s][i];
            r.c_[r.lay_->slot_of(e)] = c_[s];
        }
        return r;
    }

    double norm_inf() const {
        double m = 0;
        for (int s = 0; s < lay_->count; ++s) m = std::max(m, std::abs(c_[s]));
        return m;
    }

    bool is_real(double tol = 0.0) const {
        for (int s = 0; s < lay_->count; ++s)
            if (std::abs(c_[s].imag()) > tol) return false;
        return true;
    }

    Jet operator-() const {
        Jet r = *this;
        for (int s = 0; s < lay_->count; ++s) r.c_[s] = -r.c_[s];
        return r;
    }

    Jet& operator+=(const Jet& b) {
        require_same(b);
        for (int s = 0; s < lay_->count; ++s) c_[s] += b.c_[s];
        return *this;
    }
    Jet& operator-=(const Jet& b) {
        require_same(b);
        for (int s = 0; s < lay_->count; ++s) c_[s] -= b.c_[s];
        return *this;
    }
    Jet& operator*=(const Jet& b) { return *this = *this * b; }
    Jet& operator/=(const Jet& b) { return *this = *this / b; }

    Jet& operator+=(cplx v) {
        c_[0] += v;
        return *this;
    }
    Jet& operator-=(cplx v) {
        c_[0] -= v;
        return *this;
    }
    Jet& operator*=(cplx v) {
        for (int s = 0; s < lay_->count; ++s) c_[s] *= v;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, cplx v) { return a += v; }
    friend Jet operator+(cplx v, Jet a) { return a += v; }
    friend Jet operator-(Jet a, cplx v) { return a -= v; }
    friend Jet operator-(cplx v, const Jet& a) { return -a + v; }
    friend Jet operator*(Jet a, cplx v) { return a *= v; }
    friend Jet operator*(cplx v, Jet a) { return a *= v; }
    friend Jet operator/(Jet a, cplx v) { return a *= (1.0 / v); }
    friend Jet operator/(cplx v, const Jet& a) { return recip(a) * v; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.require_same(b);
        Jet r(a.lay_);
        const JetLayout& L = *a.lay_;
        for (int i = 0; i < L.count; ++i) {
            const cplx ai = a.c_[i];
            if (ai == 0.0) continue;
            for (int j = 0; j < L.count; ++j) {
                int t = L.product_slot(i, j);
                if (t < 0) continue;
                r.c_[t] += ai * b.c_[j];
            }
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

    // Composition with a scalar function given its scaled derivatives
    // fj[j] = f^(j)(value) / j! for j = 0..order.
    friend Jet compose_series(const Jet& a, std::span<const cplx> fj) {
        Jet h = a;
        h.c_[0] = 0.0;
        Jet r = Jet::constant(fj[0], a.nvars(), a.order());
        Jet pw = Jet::constant(1.0, a.nvars(), a.order());
        for (int j = 1; j <= a.order(); ++j) {
            pw = pw * h;
            r += fj[j] * pw;
        }
        return r;
    }

    friend Jet recip(const Jet& a) {
        cplx v = a.value();
        if (v == 0.0) throw division_error("division by a jet with zero value");
        std::array<cplx, kMaxJetOrder + 1> fj{};
        fj[0] = 1.0 / v;
        for (int j = 1; j <= a.order(); ++j) fj[j] = -fj[j - 1] / v;
        return compose_series(a, std::span<const cplx>(fj.data(), a.order() + 1));
    }

    // Coefficient-wise conjugation. Valid because all chart variables are
    // real; conj is not a holomorphic operation and has no complex derivative.
    friend Jet conj(const Jet& a) {
        Jet r = a;
        for (int s = 0; s < a.lay_->count; ++s) r.c_[s] = std::conj(r.c_[s]);
        return r;
    }

    friend Jet real_part(const Jet& a) { return (a + conj(a)) * 0.5; }
    friend Jet imag_part(const Jet& a) { return (a - conj(a)) * cplx(0.0, -0.5); }
    friend Jet abs2(const Jet& a) { return a * conj(a); }

    friend Jet exp(const Jet& a) {
        std::array<cplx, kMaxJetOrder + 1> fj{};
        fj[0] = std::exp(a.value());
        for (int j = 1; j <= a.order(); ++j) fj[j] = fj[j - 1] / static_cast<double>(j);
        return compose_series(a, std::span<const cplx>(fj.data(), a.order() + 1));
    }

    friend Jet log(const Jet& a) {
        cplx v = a.value();
        check_branch(v, "log");
        std::array<cplx, kMaxJetOrder + 1> fj{};
        fj[0] = std::log(v);
        if (a.order() >= 1) fj[1] = 1.0 / v;
        for (int j = 2; j <= a.order(); ++j)
            fj[j] = fj[j - 1] * (-static_cast<double>(j - 1)) / (static_cast<double>(j) * v);
        return compose_series(a, std::span<const cplx>(fj.data(), a.order() + 1));
    }

    friend Jet sqrt(const Jet& a) {
        cplx v = a.value();
        check_branch(v, "sqrt");
        std::array<cplx, kMaxJetOrder + 1> fj{};
        fj[0] = std::sqrt(v);
        for (int j = 1; j <= a.order(); ++j)
            fj[j] = fj[j - 1] * (1.5 - static_cast<double>(j)) / (static_cast<double>(j) * v);
        return compose_series(a, std::span<const cplx>(fj.data(), a.order() + 1));
    }

    friend Jet sin(const Jet& a) {
        cplx s = std::sin(a.value()), c = std::cos(a.value());
        const cplx cycle[4] = {s, c, -s, -c};
        std::array<cplx, kMaxJetOrder + 1> fj{};
        double fact = 1;
        for (int j = 0; j <= a.order(); ++j) {
            if (j > 0) fact *= j;
            fj[j] = cycle[j % 4] / fact;
        }
        return compose_series(a, std::span<const cplx>(fj.data(), a.order() + 1));
    }

    friend Jet cos(const Jet& a) {
        cplx s = std::sin(a.value()), c = std::cos(a.value());
        const cplx cycle[4] = {c, -s, -c, s};
        std::array<cplx, kMaxJetOrder + 1> fj{};
        double fact = 1;
        for (int j = 0; j <= a.order(); ++j) {
            if (j > 0) fact *= j;
            fj[j] = cycle[j % 4] / fact;
        }
        return compose_series(a, std::span<const cplx>(fj.data(), a.order() + 1));
    }

    friend Jet pow(const Jet& a, int n) {
        if (n < 0) return recip(pow(a, -n));
        Jet r = Jet::constant(1.0, a.nvars(), a.order());
        Jet base = a;
        int e = n;
        while (e > 0) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return r;
    }

  private:
    explicit Jet(const JetLayout* lay) : lay_(lay) { c_.fill(cplx{}); }

    void require_same(const Jet& b) const {
        if (lay_ == nullptr || b.lay_ == nullptr) throw mismatch_error("operation on an uninitialized jet");
        if (lay_ != b.lay_)
            throw mismatch_error("jet order/nvars mismatch: (" + std::to_string(lay_->nvars) + "," +
                                 std::to_string(lay_->order) + ") vs (" + std::to_string(b.lay_->nvars) +
                                 "," + std::to_string(b.lay_->order) + ")");
    }

    static void check_branch(cplx v, const char* fn) {
        if (v == 0.0) throw branch_cut_error(std::string(fn) + " of a jet with zero value");
        // principal branch, cut along the negative reals
        if (v.imag() == 0.0 && v.real() < 0.0)
            throw branch_cut_error(std::string(fn) + " evaluated on the principal branch cut");
    }

    const JetLayout* lay_ = nullptr;
    std::array<cplx, kMaxJetCoeffs> c_{};
};

}  // namespace nullframe
