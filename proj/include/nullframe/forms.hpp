#pragma once

// Exterior algebra on an n-chart (n = 3 or 4). Forms carry coordinate-basis
// components (strictly increasing index combinations); frame decomposition is
// the coframe module's job. Components are Jets, so the exterior derivative
// is read straight off jet gradients and consumes one order.

#include <array>
#include <vector>

#include "nullframe/chart.hpp"
#include "nullframe/errors.hpp"
#include "nullframe/jet.hpp"

namespace nullframe {

// Increasing index combinations of {0..n-1} of size p, in lexicographic order.
inline const std::vector<std::array<int, 4>>& form_combos(int n, int p) {
    static const auto table = [] {
        std::array<std::array<std::vector<std::array<int, 4>>, 5>, 5> t{};
        for (int nn = 1; nn <= 4; ++nn)
            for (int pp = 0; pp <= nn; ++pp) {
                std::array<int, 4> c{};
                std::vector<std::array<int, 4>> out;
                // iterate combinations
                std::vector<int> idx(static_cast<std::size_t>(pp));
                for (int i = 0; i < pp; ++i) idx[i] = i;
                for (;;) {
                    c.fill(-1);
                    for (int i = 0; i < pp; ++i) c[i] = idx[i];
                    out.push_back(c);
                    int i = pp - 1;
                    while (i >= 0 && idx[i] == nn - pp + i) --i;
                    if (i < 0) break;
                    ++idx[i];
                    for (int j = i + 1; j < pp; ++j) idx[j] = idx[j - 1] + 1;
                }
                t[nn][pp] = std::move(out);
            }
        return t;
    }();
    return table[n][p];
}

inline int combo_index(int n, int p, std::span<const int> combo) {
    const auto& cs = form_combos(n, p);
    for (std::size_t k = 0; k < cs.size(); ++k) {
        bool same = true;
        for (int i = 0; i < p; ++i)
            if (cs[k][i] != combo[i]) {
                same = false;
                break;
            }
        if (same) return static_cast<int>(k);
    }
    return -1;
}

struct FormValue {
    int nvars = 0;
    int degree = 0;
    std::vector<Jet> comps;  // one per increasing combination

    static FormValue zero(int nvars, int degree, int order) {
        FormValue f;
        f.nvars = nvars;
        f.degree = degree;
        f.comps.assign(form_combos(nvars, degree).size(), Jet::zero(nvars, order));
        return f;
    }

    int order() const { return comps.empty() ? 0 : comps[0].order(); }

    double norm_inf() const {
        double m = 0;
        for (const Jet& j : comps) m = std::max(m, std::abs(j.value()));
        return m;
    }

    FormValue truncated(int new_order) const {
        FormValue r = *this;
        for (Jet& j : r.comps) j = j.truncated(new_order);
        return r;
    }

    FormValue& operator+=(const FormValue& b) {
        if (nvars != b.nvars || degree != b.degree) throw mismatch_error("form shape mismatch");
        for (std::size_t k = 0; k < comps.size(); ++k) comps[k] += b.comps[k];
        return *this;
    }
    FormValue& operator-=(const FormValue& b) {
        if (nvars != b.nvars || degree != b.degree) throw mismatch_error("form shape mismatch");
        for (std::size_t k = 0; k < comps.size(); ++k) comps[k] -= b.comps[k];
        return *this;
    }
    friend FormValue operator+(FormValue a, const FormValue& b) { return a += b; }
    friend FormValue operator-(FormValue a, const FormValue& b) { return a -= b; }
    friend FormValue operator*(const Jet& s, FormValue a) {
        for (Jet& j : a.comps) j = s * j;
        return a;
    }
    friend FormValue operator*(cplx s, FormValue a) {
        for (Jet& j : a.comps) j = s * j;
        return a;
    }
    friend FormValue operator-(FormValue a) {
        for (Jet& j : a.comps) j = -j;
        return a;
    }
    friend FormValue conj(FormValue a) {
        for (Jet& j : a.comps) j = conj(j);
        return a;
    }
};

namespace detail {

// Sign of the shuffle merging two disjoint increasing tuples, or 0 if they share
// an index. Appends the merged tuple to `out`.
inline int merge_sign(std::span<const int> a, std::span<const int> b, std::array<int, 4>& out) {
    int i = 0, j = 0, k = 0, sign = 1;
    const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    while (i < na || j < nb) {
        if (i < na && j < nb && a[i] == b[j]) return 0;
        bool take_a = j >= nb || (i < na && a[i] < b[j]);
        if (take_a) {
            out[k++] = a[i++];
        } else {
            // b element jumps over the remaining a elements
            if ((na - i) % 2 != 0) sign = -sign;
            out[k++] = b[j++];
        }
    }
    return sign;
}

}  // namespace detail

inline FormValue wedge(const FormValue& a, const FormValue& b) {
    if (a.nvars != b.nvars) throw mismatch_error("wedge on different charts");
    int p = a.degree, q = b.degree, n = a.nvars;
    if (p + q > n) throw domain_error("wedge degree overflow");
    FormValue r = FormValue::zero(n, p + q, std::min(a.order(), b.order()));
    const auto& ca = form_combos(n, p);
    const auto& cb = form_combos(n, q);
    for (std::size_t ia = 0; ia < ca.size(); ++ia)
        for (std::size_t ib = 0; ib < cb.size(); ++ib) {
            std::array<int, 4> merged{};
            int sign = detail::merge_sign(std::span<const int>(ca[ia].data(), static_cast<std::size_t>(p)),
                                          std::span<const int>(cb[ib].data(), static_cast<std::size_t>(q)), merged);
            if (sign == 0) continue;
            int t = combo_index(n, p + q, std::span<const int>(merged.data(), static_cast<std::size_t>(p + q)));
            Jet term = a.comps[ia].truncated(r.order()) * b.comps[ib].truncated(r.order());
            if (sign < 0) term = -term;
            r.comps[t] += term;
        }
    return r;
}

// d of a form with jet components: one jet order is consumed.
inline FormValue exterior_derivative(const FormValue& w) {
    if (w.order() < 1) throw order_error("exterior derivative: order budget exhausted");
    int n = w.nvars, p = w.degree;
    if (p >= n) {  // d of a top form vanishes; represent it with no components
        FormValue empty;
        empty.nvars = n;
        empty.degree = p + 1;
        return empty;
    }
    FormValue r = FormValue::zero(n, p + 1, w.order() - 1);
    const auto& cr = form_combos(n, p + 1);
    for (std::size_t t = 0; t < cr.size(); ++t) {
        for (int drop = 0; drop <= p; ++drop) {
            std::array<int, 4> sub{};
            for (int i = 0, k = 0; i <= p; ++i)
                if (i != drop) sub[k++] = cr[t][i];
            int src = combo_index(n, p, std::span<const int>(sub.data(), static_cast<std::size_t>(p)));
            Jet d = w.comps[src].derivative(cr[t][drop]);
            r.comps[t] += (drop % 2 == 0) ? d : -d;
        }
    }
    return r;
}

struct FormField {
    int nvars = 0;
    int degree = 0;
    std::vector<ScalarField> comps;

    static FormField zero(int nvars, int degree) {
        FormField f;
        f.nvars = nvars;
        f.degree = degree;
        f.comps.assign(form_combos(nvars, degree).size(), ScalarField::zero(nvars));
        return f;
    }

    FormValue at(std::span<const double> pt, int order) const {
        FormValue v;
        v.nvars = nvars;
        v.degree = degree;
        v.comps.reserve(comps.size());
        for (const ScalarField& f : comps) v.comps.push_back(f(pt, order));
        return v;
    }

    // Pullback along the projection that forgets the appended last coordinate:
    // same components (r-independent), no dr component.
    FormField pulled_back_to(int new_nvars) const {
        FormField f;
        f.nvars = new_nvars;
        f.degree = degree;
        f.comps.assign(form_combos(new_nvars, degree).size(), ScalarField::zero(new_nvars));
        const auto& src = form_combos(nvars, degree);
        for (std::size_t k = 0; k < src.size(); ++k) {
            int t = combo_index(new_nvars, degree, std::span<const int>(src[k].data(), static_cast<std::size_t>(degree)));
            f.comps[t] = comps[k].promoted(new_nvars);
        }
        return f;
    }

    friend FormField operator+(const FormField& a, const FormField& b) {
        FormField r = a;
        for (std::size_t k = 0; k < r.comps.size(); ++k) r.comps[k] = r.comps[k] + b.comps[k];
        return r;
    }
    friend FormField operator*(ScalarField s, const FormField& a) {
        FormField r = a;
        for (auto& c : r.comps) c = s * c;
        return r;
    }
    friend FormField operator*(cplx s, const FormField& a) {
        FormField r = a;
        for (auto& c : r.comps) c = s * c;
        return r;
    }
    friend FormField conj(const FormField& a) {
        FormField r = a;
        for (auto& c : r.comps) c = f_conj(c);
        return r;
    }
};

inline FormValue exterior_derivative(const FormField& w, std::span<const double> pt, int order) {
    return exterior_derivative(w.at(pt, order));
}

inline FormField wedge(const FormField& a, const FormField& b) {
    if (a.nvars != b.nvars) throw mismatch_error("wedge on different charts");
    if (a.degree + b.degree > a.nvars) throw domain_error("wedge degree overflow");
    FormField r = FormField::zero(a.nvars, a.degree + b.degree);
    for (std::size_t t = 0; t < r.comps.size(); ++t) {
        FormField fa = a, fb = b;
        int n = a.nvars, p = a.degree, q = b.degree;
        std::size_t target = t;
        r.comps[t] = ScalarField([fa, fb, n, p, q, target](std::span<const double> pt, int k) {
            const auto& ca = form_combos(n, p);
            const auto& cb = form_combos(n, q);
            Jet acc = Jet::zero(n, k);
            for (std::size_t ia = 0; ia < ca.size(); ++ia)
                for (std::size_t ib = 0; ib < cb.size(); ++ib) {
                    std::array<int, 4> merged{};
                    int sign = detail::merge_sign(
                        std::span<const int>(ca[ia].data(), static_cast<std::size_t>(p)),
                        std::span<const int>(cb[ib].data(), static_cast<std::size_t>(q)), merged);
                    if (sign == 0) continue;
                    if (static_cast<std::size_t>(combo_index(
                            n, p + q, std::span<const int>(merged.data(), static_cast<std::size_t>(p + q)))) != target)
                        continue;
                    Jet term = fa.comps[ia](pt, k) * fb.comps[ib](pt, k);
                    acc += sign < 0 ? -term : term;
                }
            return acc;
        });
    }
    return r;
}

// The scalar q with top = q * basis. For top-degree pairs this is the ratio of
// the single components; below top degree it is the least-squares coefficient,
// returned together with the non-proportionality residual.
struct CoefficientExtraction {
    cplx q;
    double residual;
};

inline CoefficientExtraction extract_coefficient(const FormValue& top, const FormValue& basis) {
    if (top.nvars != basis.nvars || top.degree != basis.degree)
        throw mismatch_error("extract_coefficient: mismatched forms");
    double bnorm = 0;
    for (const Jet& j : basis.comps) bnorm += std::norm(j.value());
    if (bnorm == 0) throw domain_error("extract_coefficient: zero basis form");
    cplx num = 0;
    for (std::size_t k = 0; k < top.comps.size(); ++k)
        num += top.comps[k].value() * std::conj(basis.comps[k].value());
    cplx q = num / bnorm;
    double res = 0;
    for (std::size_t k = 0; k < top.comps.size(); ++k)
        res = std::max(res, std::abs(top.comps[k].value() - q * basis.comps[k].value()));
    return {q, res};
}

}  // namespace nullframe
