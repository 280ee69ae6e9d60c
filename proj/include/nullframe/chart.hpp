#pragma once

// Charts, points and scalar fields. A ScalarField is a closure evaluating to
// a Jet at (point, order); derived fields (differential operators applied to
// other fields) re-evaluate their inputs at a raised order, so the total jet
// budget of a pipeline is set by the deepest evaluation it triggers.

#include <algorithm>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nullframe/errors.hpp"
#include "nullframe/jet.hpp"

namespace nullframe {

struct Chart {
    std::vector<std::string> names;

    int dim() const { return static_cast<int>(names.size()); }

    int index_of(const std::string& name) const {
        for (int i = 0; i < dim(); ++i)
            if (names[i] == name) return i;
        return -1;
    }

    // 4-chart for the lifted spacetime: base coordinates with r appended last.
    Chart with_r(const std::string& r = "r") const {
        Chart c = *this;
        c.names.push_back(r);
        return c;
    }
};

using Point = std::vector<double>;

class ScalarField {
  public:
    using Fn = std::function<Jet(std::span<const double>, int)>;

    ScalarField() = default;
    ScalarField(Fn f) : fn_(std::make_shared<Fn>(std::move(f))) {}

    bool valid() const { return fn_ != nullptr; }

    Jet operator()(std::span<const double> pt, int order) const { return (*fn_)(pt, order); }

    static ScalarField constant(cplx v, int nvars) {
        return ScalarField([v, nvars](std::span<const double>, int order) {
            return Jet::constant(v, nvars, order);
        });
    }

    static ScalarField coordinate(int i, int nvars) {
        return ScalarField([i, nvars](std::span<const double> pt, int order) {
            return Jet::variable(i, pt[i], nvars, order);
        });
    }

    static ScalarField zero(int nvars) { return constant(0.0, nvars); }

    // Field on the (n+1)-chart that ignores the appended last coordinate.
    ScalarField promoted(int new_nvars) const {
        ScalarField inner = *this;
        return ScalarField([inner, new_nvars](std::span<const double> pt, int order) {
            return inner(pt.first(pt.size() - 1), order).promoted(new_nvars);
        });
    }

  private:
    std::shared_ptr<const Fn> fn_;
};

inline ScalarField operator+(ScalarField a, ScalarField b) {
    return ScalarField([a, b](std::span<const double> pt, int k) { return a(pt, k) + b(pt, k); });
}
inline ScalarField operator-(ScalarField a, ScalarField b) {
    return ScalarField([a, b](std::span<const double> pt, int k) { return a(pt, k) - b(pt, k); });
}
inline ScalarField operator*(ScalarField a, ScalarField b) {
    return ScalarField([a, b](std::span<const double> pt, int k) { return a(pt, k) * b(pt, k); });
}
inline ScalarField operator/(ScalarField a, ScalarField b) {
    return ScalarField([a, b](std::span<const double> pt, int k) { return a(pt, k) / b(pt, k); });
}
inline ScalarField operator-(ScalarField a) {
    return ScalarField([a](std::span<const double> pt, int k) { return -a(pt, k); });
}
inline ScalarField operator*(cplx v, ScalarField a) {
    return ScalarField([v, a](std::span<const double> pt, int k) { return v * a(pt, k); });
}
inline ScalarField operator*(ScalarField a, cplx v) { return v * a; }
inline ScalarField operator+(ScalarField a, cplx v) {
    return ScalarField([v, a](std::span<const double> pt, int k) { return a(pt, k) + v; });
}
inline ScalarField operator+(cplx v, ScalarField a) { return a + v; }
inline ScalarField operator-(ScalarField a, cplx v) { return a + (-v); }
inline ScalarField operator-(cplx v, ScalarField a) { return (-a) + v; }

inline ScalarField f_conj(ScalarField a) {
    return ScalarField([a](std::span<const double> pt, int k) { return conj(a(pt, k)); });
}
inline ScalarField f_exp(ScalarField a) {
    return ScalarField([a](std::span<const double> pt, int k) { return exp(a(pt, k)); });
}
inline ScalarField f_log(ScalarField a) {
    return ScalarField([a](std::span<const double> pt, int k) { return log(a(pt, k)); });
}
inline ScalarField f_sin(ScalarField a) {
    return ScalarField([a](std::span<const double> pt, int k) { return sin(a(pt, k)); });
}
inline ScalarField f_cos(ScalarField a) {
    return ScalarField([a](std::span<const double> pt, int k) { return cos(a(pt, k)); });
}
inline ScalarField f_sqrt(ScalarField a) {
    return ScalarField([a](std::span<const double> pt, int k) { return sqrt(a(pt, k)); });
}
inline ScalarField f_pow(ScalarField a, int n) {
    return ScalarField([a, n](std::span<const double> pt, int k) { return pow(a(pt, k), n); });
}
inline ScalarField f_re(ScalarField a) {
    return ScalarField([a](std::span<const double> pt, int k) { return real_part(a(pt, k)); });
}

}  // namespace nullframe
