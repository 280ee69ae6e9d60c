#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nullframe/expr.hpp"
#include "nullframe/forms.hpp"
#include "oracles.hpp"

using namespace nullframe;

namespace {

// dx^i as a constant 1-form field
FormField coordinate_form(int i, int nvars) {
    FormField f = FormField::zero(nvars, 1);
    f.comps[i] = ScalarField::constant(1.0, nvars);
    return f;
}

FormValue random_form(std::mt19937_64& rng, int nvars, int degree, int order) {
    std::uniform_real_distribution<double> u(-1, 1);
    FormValue f = FormValue::zero(nvars, degree, order);
    for (auto& c : f.comps) c = Jet::constant(cplx(u(rng), u(rng)), nvars, order);
    return f;
}

const Chart kHeis{{"u", "z_re", "z_im"}};

// Heisenberg: lambda = du + x dy - y dx (the real-pair form of
// du + (i/2)(z dzbar - zbar dz)), mu = dz = dx + i dy.
FormField heisenberg_lambda() {
    FormField f = FormField::zero(3, 1);
    f.comps[0] = ScalarField::constant(1.0, 3);
    f.comps[1] = -ScalarField::coordinate(2, 3);  // -y dx
    f.comps[2] = ScalarField::coordinate(1, 3);   //  x dy
    return f;
}

FormField heisenberg_mu() {
    FormField f = FormField::zero(3, 1);
    f.comps[1] = ScalarField::constant(1.0, 3);
    f.comps[2] = ScalarField::constant(cplx(0, 1), 3);
    return f;
}

}  // namespace

TEST_CASE("wedge antisymmetry and sign rule", "[forms]") {
    Point pt{0.1, 0.2, 0.3, 0.4};
    FormValue dx = coordinate_form(0, 4).at(pt, 1);
    FormValue dy = coordinate_form(1, 4).at(pt, 1);
    FormValue dxdx = wedge(dx, dx);
    for (auto& c : dxdx.comps) CHECK(c.norm_inf() == 0.0);
    FormValue ab = wedge(dx, dy), ba = wedge(dy, dx);
    for (std::size_t k = 0; k < ab.comps.size(); ++k)
        CHECK(std::abs(ab.comps[k].value() + ba.comps[k].value()) == 0.0);
}

TEST_CASE("wedge of two 1-forms matches the alternation formula", "[forms]") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 10; ++t) {
        FormValue a = random_form(rng, 4, 1, 0);
        FormValue b = random_form(rng, 4, 1, 0);
        FormValue w = wedge(a, b);
        const auto& combos = form_combos(4, 2);
        for (std::size_t k = 0; k < combos.size(); ++k) {
            int i = combos[k][0], j = combos[k][1];
            cplx want = a.comps[i].value() * b.comps[j].value() -
                        a.comps[j].value() * b.comps[i].value();
            CHECK(std::abs(w.comps[k].value() - want) < 1e-14);
        }
    }
}

TEST_CASE("wedge is associative and graded anticommutative on random forms", "[forms]") {
    std::mt19937_64 rng(55);
    for (int t = 0; t < 8; ++t) {
        FormValue a = random_form(rng, 4, 1, 0);
        FormValue b = random_form(rng, 4, 1, 0);
        FormValue c = random_form(rng, 4, 2, 0);
        FormValue l = wedge(wedge(a, b), c);
        FormValue r = wedge(a, wedge(b, c));
        for (std::size_t k = 0; k < l.comps.size(); ++k)
            CHECK(std::abs(l.comps[k].value() - r.comps[k].value()) < 1e-12);
        // alpha ^ beta = (-1)^{pq} beta ^ alpha with p=1, q=2
        FormValue ac = wedge(a, c), ca = wedge(c, a);
        for (std::size_t k = 0; k < ac.comps.size(); ++k)
            CHECK(std::abs(ac.comps[k].value() - ca.comps[k].value()) < 1e-12);
    }
}

TEST_CASE("d(du) = 0", "[forms]") {
    Point pt{0.3, -0.2, 0.5};
    FormValue d = exterior_derivative(coordinate_form(0, 3), pt, 2);
    for (auto& c : d.comps) CHECK(c.norm_inf() == 0.0);
}

TEST_CASE("Heisenberg dlambda = i mu ^ mubar", "[forms]") {
    Point pt{0.4, 0.7, -0.3};
    FormField lam = heisenberg_lambda(), mu = heisenberg_mu();
    FormValue dl = exterior_derivative(lam, pt, 2);
    FormValue target = cplx(0, 1) * wedge(mu.at(pt, 1), conj(mu.at(pt, 1)));
    for (std::size_t k = 0; k < dl.comps.size(); ++k)
        CHECK(std::abs(dl.comps[k].value() - target.comps[k].value()) < 1e-12);
}

TEST_CASE("d(d omega) = 0 for expression-coefficient 1-forms", "[forms]") {
    FormField w = FormField::zero(3, 1);
    w.comps[0] = expr_field("sin(u)*z_re + exp(0.2*z_im)", kHeis);
    w.comps[1] = expr_field("u^2 - i*z_im*z_re", kHeis);
    w.comps[2] = expr_field("cos(z_re)*(1+u)", kHeis);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 20; ++t) {
        Point pt{u(rng), u(rng), u(rng)};
        FormValue dd = exterior_derivative(exterior_derivative(w.at(pt, 2)));
        double res = 0;
        for (auto& c : dd.comps) res = std::max(res, std::abs(c.value()));
        CHECK(res < 1e-10);
    }
}

TEST_CASE("Leibniz rule d(f w) = df ^ w + f dw", "[forms]") {
    ScalarField f = expr_field("exp(0.3*u)*cos(z_re) + z_im^2", kHeis);
    FormField w = FormField::zero(3, 1);
    w.comps[0] = expr_field("z_re + i*u", kHeis);
    w.comps[1] = expr_field("sin(z_im)", kHeis);
    w.comps[2] = expr_field("u*z_re", kHeis);
    FormField fw = f * w;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 10; ++t) {
        Point pt{u(rng), u(rng), u(rng)};
        FormValue lhs = exterior_derivative(fw, pt, 2);
        // df as a 1-form from jet gradients
        Jet fj = f(pt, 2);
        FormValue df = FormValue::zero(3, 1, 1);
        for (int a = 0; a < 3; ++a) df.comps[a] = fj.derivative(a);
        FormValue rhs = wedge(df, w.at(pt, 1)) + fj.truncated(1) * exterior_derivative(w.at(pt, 2));
        double res = 0;
        for (std::size_t k = 0; k < lhs.comps.size(); ++k)
            res = std::max(res, std::abs(lhs.comps[k].value() - rhs.comps[k].value()));
        CHECK(res < 1e-9);
    }
}

TEST_CASE("extract_coefficient: zero, proportional, least squares", "[forms]") {
    std::mt19937_64 rng(21);
    FormValue basis = random_form(rng, 3, 3, 0);  // top degree on 3-chart
    FormValue zero = FormValue::zero(3, 3, 0);
    auto z = extract_coefficient(zero, basis);
    CHECK(z.q == cplx(0));
    CHECK(z.residual == 0.0);
    FormValue scaled = cplx(2, 3) * basis;
    auto s = extract_coefficient(scaled, basis);
    CHECK(std::abs(s.q - cplx(2, 3)) < 1e-14);
    CHECK(s.residual < 1e-14);
    CHECK_THROWS_AS(extract_coefficient(zero, zero), domain_error);

    // below top degree: least squares plus a non-proportionality residual
    FormValue b2 = random_form(rng, 4, 2, 0);
    FormValue prop = cplx(0.5, -1.0) * b2;
    auto e = extract_coefficient(prop, b2);
    CHECK(std::abs(e.q - cplx(0.5, -1.0)) < 1e-13);
    CHECK(e.residual < 1e-13);
    FormValue off = prop;
    off.comps[0] += Jet::constant(1.0, 4, 0);  // break proportionality
    auto f = extract_coefficient(off, b2);
    CHECK(f.residual > 0.1);
}
