#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "curvature_oracle.hpp"
#include "nullframe/catalog.hpp"
#include "nullframe/coframe.hpp"
#include "nullframe/expr.hpp"

using namespace nullframe;

namespace {

const Chart kChart4{{"x1", "x2", "x3", "x4"}};

// Constant null coframe for flat space: g = dx1^2 + dx2^2 + dx3^2 - dx4^2.
NullCoframe minkowski_coframe() {
    NullCoframe cf;
    cf.chart = kChart4;
    const double s = 1.0 / std::sqrt(2.0);
    for (auto& t : cf.theta) t = FormField::zero(4, 1);
    cf.theta[0].comps[0] = ScalarField::constant(s, 4);
    cf.theta[0].comps[1] = ScalarField::constant(cplx(0, s), 4);
    cf.theta[1].comps[0] = ScalarField::constant(s, 4);
    cf.theta[1].comps[1] = ScalarField::constant(cplx(0, -s), 4);
    cf.theta[2].comps[2] = ScalarField::constant(s, 4);
    cf.theta[2].comps[3] = ScalarField::constant(-s, 4);
    cf.theta[3].comps[2] = ScalarField::constant(s, 4);
    cf.theta[3].comps[3] = ScalarField::constant(s, 4);
    return cf;
}

// Heisenberg flat lift: theta^1 = mu, theta^2 = mubar, theta^3 = lambda,
// theta^4 = dr, on the chart (u, z_re, z_im, r).
NullCoframe heisenberg_lift() {
    NullCoframe cf;
    cf.chart = Chart{{"u", "z_re", "z_im"}}.with_r();
    for (auto& t : cf.theta) t = FormField::zero(4, 1);
    cf.theta[0].comps[1] = ScalarField::constant(1.0, 4);
    cf.theta[0].comps[2] = ScalarField::constant(cplx(0, 1), 4);
    cf.theta[1].comps[1] = ScalarField::constant(1.0, 4);
    cf.theta[1].comps[2] = ScalarField::constant(cplx(0, -1), 4);
    cf.theta[2].comps[0] = ScalarField::constant(1.0, 4);
    cf.theta[2].comps[1] = -ScalarField::coordinate(2, 4);
    cf.theta[2].comps[2] = ScalarField::coordinate(1, 4);
    cf.theta[3].comps[3] = ScalarField::constant(1.0, 4);
    return cf;
}

// Smooth nondegenerate perturbation of the Minkowski coframe; the reality
// constraints of a null coframe are preserved.
NullCoframe perturbed_coframe(unsigned seed, double eps = 0.15) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    auto poly = [&](int n) {
        double c0 = u(rng), c1 = u(rng), c2 = u(rng), c3 = u(rng), c4 = u(rng);
        return ScalarField([=](std::span<const double> pt, int k) {
            Jet x1 = Jet::variable(0, pt[0], n, k), x2 = Jet::variable(1, pt[1], n, k);
            Jet x3 = Jet::variable(2, pt[2], n, k), x4 = Jet::variable(3, pt[3], n, k);
            return c0 + c1 * x1 * x4 + c2 * sin(x2) + c3 * x3 * x3 + c4 * x1 * x2 * x3;
        });
    };
    NullCoframe cf = minkowski_coframe();
    // theta^1 gets a complex perturbation, theta^2 its conjugate, theta^3 and
    // theta^4 real ones
    for (int a = 0; a < 4; ++a) {
        ScalarField re = poly(4), im = poly(4);
        ScalarField p = cplx(eps, 0) * re + cplx(0, eps) * im;
        cf.theta[0].comps[a] = cf.theta[0].comps[a] + p;
        cf.theta[1].comps[a] = cf.theta[1].comps[a] + f_conj(p);
        cf.theta[2].comps[a] = cf.theta[2].comps[a] + cplx(eps, 0) * poly(4);
        cf.theta[3].comps[a] = cf.theta[3].comps[a] + cplx(eps, 0) * poly(4);
    }
    return cf;
}

}  // namespace

TEST_CASE("frame decomposition round trips", "[coframe]") {
    NullCoframe cf = perturbed_coframe(3);
    Point pt{0.2, -0.4, 0.3, 0.6};
    FrameJets fr = eval_frame(cf, pt, 1);

    // omega = theta^3 -> components (0,0,1,0)
    auto c3 = frame_decompose(cf.theta[2].at(pt, 0), fr);
    CHECK(std::abs(c3[0]) < 1e-13);
    CHECK(std::abs(c3[1]) < 1e-13);
    CHECK(std::abs(c3[2] - 1.0) < 1e-13);
    CHECK(std::abs(c3[3]) < 1e-13);

    // omega = 2 theta^1 + i theta^4
    FormValue w = cplx(2, 0) * cf.theta[0].at(pt, 0) + cplx(0, 1) * cf.theta[3].at(pt, 0);
    auto c = frame_decompose(w, fr);
    CHECK(std::abs(c[0] - 2.0) < 1e-13);
    CHECK(std::abs(c[1]) < 1e-13);
    CHECK(std::abs(c[2]) < 1e-13);
    CHECK(std::abs(c[3] - cplx(0, 1)) < 1e-13);

    // random 1-form reconstructs
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    FormValue rw = FormValue::zero(4, 1, 0);
    for (auto& comp : rw.comps) comp = Jet::constant(cplx(u(rng), u(rng)), 4, 0);
    auto rc = frame_decompose(rw, fr);
    for (int a = 0; a < 4; ++a) {
        cplx back = 0;
        for (int i = 0; i < 4; ++i) back += rc[i] * fr.theta[i][a].value();
        CHECK(std::abs(back - rw.comps[a].value()) < 1e-12);
    }
}

TEST_CASE("Minkowski: zero structure coefficients, connection, curvature", "[coframe]") {
    NullCoframe cf = minkowski_coframe();
    Point pt{0.1, 0.5, -0.2, 0.9};
    StructureCoefficients sc = structure_coefficients(cf, pt, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) CHECK(sc.c[i][j][k].norm_inf() == 0.0);
    ConnectionForms cn = connection(cf, pt, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) CHECK(cn.gamma[i][j][k].norm_inf() == 0.0);
    OpticalScalars os = optical_scalars(cf, pt);
    CHECK(std::abs(os.kappa) < 1e-14);
    CHECK(std::abs(os.sigma) < 1e-14);
    CHECK(std::abs(os.rho) < 1e-14);
    CHECK(std::abs(os.tau) < 1e-14);
    CHECK(os.shearfree_geodesic);
}

TEST_CASE("Heisenberg lift: bracket pattern of dlambda = i mu ^ mubar", "[coframe]") {
    NullCoframe cf = heisenberg_lift();
    Point pt{0.3, 0.7, -0.5, 0.2};
    StructureCoefficients sc = structure_coefficients(cf, pt, 2);
    // d theta^3 = i theta^1 ^ theta^2 = -c^3_{12} theta^1 ^ theta^2, so
    // c^3_{12} = -i; the theta^1, theta^2, theta^4 rows vanish
    CHECK(std::abs(sc.c[2][0][1].value() - cplx(0, -1)) < 1e-12);
    for (int i : {0, 1, 3})
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) CHECK(sc.c[i][j][k].norm_inf() < 1e-12);
    // defining relation round trip: d theta^i + 1/2 c^i_{jk} theta^j ^ theta^k = 0
    for (int i = 0; i < 4; ++i) {
        FormValue res = exterior_derivative(cf.theta[i].at(pt, 1));
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                FormValue w = wedge(cf.theta[j].at(pt, 0), cf.theta[k].at(pt, 0));
                res += 0.5 * sc.c[i][j][k].truncated(0).value() * w;
            }
        for (auto& comp : res.comps) CHECK(std::abs(comp.value()) < 1e-11);
    }
}

TEST_CASE("first structure equation and conjugation rule on smooth coframes", "[coframe]") {
    for (unsigned seed : {1u, 2u, 3u}) {
        NullCoframe cf = perturbed_coframe(seed);
        std::mt19937_64 rng(seed + 100);
        std::uniform_real_distribution<double> u(-0.8, 0.8);
        for (int t = 0; t < 5; ++t) {
            Point pt{u(rng), u(rng), u(rng), u(rng)};
            auto res = structure_equation_residuals(cf, pt);
            CHECK(res.first_structure < 1e-10);
            CHECK(res.conjugation < 1e-11);
            CHECK(res.reality < 1e-12);
        }
    }
}

TEST_CASE("connection antisymmetry is exact", "[coframe]") {
    NullCoframe cf = perturbed_coframe(9);
    Point pt{0.4, 0.1, -0.3, 0.5};
    ConnectionForms cn = connection(cf, pt, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                cplx a = cn.gamma[i][j][k].value();
                cplx b = cn.gamma[j][i][k].value();
                CHECK(std::abs(a + b) == 0.0);
            }
}

TEST_CASE("connection matches the coordinate-Christoffel oracle", "[coframe]") {
    NullCoframe cf = perturbed_coframe(4);
    Point pt{0.25, -0.15, 0.35, 0.45};
    ConnectionForms cn = connection(cf, pt, 2);
    auto oracle = oracles::frame_connection_fd(cf, pt);
    double scale = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                scale = std::max(scale, std::abs(cn.gamma_up(i, j, k).value()));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                cplx mine = cn.gamma_up(i, j, k).value();
                cplx fd = oracle[i][j][k][0];
                INFO("gamma^" << i + 1 << "_" << j + 1 << k + 1);
                CHECK(std::abs(mine - fd) < 1e-8 * scale);
            }
}

TEST_CASE("adapted transform: identity, metric invariance, kappa scaling", "[coframe]") {
    NullCoframe cf = perturbed_coframe(6);
    Point pt{0.3, 0.2, -0.4, 0.1};

    // A=1, phi=0, B=0 is the identity
    NullCoframe id = adapted_transform(cf, ScalarField::constant(1.0, 4), ScalarField::zero(4),
                                       ScalarField::zero(4));
    for (int i = 0; i < 4; ++i)
        for (int a = 0; a < 4; ++a)
            CHECK(std::abs(id.theta[i].at(pt, 0).comps[a].value() -
                           cf.theta[i].at(pt, 0).comps[a].value()) < 1e-14);

    // generic (A, phi, B): the implied metric is unchanged
    ScalarField A = expr_field("1 + 0.3*x1 + 0.1*x3^2", kChart4);
    ScalarField phi = expr_field("0.4*x2 - 0.2*x4", kChart4);
    ScalarField B = expr_field("0.5*x4 + i*(0.3 - 0.2*x1)", kChart4);
    NullCoframe tr = adapted_transform(cf, A, phi, B);
    auto g0 = metric_values(cf, pt);
    auto g1 = metric_values(tr, pt);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) CHECK(std::abs(g1[a][b] - g0[a][b]) < 1e-11);

    // kappa transformation law on a non-geodesic coframe:
    // d theta^3' ^ theta^1' ^ theta^3' = -A^2 e^{i phi} conj(kappa) vol'
    OpticalScalars os0 = optical_scalars(cf, pt);
    REQUIRE(std::abs(os0.kappa) > 1e-6);  // perturbed coframe is not geodesic
    FormValue dth3 = exterior_derivative(tr.theta[2].at(pt, 1));
    FormValue lhs = wedge(dth3, wedge(tr.theta[0].at(pt, 0), tr.theta[2].at(pt, 0)));
    FormValue vol1 = wedge(wedge(tr.theta[0].at(pt, 0), tr.theta[1].at(pt, 0)),
                           wedge(tr.theta[2].at(pt, 0), tr.theta[3].at(pt, 0)));
    cplx ratio = extract_coefficient(lhs, vol1).q;  // = -A^2 e^{i phi} conj(kappa)
    cplx a = A(pt, 0).value(), ph = phi(pt, 0).value();
    cplx want = -a * a * std::exp(cplx(0, 1) * ph) * std::conj(os0.kappa);
    CHECK(std::abs(ratio - want) < 1e-9 * std::max(1.0, std::abs(want)));

    // sigma law: d theta^1' ^ theta^1' ^ theta^3' =
    //            -A e^{2 i phi} (conj(B) conj(kappa) + conj(sigma)) vol'
    FormValue dth1 = exterior_derivative(tr.theta[0].at(pt, 1));
    FormValue lhs1 = wedge(dth1, wedge(tr.theta[0].at(pt, 0), tr.theta[2].at(pt, 0)));
    cplx ratio1 = extract_coefficient(lhs1, vol1).q;
    cplx b = B(pt, 0).value();
    cplx want1 = -a * std::exp(cplx(0, 2) * ph) *
                 (std::conj(b) * std::conj(os0.kappa) + std::conj(os0.sigma));
    CHECK(std::abs(ratio1 - want1) < 1e-9 * std::max(1.0, std::abs(want1)));

    // simultaneous vanishing of (kappa, sigma) is preserved: transform the
    // Heisenberg lift (geodesic shearfree) and re-extract
    NullCoframe hl = heisenberg_lift();
    Chart hchart = hl.chart;
    ScalarField A2 = expr_field("1 + 0.2*u", hchart);
    ScalarField phi2 = expr_field("0.3*z_re", hchart);
    ScalarField B2 = expr_field("0.4*z_im + 0.2*i*r", hchart);
    NullCoframe hlt = adapted_transform(hl, A2, phi2, B2);
    OpticalScalars osh = optical_scalars(hlt, Point{0.2, 0.4, -0.1, 0.3});
    CHECK(std::abs(osh.kappa) < 1e-11);
    CHECK(std::abs(osh.sigma) < 1e-11);
}

TEST_CASE("twist extraction agrees with the connection rho", "[coframe]") {
    NullCoframe cf = heisenberg_lift();
    Point pt{0.1, 0.6, -0.2, 0.4};
    OpticalScalars os = optical_scalars(cf, pt);
    CHECK(os.twist_consistency < 1e-11);
    CHECK(os.twisting);  // Heisenberg is strictly pseudoconvex: nonzero twist
    CHECK(std::abs(os.rho - 0.5 * cplx(-os.expansion, os.twist)) == 0.0);

    // geodesic case: the twist rescales as Omega' = A Omega under adapted
    // transforms
    ScalarField A = expr_field("1.5 + 0.2*u", Chart{{"u", "z_re", "z_im", "r"}});
    NullCoframe tr = adapted_transform(cf, A, ScalarField::zero(4),
                                       ScalarField::constant(cplx(0.3, -0.1), 4));
    OpticalScalars ost = optical_scalars(tr, pt);
    double av = A(pt, 0).value().real();
    CHECK(std::abs(ost.twist - av * os.twist) < 1e-10 * std::max(1.0, std::abs(os.twist)));
}

TEST_CASE("family congruence diverges on the Levi-flat cylinder", "[coframe]") {
    // a = 1, b = 0: the Levi form vanishes on z zbar = 2, yet rho != 0 there
    Scenario sc = catalog_get("kerr_family", {{"m", 1.0}, {"a", 1.0}, {"b", 0.0}});
    double zr = std::sqrt(2.0), zi = 0.0;
    Point pt{0.1, zr, zi, 2.0};
    CHECK(std::abs(levi_coefficient(*sc.cr, Point{0.1, zr, zi}).omega) < 1e-12);
    OpticalScalars os = optical_scalars(*sc.coframe, pt);
    CHECK(std::abs(os.rho) > 1e-3);
    CHECK(os.diverging);
    CHECK(std::abs(os.kappa) < 1e-10);
    CHECK(std::abs(os.sigma) < 1e-10);
}

TEST_CASE("degenerate coframe reports singularity", "[coframe]") {
    NullCoframe cf = minkowski_coframe();
    // scale theta^1 by x1 so the frame degenerates on x1 = 0
    cf.theta[0].comps[0] = ScalarField::coordinate(0, 4) * cf.theta[0].comps[0];
    cf.theta[0].comps[1] = ScalarField::coordinate(0, 4) * cf.theta[0].comps[1];
    cf.theta[1].comps[0] = ScalarField::coordinate(0, 4) * cf.theta[1].comps[0];
    cf.theta[1].comps[1] = ScalarField::coordinate(0, 4) * cf.theta[1].comps[1];
    CHECK_THROWS_AS(eval_frame(cf, Point{1e-12, 0, 0, 0}, 1), singular_frame_error);
    CHECK_NOTHROW(eval_frame(cf, Point{1.0, 0, 0, 0}, 1));
}
