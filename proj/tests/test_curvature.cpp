#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "curvature_oracle.hpp"
#include "nullframe/curvature.hpp"
#include "nullframe/expr.hpp"
#include "nullframe/petrov.hpp"

using namespace nullframe;

namespace {

const Chart kChart4{{"x1", "x2", "x3", "x4"}};

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

NullCoframe perturbed_coframe(unsigned seed, double eps = 0.12) {
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

TEST_CASE("Minkowski curvature vanishes", "[curvature]") {
    NullCoframe cf = minkowski_coframe();
    CurvaturePacket p = curvature_packet(cf, Point{0.2, -0.1, 0.4, 0.7});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) CHECK(std::abs(p.riemann_low[i][j][k][l]) == 0.0);
    CHECK(p.psi.norm_inf() == 0.0);
    auto rb = ricci_blocks(p, 0.0);
    CHECK(rb.res_a == 0.0);
    CHECK(rb.res_b == 0.0);
    CHECK(rb.res_c == 0.0);
    CHECK(classify(p.psi).label == PetrovClass::Zero);
}

TEST_CASE("Riemann identities hold on smooth random coframes", "[curvature]") {
    for (unsigned seed : {11u, 12u, 13u}) {
        NullCoframe cf = perturbed_coframe(seed);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-0.7, 0.7);
        Point pt{u(rng), u(rng), u(rng), u(rng)};
        CurvaturePacket p = curvature_packet(cf, pt);
        CHECK(p.antisymmetry < 1e-9 * p.scale);
        CHECK(p.pair_symmetry < 1e-9 * p.scale);
        CHECK(p.first_bianchi < 1e-9 * p.scale);
        CHECK(p.weyl_trace < 1e-9 * p.scale);
        // conjugation rule: swapping 1<->2 conjugates components
        auto cswap = [](int i) { return i < 2 ? 1 - i : i; };
        double conj_res = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l)
                        conj_res = std::max(conj_res,
                                            std::abs(std::conj(p.riemann_low[i][j][k][l]) -
                                                     p.riemann_low[cswap(i)][cswap(j)]
                                                                  [cswap(k)][cswap(l)]));
        CHECK(conj_res < 1e-9 * p.scale);
    }
}

TEST_CASE("frame curvature matches the coordinate finite-difference oracle", "[curvature]") {
    for (unsigned seed : {21u, 22u, 23u}) {
        NullCoframe cf = perturbed_coframe(seed);
        Point pt{0.2, -0.3, 0.15, 0.4};
        CurvaturePacket p = curvature_packet(cf, pt);
        auto fd = oracles::frame_riemann_fd(cf, pt);
        double scale = std::max(1.0, p.scale);
        double worst = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l)
                        worst = std::max(worst, std::abs(p.riemann_low[i][j][k][l] - fd[i][j][k][l]));
        INFO("seed " << seed);
        CHECK(worst < 1e-6 * scale);
    }
}

TEST_CASE("Psi_0 rescales under constant adapted transforms", "[curvature]") {
    NullCoframe cf = perturbed_coframe(31);
    Point pt{0.3, 0.1, -0.2, 0.25};
    CurvaturePacket p0 = curvature_packet(cf, pt);
    REQUIRE(std::abs(p0.psi.psi0) > 1e-8);
    double A = 1.3, phi = 0.7;
    cplx B(0.2, -0.4);
    NullCoframe tr = adapted_transform(cf, ScalarField::constant(A, 4),
                                       ScalarField::constant(phi, 4), ScalarField::constant(B, 4));
    CurvaturePacket p1 = curvature_packet(tr, pt);
    // e_4' = A e_4 and e_1' = e^{-i phi}(e_1 + B e_4), so
    // Psi_0' = C(e_4',e_1',e_4',e_1') = A^2 e^{-2 i phi} Psi_0.
    cplx want = A * A * std::exp(cplx(0, -2.0 * phi)) * p0.psi.psi0;
    CHECK(std::abs(p1.psi.psi0 - want) < 1e-8 * std::max(1.0, std::abs(want)));
}

TEST_CASE("petrov classification follows the degeneracy bullets", "[petrov]") {
    WeylScalars psi{};
    CHECK(classify(psi).label == PetrovClass::Zero);
    psi.psi4 = 2.0;
    CHECK(classify(psi).label == PetrovClass::N);
    psi.psi3 = cplx(0, 1);
    CHECK(classify(psi).label == PetrovClass::III);
    psi.psi2 = 0.5;
    CHECK(classify(psi).label == PetrovClass::IIorD);
    psi.psi1 = 1e-3;
    CHECK(classify(psi).label == PetrovClass::GeneralOrUnaligned);
    psi.psi0 = 3.0;
    CHECK(classify(psi).label == PetrovClass::GeneralOrUnaligned);

    // invariance under common rescaling
    WeylScalars big{psi.psi0 * 1e9, psi.psi1 * 1e9, psi.psi2 * 1e9, psi.psi3 * 1e9, psi.psi4 * 1e9};
    CHECK(classify(big).label == classify(psi).label);
    WeylScalars small{psi.psi0 * 1e-9, psi.psi1 * 1e-9, psi.psi2 * 1e-9, psi.psi3 * 1e-9,
                      psi.psi4 * 1e-9};
    // all tiny against the absolute floor max(1, |Psi|) -> everything zero
    CHECK(classify(small).label == PetrovClass::Zero);

    // zeroing the leading nonvanishing scalar moves strictly down the diagram
    WeylScalars w{1.0, 0.8, 0.6, 0.4, 0.2};
    std::vector<PetrovClass> seq;
    seq.push_back(classify(w).label);
    w.psi0 = 0;
    seq.push_back(classify(w).label);
    w.psi1 = 0;
    seq.push_back(classify(w).label);
    w.psi2 = 0;
    seq.push_back(classify(w).label);
    w.psi3 = 0;
    seq.push_back(classify(w).label);
    w.psi4 = 0;
    seq.push_back(classify(w).label);
    for (std::size_t k = 1; k < seq.size(); ++k) CHECK(static_cast<int>(seq[k]) >= static_cast<int>(seq[k - 1]));
    CHECK(seq.back() == PetrovClass::Zero);
    CHECK(classify(w, 1e-7).tol_rel == 1e-7);
    CHECK_THROWS_AS(classify(w, 0.0), domain_error);
}
