#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "tvc/category.hpp"

using namespace tvc;

namespace {
const double tau = (1.0 + std::sqrt(5.0)) / 2.0;
const double pi = std::numbers::pi;
}  // namespace

TEST_CASE("fibonacci data") {
    auto fib = fibonacci();
    CHECK(fib.n == 2);
    CHECK(fib.d(1) == doctest::Approx(1.6180339887498949).epsilon(1e-12));
    CHECK(fib.f(1, 1, 0, 1, 1, 0).real() == doctest::Approx(1.0 / tau));
    CHECK(fib.f(1, 1, 1, 1, 1, 1).real() == doctest::Approx(-1.0 / tau));
    CHECK(fib.f(1, 1, 0, 1, 1, 1).real() == doctest::Approx(1.0 / std::sqrt(tau)));
    // deterministic relabel rows of the qubit F-move table
    CHECK(fib.f(1, 1, 0, 0, 0, 1) == cplx(1.0, 0.0));
    CHECK(fib.f(0, 0, 0, 1, 1, 1) == cplx(1.0, 0.0));
}

TEST_CASE("validate fibonacci passes all axioms below 1e-12") {
    auto rep = validate(fibonacci(), 1e-12);
    for (auto& c : rep.checks) {
        INFO(c.name, " residual ", c.residual);
        CHECK(c.pass);
    }
}

TEST_CASE("validate z2 passes with zero residual") {
    auto rep = validate(z2(), 1e-12);
    for (auto& c : rep.checks) {
        INFO(c.name, " residual ", c.residual);
        CHECK(c.residual == 0.0);
    }
}

TEST_CASE("perturbed fibonacci fails the pentagon") {
    auto fib = fibonacci();
    fib.f_ref(1, 1, 1, 1, 1, 1) = -fib.f(1, 1, 1, 1, 1, 1);
    auto rep = validate(fib, 1e-12);
    const AxiomCheck* pent = rep.find("pentagon");
    REQUIRE(pent != nullptr);
    CHECK_FALSE(pent->pass);
    CHECK(pent->residual > 1e-3);
}

TEST_CASE("total quantum dimension") {
    CHECK(total_dim(fibonacci()) ==
          doctest::Approx(std::sqrt(1.0 + tau * tau)).epsilon(1e-14));
    CHECK(total_dim(z2()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CategoryData trivial = load_category(save_category(z2()));
    (void)trivial;
}

TEST_CASE("twists") {
    auto fib = fibonacci();
    cplx th = twist(fib, 1);
    CHECK(std::abs(th - std::polar(1.0, -4.0 * pi / 5.0)) < 1e-14);
    CHECK(std::abs(twist(fib, 0) - cplx(1, 0)) < 1e-14);
    CHECK(std::abs(twist(z2(), 1) - cplx(1, 0)) < 1e-14);
}

TEST_CASE("fibonacci s-matrix") {
    auto fib = fibonacci();
    auto sm = s_matrix(fib);
    double D = total_dim(fib);
    CHECK(std::abs(sm.s[0][0] - cplx(1.0 / D, 0)) < 1e-12);
    CHECK(std::abs(sm.s[0][1] - cplx(tau / D, 0)) < 1e-12);
    CHECK(std::abs(sm.s[1][0] - sm.s[0][1]) < 1e-12);
    CHECK(std::abs(sm.s[1][1] - cplx(-1.0 / D, 0)) < 1e-12);
    CHECK(sm.unitarity_residual < 1e-10);
    // row 0 equals qdim / D exactly
    for (Label i = 0; i < 2; ++i)
        CHECK(std::abs(sm.s[0][size_t(i)] - cplx(fib.d(i) / D, 0)) < 1e-12);
}

TEST_CASE("s-matrix agrees with the twist form") {
    // S_ij = (1/D) sum_k delta_{i j k*} d_k theta_k / (theta_i theta_j)
    for (auto cat : {fibonacci(), z2()}) {
        auto sm = s_matrix(cat);
        double D = total_dim(cat);
        for (Label i = 0; i < cat.n; ++i)
            for (Label j = 0; j < cat.n; ++j) {
                cplx v = 0;
                for (Label k = 0; k < cat.n; ++k)
                    if (cat.delta(i, j, cat.dual(k)))
                        v += cat.d(k) * twist(cat, k) /
                             (twist(cat, i) * twist(cat, j));
                CHECK(std::abs(sm.s[size_t(i)][size_t(j)] - v / D) < 1e-12);
            }
    }
}

TEST_CASE("bosonic z2 is not modular") {
    auto sm = s_matrix(z2());
    CHECK(std::abs(sm.s[1][1] - cplx(1.0 / std::sqrt(2.0), 0)) < 1e-14);
    CHECK(sm.unitarity_residual > 0.5);
}

TEST_CASE("doubled torus representation") {
    auto fib = fibonacci();
    auto rep = doubled_torus_rep(fib);
    CHECK(rep.modular);
    // T_D entries over (1,1),(1,tau),(tau,1),(tau,tau)
    std::vector<cplx> want = {cplx(1, 0), std::polar(1.0, 4.0 * pi / 5.0),
                              std::polar(1.0, -4.0 * pi / 5.0), cplx(1, 0)};
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(rep.t_d[size_t(k)][size_t(k)] - want[size_t(k)]) < 1e-12);

    auto z = doubled_torus_rep(z2());
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(z.t_d[size_t(k)][size_t(k)] - cplx(1, 0)) < 1e-12);

    // (S_D T_D)^3 proportional to S_D^2 up to a unimodular scalar (modular case)
    int nn = 4;
    auto matmul = [&](const std::vector<std::vector<cplx>>& a,
                     const std::vector<std::vector<cplx>>& b) {
        std::vector<std::vector<cplx>> c(size_t(nn),
                                         std::vector<cplx>(size_t(nn), cplx(0)));
        for (int i = 0; i < nn; ++i)
            for (int k = 0; k < nn; ++k)
                for (int j = 0; j < nn; ++j)
                    c[size_t(i)][size_t(j)] +=
                        a[size_t(i)][size_t(k)] * b[size_t(k)][size_t(j)];
        return c;
    };
    auto st = matmul(rep.s_d, rep.t_d);
    auto st3 = matmul(matmul(st, st), st);
    auto s2 = matmul(rep.s_d, rep.s_d);
    // find the scalar from the largest entry of s2
    cplx scale = 0;
    double best = -1;
    for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j)
            if (std::abs(s2[size_t(i)][size_t(j)]) > best) {
                best = std::abs(s2[size_t(i)][size_t(j)]);
                scale = st3[size_t(i)][size_t(j)] / s2[size_t(i)][size_t(j)];
            }
    CHECK(std::abs(std::abs(scale) - 1.0) < 1e-10);
    for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j)
            CHECK(std::abs(st3[size_t(i)][size_t(j)] -
                           scale * s2[size_t(i)][size_t(j)]) < 1e-10);
}

TEST_CASE("category json round-trip") {
    auto fib = fibonacci();
    auto back = load_category(save_category(fib));
    CHECK(back.n == fib.n);
    double worst = 0;
    for (size_t k = 0; k < fib.f_tab.size(); ++k)
        worst = std::max(worst, std::abs(fib.f_tab[k] - back.f_tab[k]));
    for (size_t k = 0; k < fib.r_tab.size(); ++k)
        worst = std::max(worst, std::abs(fib.r_tab[k] - back.r_tab[k]));
    CHECK(worst < 1e-12);
}

TEST_CASE("structurally broken categories are rejected") {
    auto fib = fibonacci();
    auto text = save_category(fib);
    {
        auto bad = text;
        auto pos = bad.find("\"qdim\"");
        REQUIRE(pos != std::string::npos);
        bad.replace(bad.find("1.0", pos), 3, "2.0");
        CHECK_THROWS_AS((void)load_category(bad), category_error);
    }
    {
        // drop one admissible F entry
        CategoryData c = fib;
        c.f_ref(1, 1, 1, 1, 1, 1) = cplx(0, 0);
        CHECK_THROWS_AS((void)load_category(save_category(c)), category_error);
    }
    CHECK_THROWS_AS((void)load_category("{not json"), category_error);
}
