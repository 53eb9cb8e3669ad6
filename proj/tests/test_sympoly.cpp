#include <doctest.h>

#include <random>

#include "cubicsieve/errors.hpp"
#include "cubicsieve/sympoly.hpp"

using namespace cubicsieve;
using namespace cubicsieve::sympoly;

namespace {

SparsePoly var(Var v, int e = 1) { return SparsePoly::variable(v, e); }

// Deterministic random polynomial with small support.
SparsePoly random_poly(std::mt19937_64& gen) {
    SparsePoly p;
    const int terms = 1 + int(gen() % 4);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        for (int i = 0; i < 6; ++i) m.e[i] = std::uint8_t(gen() % 3);
        const long long c = (long long)(gen() % 19) - 9;
        p += SparsePoly::monomial(Int(c), m);
    }
    return p;
}

}  // namespace

TEST_CASE("multiplication matrix entries match the closed forms") {
    const PolyMatrix3 M = mult_matrix_symbolic();
    CHECK(M.at(0, 0) == var(A0));
    CHECK(M.at(1, 0) == var(A1));
    CHECK(M.at(2, 0) == var(A2));
    // First row, second column: -c0 a2.
    CHECK(M.at(0, 1) == -(var(C0) * var(A2)));
    CHECK(M.at(1, 1) == var(A0) - var(C1) * var(A2));
    CHECK(M.at(2, 1) == var(A1) - var(C2) * var(A2));
    CHECK(M.at(0, 2) == var(A2) * var(C0) * var(C2) - var(A1) * var(C0));
    CHECK(M.at(1, 2) == var(A2) * var(C1) * var(C2) - var(A2) * var(C0) - var(A1) * var(C1));
    // Bottom-right: a2 c2^2 - a2 c1 - a1 c2 + a0.
    CHECK(M.at(2, 2) ==
          var(A2) * var(C2, 2) - var(A2) * var(C1) - var(A1) * var(C2) + var(A0));
    CHECK_THROWS_AS(M.at(3, 0), validation_error);
}

TEST_CASE("specializing alpha = 1 gives the identity matrix") {
    const PolyMatrix3 M = mult_matrix_symbolic();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Int v = M.at(i, j).evaluate({1, 0, 0, 7, -3, 5});
            CHECK(v == (i == j ? 1 : 0));
        }
}

TEST_CASE("cofactors of the generic matrix match the displayed polynomials") {
    const PolyMatrix3 M = mult_matrix_symbolic();
    // B13 = -a2 a0 + (a2^2 c1 - a1 a2 c2 + a1^2)
    const SparsePoly b13 = -(var(A2) * var(A0)) + var(A2, 2) * var(C1) -
                           var(A1) * var(A2) * var(C2) + var(A1, 2);
    CHECK(cofactor(M, 0, 2) == b13);
    // B22 = a0^2 + a0(-a2 c1 - a1 c2) + (-a2^2 c0 c2 + a0 a2 c2^2 + a1 a2 c0)
    const SparsePoly b22 = var(A0, 2) + var(A0) * (-(var(A2) * var(C1)) - var(A1) * var(C2)) -
                           var(A2, 2) * var(C0) * var(C2) + var(A0) * var(A2) * var(C2, 2) +
                           var(A1) * var(A2) * var(C0);
    CHECK(cofactor(M, 1, 1) == b22);

    PolyMatrix3 ident;
    for (int i = 0; i < 3; ++i) ident.m[i][i] = SparsePoly::constant(1);
    CHECK(cofactor(ident, 0, 0) == SparsePoly::constant(1));
}

TEST_CASE("resultants") {
    // Shared root: Res(a0 + 1, a0^2 - 1) = 0.
    const SparsePoly p = var(A0) + SparsePoly::constant(1);
    const SparsePoly q = var(A0, 2) - SparsePoly::constant(1);
    CHECK(resultant_wrt_a0(p, q).is_zero());
    CHECK_THROWS_AS(resultant_wrt_a0(SparsePoly{}, q), validation_error);
    CHECK_THROWS_AS(resultant_wrt_a0(SparsePoly::constant(3), q), validation_error);

    // Res(a0 - t, Q) = Q(t) for linear first argument.
    const SparsePoly lin = var(A0) - var(C1);
    const SparsePoly quad = var(A0, 2) + var(C0);
    CHECK(resultant_wrt_a0(lin, quad) == var(C1, 2) + var(C0));
}

TEST_CASE("exact division") {
    std::mt19937_64 gen(42);
    for (int i = 0; i < 50; ++i) {
        SparsePoly a = random_poly(gen), b = random_poly(gen);
        if (b.is_zero()) continue;
        const SparsePoly prod = a * b;
        CHECK(prod.divide_exact(b) == a);
        if (!a.is_zero()) CHECK(a.divide_exact(a) == SparsePoly::constant(1));
    }
    const SparsePoly x = var(A0) + SparsePoly::constant(1);
    CHECK_THROWS_AS(x.divide_exact(SparsePoly{}), zero_divisor_error);
    CHECK_THROWS_AS(x.divide_exact(var(A1)), non_exact_division_error);
    CHECK(!x.try_divide(var(A0)).has_value());
}

TEST_CASE("ring axioms on random triples") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 60; ++i) {
        const SparsePoly a = random_poly(gen), b = random_poly(gen), c = random_poly(gen);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("resultant vanishes exactly on common factors") {
    std::mt19937_64 gen(99);
    int checked = 0;
    while (checked < 20) {
        SparsePoly common = random_poly(gen) * var(A0) + SparsePoly::constant(1 + int(gen() % 5));
        SparsePoly u = random_poly(gen), v = random_poly(gen);
        if (common.degree_in(A0) < 1) continue;
        SparsePoly p = common * (var(A0) + u);
        SparsePoly q = common * (var(A0, 2) + v);
        CHECK(resultant_wrt_a0(p, q).is_zero());
        ++checked;
    }
}

TEST_CASE("the five identities hold symbolically") {
    const IdentityReport rep = verify_identities();
    REQUIRE(rep.checks.size() == 6);
    for (const auto& c : rep.checks) {
        if (!c.informational) {
            INFO(c.name);
            CHECK(c.holds);
        }
    }
    CHECK(rep.all_required_hold());
}

TEST_CASE("the informational cross-resultant identity also holds") {
    const IdentityReport rep = verify_identities();
    CHECK(rep.checks.back().name == "cross_resultant_info");
    CHECK(rep.checks.back().holds);
}

TEST_CASE("derived q, q0, U, V match their closed forms") {
    const CofactorSystem s = build_cofactor_system();
    CHECK(s.q0 == var(A2) * var(C2) - var(A1));
    const SparsePoly qPaper = var(A2, 3) * var(C1) * var(C2) -
                              var(A1) * var(A2, 2) * var(C2, 2) - var(A2, 3) * var(C0) -
                              var(A1) * var(A2, 2) * var(C1) +
                              SparsePoly::constant(2) * var(A1, 2) * var(A2) * var(C2) -
                              var(A1, 3);
    CHECK(s.q == qPaper);
    CHECK(s.U == var(A2, 2));
    const SparsePoly vPaper = var(A2) * var(A0) + var(A2, 2) * var(C2, 2) -
                              SparsePoly::constant(2) * var(A1) * var(A2) * var(C2) +
                              var(A1, 2);
    CHECK(s.V == vPaper);
}

TEST_CASE("specialization at c = (0,0,2): q becomes -a1^3 - 2 a2^3") {
    const CofactorSystem s = build_cofactor_system();
    const SparsePoly qSpec = s.q.specialize_c(2, 0, 0);  // c0 = 2, c1 = 0, c2 = 0
    CHECK(qSpec == -var(A1, 3) - SparsePoly::constant(2) * var(A2, 3));
    const IdentityReport rep = verify_identities_at(2, 0, 0);
    CHECK(rep.all_required_hold());
}

TEST_CASE("a perturbed U breaks the Bezout identity") {
    const CofactorSystem s = build_cofactor_system();
    const SparsePoly uBad = s.U + SparsePoly::constant(1);
    CHECK(s.U * s.B[1][1] + s.V * s.B[0][2] == s.q * s.q0);
    CHECK(uBad * s.B[1][1] + s.V * s.B[0][2] != s.q * s.q0);
}

TEST_CASE("serialization is canonical and stable") {
    const SparsePoly p = var(A1) - SparsePoly::constant(3) * var(A0, 2) * var(C1);
    CHECK(p.to_string() == "-3*a0^2*c1^1 + 1*a1^1");
    CHECK(SparsePoly{}.to_string() == "0");
    CHECK(SparsePoly::constant(-7).to_string() == "-7");
}
