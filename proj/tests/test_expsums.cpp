#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "cubicsieve/errors.hpp"
#include "cubicsieve/expsums.hpp"
#include "cubicsieve/primeideals.hpp"
#include "cubicsieve/sieve.hpp"

using namespace cubicsieve;

namespace {

const CubicPoly kX3p2(0, 0, 2);

std::vector<RingElem> admissible_set(const CubicPoly& f, size_t count, std::uint64_t seed,
                                     int box) {
    std::mt19937_64 gen(seed);
    auto draw = [&] { return (long long)(gen() % (2 * box + 1)) - box; };
    std::vector<RingElem> out;
    while (out.size() < count) {
        RingElem a{draw(), draw(), draw()};
        if (a.is_zero()) continue;
        try {
            (void)error_term(f, a);
            out.push_back(a);
        } catch (const validation_error&) {
        }
    }
    return out;
}

}  // namespace

TEST_CASE("error term satisfies the phase identity to 1e-9") {
    const auto set = admissible_set(kX3p2, 300, 2024, 40);
    for (const auto& a : set) {
        const ErrorTerm et = error_term(kX3p2, a);
        CHECK(et.residual < 1e-9);
        // Triangle inequality on its two parts.
        const double bound = std::abs(to_double(et.U) / (to_double(et.q) * to_double(et.B13))) +
                             std::abs(to_double(et.B23) / (to_double(et.N) * to_double(et.B13)));
        CHECK(std::abs(et.E) <= bound + 1e-15);
    }
    // a1 = a2 = 0 makes q vanish: rejected.
    CHECK_THROWS_AS(error_term(kX3p2, RingElem{3, 0, 0}), validation_error);
}

TEST_CASE("sigma sum basics") {
    const auto one = admissible_set(kX3p2, 1, 5, 20);
    const ExpSumResult s0 = sigma_sum(kX3p2, one, 0, 1, 100);
    CHECK(s0.termCount == 1);
    CHECK(std::abs(s0.value - std::complex<double>(1.0, 0.0)) < 1e-12);

    const auto set = admissible_set(kX3p2, 40, 6, 30);
    for (long long n : {1, 2, 9}) {
        const ExpSumResult s = sigma_sum(kX3p2, set, n, 1, 100);
        CHECK(std::abs(s.value) <= double(s.termCount) + 1e-9);
        // Conjugate symmetry in n.
        const ExpSumResult sm = sigma_sum(kX3p2, set, -n, 1, 100);
        CHECK(std::abs(s.value - std::conj(sm.value)) < 1e-9);
    }
}

TEST_CASE("e sum approximates sigma within the per-term error bound") {
    const auto set = admissible_set(kX3p2, 30, 7, 30);
    for (long long n : {0, 1, 5, 17}) {
        const ExpSumResult s = sigma_sum(kX3p2, set, n, 1, 60);
        const ExpSumResult e = e_sum(kX3p2, set, n, 1, 60);
        if (n == 0) {
            CHECK(std::abs(e.value - std::complex<double>(double(set.size()), 0)) < 1e-9);
        }
        double bound = 1e-9;
        for (const auto& a : set)
            bound += 2.0 * std::numbers::pi * std::abs(double(n)) *
                     std::abs(error_term(kX3p2, a).E);
        CHECK(std::abs(s.value - e.value) <= bound);
    }
}

TEST_CASE("sawtooth residual") {
    // Half-integers are zeros of both the sawtooth and the partial sums.
    CHECK(psi_residual(0.5, 10).residual < 1e-12);
    CHECK(psi_residual(0.5, 1001).residual < 1e-12);
    CHECK(psi_residual(0.25, 1000).residual < 0.01);
    CHECK_THROWS_AS(psi_residual(0.3, 0), validation_error);

    // Envelope constant: bounded and stable across two sample batches.
    std::mt19937_64 gen(99);
    auto maxRatio = [&](int count) {
        double m = 0.0;
        for (int i = 0; i < count; ++i) {
            const double t = double(gen() % 1000000) / 1000000.0 * 10.0 - 5.0;
            const std::uint64_t H = 1 + gen() % 2000;
            m = std::max(m, psi_residual(t, H).ratio);
        }
        return m;
    };
    const double c1 = maxRatio(5000), c2 = maxRatio(5000);
    CHECK(c1 <= 0.75);
    CHECK(c2 <= 0.75);
    CHECK(std::max(c1, c2) <= 2.0 * std::min(c1, c2));

    // Residual decreases on average when H doubles.
    std::mt19937_64 g2(123);
    double m1 = 0, m2 = 0;
    for (int i = 0; i < 300; ++i) {
        const double t = double(g2() % 1000000) / 999999.0;
        m1 += psi_residual(t, 400).residual;
        m2 += psi_residual(t, 800).residual;
    }
    CHECK(m2 < 0.9 * m1);
}

TEST_CASE("incomplete rational sum") {
    const std::vector<Int> fp{2, 0, 1};   // n^2 + 2
    const std::vector<Int> gp{1, 1};      // n + 1
    const std::vector<Int> vp{1};
    // h = 0 mod q: all admissible phases are trivial.
    const auto r0 = incomplete_rational_sum(fp, gp, vp, {7, 11}, 0, 200, 77);
    CHECK(std::abs(r0.value - std::complex<double>(double(r0.termCount), 0)) < 1e-9);
    CHECK(r0.termCount + r0.skipped == 200);

    const auto r1 = incomplete_rational_sum(fp, gp, vp, {7, 11}, 0, 200, 3);
    CHECK(std::abs(r1.value) <= double(r1.termCount) + 1e-9);

    CHECK_THROWS_AS(incomplete_rational_sum(fp, gp, vp, {9}, 0, 10, 1), validation_error);
    CHECK_THROWS_AS(incomplete_rational_sum(fp, gp, vp, {}, 0, 10, 1), validation_error);
}

TEST_CASE("incomplete sum on the U/B13 shape stays below ten envelopes") {
    // f constant = U(a2), g linear = B13 along an arithmetic progression of
    // a0; a seeded parameter sweep recording the observed ratio.
    std::mt19937_64 gen(31337);
    for (int trial = 0; trial < 40; ++trial) {
        const long long a1 = 1 + (long long)(gen() % 9);
        const long long a2 = 1 + (long long)(gen() % 9);
        const long long T = 1 + (long long)(gen() % 30);
        const long long a0base = (long long)(gen() % 50);
        // For X^3 + 2: B13 = -a2 a0 + a1^2 evaluated along a0 = a0base + mT.
        const std::vector<Int> fpoly{Int(a2) * a2};
        const std::vector<Int> gpoly{Int(a1) * a1 - Int(a2) * a0base, -Int(a2) * T};
        const std::vector<Int> vpoly{1};
        const std::uint64_t q1 = 101, q2 = 211;
        const Int h = Int(1 + (long long)(gen() % 97));
        const auto r = incomplete_rational_sum(fpoly, gpoly, vpoly, {q1, q2}, 0,
                                               120 + gen() % 200, h);
        CHECK(std::abs(r.value) <= 10.0 * r.envelope);
    }
}

TEST_CASE("error term scales like N^2/M^5 on the toy enumeration") {
    // Every alpha from the toy run satisfies |q| >= M^3 and |B13| >= M^2, so
    // |E| * M^5 / N^2 stays below a modest constant (0.60 at first run).
    const CubicPoly f(2, 2, 5);
    ToyParams params;
    params.pminQ = 2;
    params.requireQ1Q2 = false;
    const ToyReport r = s0_s1_toy(f, 2000, 0.25, 0.05, params);
    REQUIRE(!r.terms.empty());
    const double lX = std::log(2000.0);
    const double M = std::exp(lX * 1.25 / 3.0), Ns = std::exp(lX * 1.5 / 3.0);
    double maxRatio = 0.0;
    for (const auto& t : r.terms) {
        const ErrorTerm et = error_term(f, t.alpha);
        maxRatio = std::max(maxRatio, std::abs(et.E) * std::pow(M, 5) / (Ns * Ns));
    }
    CHECK(maxRatio < 0.75);
}
