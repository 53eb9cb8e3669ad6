#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cubicsieve/errors.hpp"
#include "cubicsieve/factorint.hpp"
#include "cubicsieve/sieve.hpp"

using namespace cubicsieve;

namespace {
const CubicPoly kX3p2(0, 0, 2);
}

TEST_CASE("lower-bound weights: basic shape") {
    CHECK_THROWS_AS(rosser_weights(1, 2), validation_error);
    CHECK_THROWS_AS(rosser_weights(100, 1), validation_error);

    const SieveWeights w = rosser_weights(10000, 100);
    CHECK(w.lambda(1) == 1);
    for (const auto& [d, l] : w.weights) {
        CHECK((l == 1 || l == -1));
        CHECK(d <= w.D);
        // squarefree and z-smooth support
        for (auto& [p, e] : factor_u64(d)) {
            CHECK(e == 1);
            CHECK(p < w.z);
        }
    }
    // Every prime below z is supported with weight -1 in the lower-bound
    // construction (the cube condition binds at even chain lengths).
    for (std::uint64_t p : primes_up_to(99)) CHECK(w.lambda(p) == -1);
    // A pair fails the cube condition when p1 * p2^3 > D.
    CHECK(w.lambda(97ull * 89) == 0);   // 97 * 89^3 > 10^4
    CHECK(w.lambda(13ull * 3) == 1);    // 13 * 27 <= 10^4
}

TEST_CASE("divisor sums of the weights are nonpositive past 1") {
    const SieveWeights w = rosser_weights(10000, 100);
    CHECK(w.divisor_sum(1) == 1);
    // All z-smooth n up to 10^5 here; the acceptance suite pushes to 10^6.
    const auto ps = primes_up_to(99);
    std::uint64_t seen = 0;
    auto rec = [&](auto&& self, size_t i, std::uint64_t n) -> void {
        if (n > 1) {
            ++seen;
            CHECK(w.divisor_sum(n) <= 0);
        }
        for (size_t k = i; k < ps.size(); ++k) {
            if (n > 100000ull / ps[k]) break;
            self(self, k, n * ps[k]);
        }
    };
    rec(rec, 0, 1);
    CHECK(seen > 10000);
}

TEST_CASE("progression sieve marks exactly the root progressions") {
    const auto recs = progression_sieve(kX3p2, 1000, 1999, 50);
    for (const auto& rec : recs) {
        bool has5 = false, has31 = false;
        for (auto& [p, e] : rec.factors) {
            if (p == 5) has5 = true;
            if (p == 31) has31 = true;
        }
        CHECK(has5 == (rec.n % 5 == 2));
        const std::uint64_t m31 = rec.n % 31;
        CHECK(has31 == (m31 == 11 || m31 == 24 || m31 == 27));
    }
}

TEST_CASE("progression sieve recombines to f(n) exactly") {
    RootsCache cache(kX3p2);
    const auto recs = progression_sieve(kX3p2, 5000, 6000, 300, &cache);
    for (const auto& rec : recs) {
        Int prod = rec.cofactor;
        for (auto& [p, e] : rec.factors) prod *= pow_int(Int(p), e);
        Int v = rec.value < 0 ? Int(-rec.value) : rec.value;
        CHECK(prod == v);
        // Nothing below the bound is left in the cofactor.
        if (rec.cofactor > 1)
            for (std::uint64_t p : primes_up_to(300)) CHECK(rec.cofactor % p != 0);
    }
}

TEST_CASE("largest prime factor of f(n)") {
    CHECK(largest_prime_factor(kX3p2, 1) == 3);
    CHECK(largest_prime_factor(kX3p2, 3) == 29);
    CHECK(largest_prime_factor(kX3p2, 10) == 167);  // 1002 = 2 * 3 * 167
    // Agreement between the sieve path and direct factorization.
    const auto recs = progression_sieve(kX3p2, 2000, 2100, 100);
    for (const auto& rec : recs) {
        Int best = 1;
        for (auto& [p, e] : rec.factors) best = std::max(best, Int(p));
        if (rec.cofactor > 1)
            for (auto& [p, e] : factor_int(rec.cofactor)) best = std::max(best, p);
        CHECK(best == largest_prime_factor(kX3p2, rec.n));
    }
}

TEST_CASE("scan density: pinned values at X = 10^3") {
    const ScanReport rep = scan_density(kX3p2, 1000, {0.0, 0.05, 2.0}, 2);
    REQUIRE(rep.counts.size() == 3);
    CHECK(rep.counts[0] == 978);
    // Counts are nonincreasing in c.
    CHECK(rep.counts[0] >= rep.counts[1]);
    CHECK(rep.counts[1] >= rep.counts[2]);
    // n^3 < f(n) = n^3 + 2, so the c = 2 bucket counts exactly the n with
    // f(n) prime; there are 62 of them in (10^3, 2*10^3].
    CHECK(rep.counts[2] == 62);
    CHECK(rep.densities[0] == doctest::Approx(0.978));
}

TEST_CASE("scan density is identical across thread counts") {
    const ScanReport r1 = scan_density(kX3p2, 1000, {0.0, 0.02}, 1);
    const ScanReport r3 = scan_density(kX3p2, 1000, {0.0, 0.02}, 3);
    const ScanReport r8 = scan_density(kX3p2, 1000, {0.0, 0.02}, 8);
    CHECK(r1.counts == r3.counts);
    CHECK(r1.counts == r8.counts);
}

TEST_CASE("scan density validates its inputs") {
    CHECK_THROWS_AS(scan_density(kX3p2, 100, {0.0}, 1), validation_error);
    CHECK_THROWS_AS(scan_density(kX3p2, 1000, {2.5}, 1), validation_error);
}

TEST_CASE("log split: routing and exactness") {
    // f(n) prime above the cutoff: everything lands in log2.
    const LogSplit a = log_split(kX3p2, 3, 2);  // f(3) = 29 > 3X = 6
    CHECK(a.log1 == 0.0);
    CHECK(a.excluded == 0.0);
    CHECK(a.log2 == doctest::Approx(std::log(29.0)));

    // n = 10, X = 9: 1002 = 2 * 3 * 167; both 2 and 3 divide Disc = -108, so
    // they are excluded; 167 > 27 goes to log2.
    const LogSplit b = log_split(kX3p2, 10, 9);
    CHECK(b.log1 == 0.0);
    CHECK(b.excluded == doctest::Approx(std::log(6.0)));
    CHECK(b.log2 == doctest::Approx(std::log(167.0)));

    // The three buckets always reassemble log f(n).
    for (std::uint64_t n = 1001; n <= 1100; ++n) {
        const LogSplit s = log_split(kX3p2, n, 1000);
        const double total = std::log(to_double(kX3p2.eval(Int(n))));
        CHECK(s.log1 + s.log2 + s.excluded == doctest::Approx(total).epsilon(1e-12));
    }
    CHECK_THROWS_AS(log_split(kX3p2, 5000, 1000), validation_error);
}

TEST_CASE("toy decomposition: pinned weighted run") {
    // Field with 5 split, so the level z = X^delta = 6.69 reaches a split
    // prime and the weights actually act.
    const CubicPoly f(2, 2, 5);
    ToyParams params;
    params.pminQ = 2;
    params.requireQ1Q2 = false;
    const ToyReport r = s0_s1_toy(f, 2000, 0.25, 0.05, params);
    CHECK(r.identityExact);
    CHECK(r.log1BoundHolds);
    CHECK(r.pairCount == 528);
    CHECK(r.positiveWeightN == 8);
    CHECK(r.S == Rat(8));
    int zeroWeight = 0;
    for (const auto& t : r.terms) zeroWeight += (t.weight == 0);
    CHECK(zeroWeight == 286);
    CHECK(r.S == Rat(2000) * r.S0 + r.S1);
}

TEST_CASE("toy decomposition: empty window reported, not fatal") {
    ToyParams params;
    params.pminQ = 2;
    // Tiny delta: the K window (X^{3d}, X^{4d}] contains no primes.
    const ToyReport r = s0_s1_toy(kX3p2, 1000, 0.05, 0.05, params);
    CHECK(r.kCount == 0);
    CHECK(r.pairCount == 0);
    CHECK(r.identityExact);
    CHECK(r.S == Rat(0));
}

TEST_CASE("toy decomposition validates its inputs") {
    ToyParams params;
    CHECK_THROWS_AS(s0_s1_toy(kX3p2, 5, 0.3, 0.3, params), validation_error);
    CHECK_THROWS_AS(s0_s1_toy(kX3p2, 1000, 1.5, 0.3, params), validation_error);
}
