#pragma once

// Lower-bound sieve weights, the progression sieve over polynomial values,
// largest-prime-factor scanning, and the toy-scale decomposition of the
// weighted count S into X*S0 + S1.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cubicsieve/cubicring.hpp"
#include "cubicsieve/ints.hpp"
#include "cubicsieve/primeideals.hpp"

namespace cubicsieve {

// Rosser-Iwaniec lower-bound weights of dimension 1 with sieving limit D and
// sifting level z: lambda_d = mu(d) on squarefree d = p1...pr, z > p1 > ... >
// pr, subject to p1...p_{2l-1} * p_{2l}^3 <= D at every even prefix length,
// and 0 elsewhere.
struct SieveWeights {
    std::uint64_t D = 0;
    std::uint64_t z = 0;
    std::map<std::uint64_t, int> weights;  // supported d -> lambda_d

    int lambda(std::uint64_t d) const {
        auto it = weights.find(d);
        return it == weights.end() ? 0 : it->second;
    }
    // Sum of lambda_d over d | n (n need not be squarefree).
    int divisor_sum(std::uint64_t n) const;
};

SieveWeights rosser_weights(std::uint64_t D, std::uint64_t z);

struct PartialFactorization {
    std::uint64_t n = 0;
    Int value;                                             // f(n)
    std::vector<std::pair<std::uint64_t, unsigned>> factors;  // primes found by the sieve
    Int cofactor;                                          // remaining unfactored part
};

// Sieves f(n) for n in [nLo, nHi] by the arithmetic progressions attached to
// the roots of f modulo prime powers p^e <= primeBound^2, p <= primeBound.
std::vector<PartialFactorization> progression_sieve(const CubicPoly& f, std::uint64_t nLo,
                                                    std::uint64_t nHi, std::uint64_t primeBound,
                                                    RootsCache* cache = nullptr);

struct FactorizationRecord {
    std::uint64_t n = 0;
    Int value;
    std::vector<std::pair<Int, unsigned>> factors;
    Int pplus;  // largest prime factor
};

FactorizationRecord factor_polynomial_value(const CubicPoly& f, std::uint64_t n);

Int largest_prime_factor(const CubicPoly& f, std::uint64_t n);

struct ScanReport {
    std::uint64_t X = 0;
    std::vector<double> thresholds;    // c values
    std::vector<std::uint64_t> counts; // #{n in (X, 2X] : P+(f(n)) > n^(1+c)}
    std::vector<double> densities;
    unsigned threads = 1;
    double elapsedSeconds = 0.0;  // informational; kept out of serialized reports
};

// Deterministic across thread counts: the per-n predicate is fixed and counts
// are merged by summation over fixed subranges.
ScanReport scan_density(const CubicPoly& f, std::uint64_t X, std::vector<double> cList,
                        unsigned threads);

struct LogSplit {
    double log1 = 0.0;      // prime-ideal blocks of norm <= 3X
    double log2 = 0.0;      // blocks of norm > 3X
    double excluded = 0.0;  // ramified primes, outside the coprimality setup
};

LogSplit log_split(const CubicPoly& f, std::uint64_t n, std::uint64_t X);

// Tunable constants of the toy-scale enumeration; the implied-constant
// choices default to 1 and the prime floor for q defaults to max(256, |c0|).
struct ToyParams {
    double cq = 1.0;         // require |q(a1,a2)| >= cq * M^3
    double cb = 1.0;         // require B13(alpha) >= cb * M^2
    Int pminQ = -1;          // floor for P-(q); -1 means max(256, |c0|)
    bool requireQ1Q2 = true; // demand primes q1, q2 | q in the N^(5/7), N^(6/7) windows
    int unitSearchBound = 12;
};

struct ToyTermInfo {
    std::uint64_t p = 0;  // N(K)
    RingElem alpha;
    int weight = 0;
    std::uint64_t count = 0;  // #A_{KL}
};

struct ToyReport {
    Rat S, S0, S1;
    bool identityExact = false;     // S == X*S0 + S1
    bool log1BoundHolds = false;    // every positively weighted n passes the log bound
    double minLog1Margin = 0.0;     // min over counted n of log1 - (1+delta) log X
    std::uint64_t kCount = 0;       // #K ideals considered
    std::uint64_t pairCount = 0;    // #(K, alpha) terms
    std::uint64_t positiveWeightN = 0;
    std::vector<ToyTermInfo> terms;
};

ToyReport s0_s1_toy(const CubicPoly& f, std::uint64_t X, double delta, double theta,
                    const ToyParams& params);

}  // namespace cubicsieve
