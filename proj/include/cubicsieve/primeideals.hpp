#pragma once

// First-degree prime ideal machinery for Z[r]: roots of f modulo p, splitting
// types, Hensel lifting, the residue class k_I with I | n - r iff n = k_I
// (mod N(I)), and the cofactor formula for principal ideals.

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "cubicsieve/cubicring.hpp"
#include "cubicsieve/ints.hpp"

namespace cubicsieve {

// P = (p, root - r), a first-degree prime of norm p.
struct PrimeIdealFD {
    std::uint64_t p = 0;
    std::uint64_t root = 0;
    friend bool operator==(const PrimeIdealFD&, const PrimeIdealFD&) = default;
};

struct IdealFactor {
    PrimeIdealFD prime;
    unsigned exponent = 1;
    friend bool operator==(const IdealFactor&, const IdealFactor&) = default;
};

// Product of first-degree prime-ideal powers. Construction validates the
// roots and merges repeated primes; gcd(N(I), Disc f) is checked by the
// operations that need it.
class IdealFD {
public:
    IdealFD(const CubicPoly& f, std::vector<IdealFactor> factors);

    const std::vector<IdealFactor>& factors() const { return factors_; }
    const Int& norm() const { return norm_; }

private:
    std::vector<IdealFactor> factors_;
    Int norm_;
};

struct KClass {
    Int k;
    Int modulus;
};

enum class SplitType { inert, one_root, split, ramified };
const char* to_string(SplitType t);

// All x in [0, p) with f(x) = 0 mod p, sorted. Brute force below 2^16, root
// extraction of gcd(X^p - X, f) above. Throws on composite p.
std::vector<std::uint64_t> roots_mod_p(const CubicPoly& f, std::uint64_t p);

// Roots of f modulo p^e (p prime), each in [0, p^e).
std::vector<Int> roots_mod_prime_power(const CubicPoly& f, std::uint64_t p, unsigned e);

SplitType splitting_type(const CubicPoly& f, std::uint64_t p);

// Unique lift of a simple root a of f mod p to a root mod p^k.
Int hensel_lift(const CubicPoly& f, std::uint64_t p, std::uint64_t a, unsigned k);

// 1 when the congruence n - r = 0 (mod I) is solvable, 0 when two distinct
// primes of the same norm divide I. Requires gcd(N(I), Disc f) = 1.
int rho(const CubicPoly& f, const IdealFD& I);

// The residue class with I | n - r iff n = k (mod N(I)); Hensel + CRT.
KClass k_of_ideal(const CubicPoly& f, const IdealFD& I);

// k_alpha = B23 * B13^{-1} mod |N(alpha)| for gcd(N, B13 Disc f) = 1.
KClass k_alpha_cofactor(const CubicPoly& f, const RingElem& alpha);

// True iff alpha divides beta in Z[r], i.e. adj(M_alpha) * beta = 0 mod N.
bool divides_elem(const CubicPoly& f, const RingElem& alpha, const RingElem& beta);

// True iff alpha | n - r.
bool divides(const CubicPoly& f, const RingElem& alpha, const Int& n);

// Number of prime ideals of norm <= x away from ramified primes.
std::uint64_t count_prime_ideals(const CubicPoly& f, std::uint64_t x);

// #{(a,b) in [A,A+M] x [B,B+M] : R | a - b r}, optionally with gcd(a,b) = 1,
// via the congruence a = b k_R (mod N(R)).
Int lattice_pair_count(const CubicPoly& f, const IdealFD& R, const Int& A, const Int& B,
                       std::uint64_t M, bool coprime_only);

// Factorization of (alpha) into first-degree primes, for alpha with
// gcd(N(alpha), B13 Disc f) = 1.
IdealFD factor_principal(const CubicPoly& f, const RingElem& alpha);

// Z-lattice of I in the basis {1, r, r^2}: rows are an upper-triangular
// Hermite basis, |det| = N(I). Independent oracle for membership tests.
Mat3 ideal_lattice(const CubicPoly& f, const IdealFD& I);

bool lattice_contains(const Mat3& hnf, const RingElem& beta);

// All ideals with ρ = 1 built from first-degree primes, norm <= maxNorm,
// away from ramified primes.
std::vector<IdealFD> enumerate_rho1_ideals(const CubicPoly& f, std::uint64_t maxNorm);

// Concurrent cache of roots_mod_p for one polynomial: any number of readers,
// writers take the exclusive lock only to insert.
class RootsCache {
public:
    explicit RootsCache(const CubicPoly& f) : f_(f) {}

    const std::vector<std::uint64_t>& get(std::uint64_t p);
    const CubicPoly& poly() const { return f_; }

private:
    CubicPoly f_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> cache_;
};

}  // namespace cubicsieve
