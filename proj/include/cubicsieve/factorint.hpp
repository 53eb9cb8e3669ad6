#pragma once

// Integer primality and factorization utilities: deterministic Miller-Rabin
// below 2^64, a probable-prime battery above, Brent's variant of Pollard rho.

#include <cstdint>
#include <utility>
#include <vector>

#include "cubicsieve/ints.hpp"

namespace cubicsieve {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

bool is_prime_u64(u64 n);

// One nontrivial factor of composite n (n > 1, not prime).
u64 pollard_rho_u64(u64 n);

// Sorted (prime, exponent) pairs, product equals n. n >= 1.
std::vector<std::pair<u64, unsigned>> factor_u64(u64 n);

// Strong probable-prime battery: deterministic MR below 2^64, otherwise MR to
// a fixed set of bases plus deterministically derived pseudo-random ones.
bool is_probable_prime(const Int& n);

// Factors |n| (n != 0): trial division, then u64 machinery, then Pollard rho
// on big integers for anything left. Probable primes above 2^64 are reported
// as prime factors.
std::vector<std::pair<Int, unsigned>> factor_int(const Int& n);

// Primes <= limit, increasing.
std::vector<u64> primes_up_to(u64 limit);

inline u64 largest_prime_factor_u64(u64 n) {
    u64 best = 1;
    for (auto& [p, e] : factor_u64(n)) best = p;
    return best;
}

}  // namespace cubicsieve
