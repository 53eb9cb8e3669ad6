#include "cubicsieve/factorint.hpp"

#include <algorithm>
#include <map>

#include "cubicsieve/errors.hpp"

namespace cubicsieve {

namespace {

bool miller_rabin_u64(u64 n, u64 a) {
    if (a % n == 0) return true;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u64 x = pow_mod_u64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    // This base set is deterministic for all n < 3.3 * 10^24.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!miller_rabin_u64(n, a)) return false;
    }
    return true;
}

u64 pollard_rho_u64(u64 n) {
    if ((n & 1) == 0) return 2;
    // Brent's cycle detection.
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 q = 1;
        int lam = 1;
        while (d == 1) {
            x = y;
            for (int i = 0; i < lam; ++i) y = (mul_mod_u64(y, y, n) + c) % n;
            int k = 0;
            while (k < lam && d == 1) {
                int lim = std::min(128, lam - k);
                u64 ys = y;
                for (int i = 0; i < lim; ++i) {
                    y = (mul_mod_u64(y, y, n) + c) % n;
                    q = mul_mod_u64(q, x > y ? x - y : y - x, n);
                }
                d = gcd_u64(q, n);
                if (d == n) {
                    // Backtrack one step at a time.
                    d = 1;
                    y = ys;
                    do {
                        y = (mul_mod_u64(y, y, n) + c) % n;
                        d = gcd_u64(x > y ? x - y : y - x, n);
                    } while (d == 1);
                    break;
                }
                k += lim;
            }
            lam *= 2;
        }
        if (d != n) return d;
    }
}

std::vector<std::pair<u64, unsigned>> factor_u64(u64 n) {
    std::map<u64, unsigned> acc;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
        while (n % p == 0) {
            ++acc[p];
            n /= p;
        }
    }
    std::vector<u64> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        u64 m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime_u64(m)) {
            ++acc[m];
            continue;
        }
        u64 d = pollard_rho_u64(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    return {acc.begin(), acc.end()};
}

namespace {

bool miller_rabin_int(const Int& n, const Int& a) {
    if (a % n == 0) return true;
    Int d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    Int x = boost::multiprecision::powm(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    if (n <= Int(~0ull)) return is_prime_u64(n.convert_to<u64>());
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return false;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!miller_rabin_int(n, a)) return false;
    }
    // Extra bases derived from n itself, so results are reproducible.
    Int base = 41 + (n % 997);
    for (int i = 0; i < 8; ++i) {
        if (!miller_rabin_int(n, base)) return false;
        base = base * base % n + 1;
        if (base < 2) base = 2;
    }
    return true;
}

namespace {

Int pollard_rho_int(const Int& n) {
    if ((n & 1) == 0) return 2;
    for (Int c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            d = gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

}  // namespace

std::vector<std::pair<Int, unsigned>> factor_int(const Int& n) {
    if (n == 0) throw validation_error("factor_int: zero has no factorization");
    Int m = n < 0 ? Int(-n) : n;
    std::map<Int, unsigned> acc;
    for (u64 p = 2; p < 10000; p = (p == 2 ? 3 : p + 2)) {
        if (Int(p) * p > m) break;
        while (m % p == 0) {
            ++acc[Int(p)];
            m /= p;
        }
    }
    std::vector<Int> stack;
    if (m > 1) stack.push_back(m);
    while (!stack.empty()) {
        Int v = stack.back();
        stack.pop_back();
        if (v == 1) continue;
        if (v <= Int(~0ull)) {
            for (auto& [p, e] : factor_u64(v.convert_to<u64>())) acc[Int(p)] += e;
            continue;
        }
        if (is_probable_prime(v)) {
            ++acc[v];
            continue;
        }
        Int d = pollard_rho_int(v);
        stack.push_back(d);
        stack.push_back(v / d);
    }
    return {acc.begin(), acc.end()};
}

std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> comp(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (!comp[i]) {
            out.push_back(i);
            for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
        }
        if (i * i > limit) {
            for (u64 j = i + 1; j <= limit; ++j)
                if (!comp[j]) out.push_back(j);
            break;
        }
    }
    return out;
}

}  // namespace cubicsieve
