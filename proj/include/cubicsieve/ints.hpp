#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace cubicsieve {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Canonical residue in [0, m), m > 0.
inline Int mod_floor(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

// g = gcd(a,b) >= 0 together with x, y such that a*x + b*y = g.
struct ExtGcd {
    Int g, x, y;
};

inline ExtGcd ext_gcd(Int a, Int b) {
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Int q = a / b;
        Int t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    return {a, x0, y0};
}

inline std::optional<Int> inv_mod(const Int& a, const Int& m) {
    if (m <= 0) throw std::invalid_argument("inv_mod: modulus must be positive");
    ExtGcd e = ext_gcd(mod_floor(a, m), m);
    if (e.g != 1) return std::nullopt;
    return mod_floor(e.x, m);
}

// x = r1 mod m1, x = r2 mod m2 for coprime moduli; result in [0, m1*m2).
inline Int crt_pair(const Int& r1, const Int& m1, const Int& r2, const Int& m2) {
    auto inv = inv_mod(m1, m2);
    if (!inv) throw std::invalid_argument("crt_pair: moduli not coprime");
    Int t = mod_floor((r2 - r1) * *inv, m2);
    return r1 + m1 * t;
}

inline Int pow_int(Int base, unsigned e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline double to_double(const Int& v) { return v.convert_to<double>(); }
inline double to_double(const Rat& v) { return v.convert_to<double>(); }

// ---- 64-bit modular helpers used by the sieving paths ----

inline std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t pow_mod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = m > 1 ? 1 % m : 0;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod_u64(r, a, m);
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace cubicsieve
