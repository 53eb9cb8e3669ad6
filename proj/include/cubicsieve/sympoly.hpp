#pragma once

// Exact sparse multivariate polynomial arithmetic over Z in the six symbols
// a0, a1, a2, c0, c1, c2. This is enough to build the multiplication matrix
// of a generic alpha = a0 + a1*r + a2*r^2 in Z[r]/(r^3 + c2 r^2 + c1 r + c0)
// and to verify the cofactor/resultant identities it satisfies.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubicsieve/ints.hpp"

namespace cubicsieve::sympoly {

enum Var : int { A0 = 0, A1 = 1, A2 = 2, C0 = 3, C1 = 4, C2 = 5 };

inline constexpr std::array<const char*, 6> kVarNames{"a0", "a1", "a2", "c0", "c1", "c2"};

struct Monomial {
    std::array<std::uint8_t, 6> e{};

    int total_degree() const {
        int d = 0;
        for (auto x : e) d += x;
        return d;
    }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Graded lexicographic order with a0 > a1 > a2 > c0 > c1 > c2, descending,
// so map iteration starts at the leading term.
struct GrlexDesc {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.total_degree(), db = b.total_degree();
        if (da != db) return da > db;
        return a.e > b.e;
    }
};

class SparsePoly {
public:
    using TermMap = std::map<Monomial, Int, GrlexDesc>;

    SparsePoly() = default;

    static SparsePoly constant(Int c);
    static SparsePoly variable(Var v, int exponent = 1);
    static SparsePoly monomial(Int coeff, const Monomial& m);

    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    int total_degree() const;           // -1 for the zero polynomial
    int degree_in(Var v) const;         // -1 for the zero polynomial

    SparsePoly operator-() const;
    SparsePoly operator+(const SparsePoly& o) const;
    SparsePoly operator-(const SparsePoly& o) const;
    SparsePoly operator*(const SparsePoly& o) const;
    SparsePoly& operator+=(const SparsePoly& o);
    SparsePoly& operator-=(const SparsePoly& o);
    SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }
    friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

    // Exact division: returns the quotient if divisor * quotient == *this.
    std::optional<SparsePoly> try_divide(const SparsePoly& divisor) const;
    // Same, but throws zero_divisor_error / non_exact_division_error.
    SparsePoly divide_exact(const SparsePoly& divisor) const;

    Int evaluate(const std::array<Int, 6>& values) const;
    // Substitute numeric values for c0, c1, c2 only.
    SparsePoly specialize_c(const Int& c0, const Int& c1, const Int& c2) const;

    // Coefficient of a0^k as a polynomial in the remaining variables.
    SparsePoly coeff_of_a0(int k) const;

    // Canonical text form: terms in the order above, joined by " + ", each
    // written coef*a0^e0*...*c2^e5 with zero exponents omitted.
    std::string to_string() const;

private:
    void add_term(const Monomial& m, const Int& c);
    TermMap terms_;
};

struct PolyMatrix3 {
    std::array<std::array<SparsePoly, 3>, 3> m;

    SparsePoly& at(int i, int j);
    const SparsePoly& at(int i, int j) const;
};

// Multiplication-by-alpha matrix on the basis {1, r, r^2}: column j holds the
// coordinates of alpha * r^j reduced by r^3 = -c2 r^2 - c1 r - c0.
PolyMatrix3 mult_matrix_symbolic();

// Signed minor (-1)^(i+j) det(M with row i, column j removed); 0-based i, j.
SparsePoly cofactor(const PolyMatrix3& M, int i, int j);

SparsePoly det3(const PolyMatrix3& M);

// Sylvester resultant with respect to a0, computed exactly by fraction-free
// (Bareiss) elimination over the polynomial ring.
SparsePoly resultant_wrt_a0(const SparsePoly& p, const SparsePoly& q);

// lc(divisor)^(deg p - deg q + 1) * p = quotient * divisor + remainder, all
// degrees with respect to a0; deg_a0(remainder) < deg_a0(divisor).
struct PseudoDivision {
    SparsePoly quotient;
    SparsePoly remainder;
    int power;  // exponent applied to lc(divisor)
};
PseudoDivision pseudo_divide_a0(const SparsePoly& p, const SparsePoly& q);

// The named polynomials attached to the generic multiplication matrix.
struct CofactorSystem {
    PolyMatrix3 M;
    std::array<std::array<SparsePoly, 3>, 3> B;  // cofactors, 0-based
    SparsePoly norm;                             // det M
    SparsePoly q0;                               // (B23*B11 - B13*B21) / norm
    SparsePoly R;                                // Res(B13, norm; a0)
    SparsePoly R0;                               // Res(B13, B22; a0)
    SparsePoly q;                                // R0 / q0
    SparsePoly U, V;                             // U*B22 + V*B13 == R0
};
CofactorSystem build_cofactor_system();

struct IdentityCheck {
    std::string name;
    bool holds = false;
    bool informational = false;
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    bool all_required_hold() const;
};

// Verifies the five cofactor/resultant identities by exact subtraction to
// zero, plus one informational cross-resultant check. With c supplied the
// whole system is first specialized at those coefficients.
IdentityReport verify_identities();
IdentityReport verify_identities_at(const Int& c0, const Int& c1, const Int& c2);

}  // namespace cubicsieve::sympoly
