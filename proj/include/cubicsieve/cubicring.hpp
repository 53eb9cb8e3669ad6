#pragma once

// Exact arithmetic in Z[r] for a monic irreducible cubic f, together with the
// numeric embeddings of the field it generates.

#include <array>
#include <complex>
#include <string>

#include "cubicsieve/ints.hpp"

namespace cubicsieve {

// f = X^3 + c2 X^2 + c1 X + c0, irreducible over Q.
class CubicPoly {
public:
    // Throws reducible_polynomial_error when f has a rational root.
    CubicPoly(Int c2, Int c1, Int c0);

    // Accepts the CLI form "c2,c1,c0".
    static CubicPoly parse(const std::string& text);

    const Int& c2() const { return c2_; }
    const Int& c1() const { return c1_; }
    const Int& c0() const { return c0_; }
    const Int& disc() const { return disc_; }

    Int eval(const Int& x) const;
    Int eval_derivative(const Int& x) const;
    std::uint64_t eval_mod(std::uint64_t x, std::uint64_t m) const;
    bool is_ramified(std::uint64_t p) const { return disc_ % p == 0; }

    // (3, 0) when disc > 0, otherwise (1, 1).
    std::pair<int, int> signature() const;

    std::string to_string() const;
    friend bool operator==(const CubicPoly&, const CubicPoly&) = default;

private:
    Int c2_, c1_, c0_, disc_;
};

struct RingElem {
    Int a0, a1, a2;

    bool is_zero() const { return a0 == 0 && a1 == 0 && a2 == 0; }
    friend bool operator==(const RingElem&, const RingElem&) = default;
    RingElem operator-() const { return {-a0, -a1, -a2}; }
    std::string to_string() const;
};

using Mat3 = std::array<std::array<Int, 3>, 3>;

RingElem add(const RingElem& x, const RingElem& y);
RingElem sub(const RingElem& x, const RingElem& y);

// Product reduced modulo f.
RingElem mul(const CubicPoly& f, const RingElem& x, const RingElem& y);

// Multiplication-by-alpha matrix on {1, r, r^2}; column 0 is (a0, a1, a2).
Mat3 mult_matrix_at(const CubicPoly& f, const RingElem& alpha);

Int norm(const CubicPoly& f, const RingElem& alpha);

// Cofactor matrix B with B[i][j] = (-1)^(i+j) minor(i,j); the adjugate is its
// transpose, so mult_matrix * adj = norm * I.
Mat3 cofactors_at(const CubicPoly& f, const RingElem& alpha);

Mat3 transpose(const Mat3& m);

// Evaluations of the resultant-derived forms attached to f. q and q0 depend
// on (a1, a2) only.
Int eval_q(const CubicPoly& f, const Int& a1, const Int& a2);
Int eval_q0(const CubicPoly& f, const Int& a1, const Int& a2);
Int eval_U(const RingElem& alpha);
Int eval_V(const CubicPoly& f, const RingElem& alpha);

struct Embeddings {
    int r1 = 0, r2 = 0;
    // One real root first in the (1,1) case, sorted increasing in the (3,0)
    // case; complex conjugate pair carries +/- imaginary parts.
    std::array<std::complex<double>, 3> roots;

    std::complex<double> apply(const RingElem& alpha, int which) const;
};

// Roots of f to within `precision` (default 1e-12), signature certified by
// the sign of the discriminant.
Embeddings embeddings(const CubicPoly& f, double precision = 1e-12);

}  // namespace cubicsieve
