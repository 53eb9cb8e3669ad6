#pragma once

// Numeric evaluation of the exponential sums attached to the residue classes
// k_alpha: the exact-phase sums, their rational-denominator approximations,
// the error term linking the two, the sawtooth Fourier residual, and the
// incomplete rational exponential sum diagnostic.

#include <complex>
#include <cstdint>
#include <vector>

#include "cubicsieve/cubicring.hpp"
#include "cubicsieve/ints.hpp"

namespace cubicsieve {

struct ExpSumResult {
    std::complex<double> value;
    std::uint64_t termCount = 0;
};

// Sum over alpha of e((n (jX - k_alpha)) / N(alpha)), phases from exact
// integer residues. Every alpha must admit the cofactor residue class.
ExpSumResult sigma_sum(const CubicPoly& f, const std::vector<RingElem>& setL, const Int& n,
                       int j, std::uint64_t X);

// Sum over alpha of e(n j X / N(alpha) - n U inverse(B13) / q).
ExpSumResult e_sum(const CubicPoly& f, const std::vector<RingElem>& setL, const Int& n, int j,
                   std::uint64_t X);

struct ErrorTerm {
    double E = 0.0;       // -U/(q B13) + B23/(N B13)
    double residual = 0;  // |e(k/N) - e(U inv(B13)/q + E)|
    Int q, B13, B23, N, U;
};

// The error term of the phase identity e(k_alpha/N) = e(U inv(B13)/q + E);
// requires gcd(B13, q) = 1.
ErrorTerm error_term(const CubicPoly& f, const RingElem& alpha);

struct PsiResidual {
    double psi = 0.0;       // t - floor(t) - 1/2
    double partial = 0.0;   // -sum_{n<=H} sin(2 pi n t)/(pi n)
    double residual = 0.0;  // |psi - partial|
    double envelope = 0.0;  // min(1, 1/(H ||t||))
    double ratio = 0.0;     // residual / envelope
};

PsiResidual psi_residual(double t, std::uint64_t H);

struct IncompleteSumResult {
    std::complex<double> value;
    std::uint64_t termCount = 0;   // admissible n
    std::uint64_t skipped = 0;     // n with gcd(v(n) g(n), q) > 1
    double envelope = 0.0;         // right-hand side with implied constant 1
    double ratio = 0.0;            // |value| / envelope
};

// Sum over A < n <= A+B, gcd(v(n) g(n), q) = 1, of e(h f(n) ginv(n) / q) for
// squarefree q given by its factorization q = parts[0] * ... * parts[k].
IncompleteSumResult incomplete_rational_sum(const std::vector<Int>& fPoly,
                                            const std::vector<Int>& gPoly,
                                            const std::vector<Int>& vPoly,
                                            const std::vector<std::uint64_t>& parts, const Int& A,
                                            std::uint64_t B, const Int& h);

}  // namespace cubicsieve
