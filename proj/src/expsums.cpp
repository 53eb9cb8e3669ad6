#include "cubicsieve/expsums.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cubicsieve/errors.hpp"
#include "cubicsieve/factorint.hpp"
#include "cubicsieve/primeideals.hpp"

namespace cubicsieve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> unit_phase(double frac) {
    return {std::cos(kTwoPi * frac), std::sin(kTwoPi * frac)};
}

// (a mod m) / m as a double, for exact rational phases.
double residue_fraction(const Int& a, const Int& m) {
    return to_double(mod_floor(a, m)) / to_double(m);
}

}  // namespace

ExpSumResult sigma_sum(const CubicPoly& f, const std::vector<RingElem>& setL, const Int& n,
                       int j, std::uint64_t X) {
    ExpSumResult out;
    std::vector<size_t> bad;
    std::complex<double> total = 0.0;
    for (size_t i = 0; i < setL.size(); ++i) {
        try {
            const KClass kc = k_alpha_cofactor(f, setL[i]);
            const Int phase = n * (Int(j) * X - kc.k);
            double frac = residue_fraction(phase, kc.modulus);
            if (norm(f, setL[i]) < 0) frac = -frac;
            total += unit_phase(frac);
            ++out.termCount;
        } catch (const validation_error&) {
            bad.push_back(i);
        }
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << "sigma_sum: inadmissible alpha at indices";
        for (size_t i : bad) os << ' ' << i;
        throw validation_error(os.str());
    }
    out.value = total;
    return out;
}

ExpSumResult e_sum(const CubicPoly& f, const std::vector<RingElem>& setL, const Int& n, int j,
                   std::uint64_t X) {
    ExpSumResult out;
    std::vector<size_t> bad;
    std::complex<double> total = 0.0;
    for (size_t i = 0; i < setL.size(); ++i) {
        const RingElem& a = setL[i];
        const Int N = norm(f, a);
        const Int Nabs = N < 0 ? Int(-N) : N;
        const Int q = eval_q(f, a.a1, a.a2);
        const Int qabs = q < 0 ? Int(-q) : q;
        const Mat3 B = cofactors_at(f, a);
        auto inv = qabs != 0 ? inv_mod(B[0][2], qabs) : std::nullopt;
        if (Nabs == 0 || !inv) {
            bad.push_back(i);
            continue;
        }
        double fracN = residue_fraction(n * Int(j) * X, Nabs);
        if (N < 0) fracN = -fracN;
        const double fracQ = residue_fraction(n * eval_U(a) * *inv, qabs);
        total += unit_phase(fracN - (q < 0 ? -fracQ : fracQ));
        ++out.termCount;
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << "e_sum: gcd(B13, q) > 1 at indices";
        for (size_t i : bad) os << ' ' << i;
        throw validation_error(os.str());
    }
    out.value = total;
    return out;
}

ErrorTerm error_term(const CubicPoly& f, const RingElem& alpha) {
    ErrorTerm out;
    out.N = norm(f, alpha);
    out.q = eval_q(f, alpha.a1, alpha.a2);
    out.U = eval_U(alpha);
    const Mat3 B = cofactors_at(f, alpha);
    out.B13 = B[0][2];
    out.B23 = B[1][2];
    if (out.q == 0 || gcd(out.B13, out.q) != 1)
        throw validation_error("error_term: gcd(B13, q) != 1");
    if (out.N == 0) throw validation_error("error_term: alpha is zero");

    out.E = -to_double(out.U) / (to_double(out.q) * to_double(out.B13)) +
            to_double(out.B23) / (to_double(out.N) * to_double(out.B13));

    const KClass kc = k_alpha_cofactor(f, alpha);
    const Int qabs = out.q < 0 ? Int(-out.q) : out.q;
    const double frac = residue_fraction(out.U * *inv_mod(out.B13, qabs), qabs);
    double fracK = residue_fraction(kc.k, kc.modulus);
    if (out.N < 0) fracK = -fracK;
    const std::complex<double> lhs = unit_phase(fracK);
    const std::complex<double> rhs = unit_phase((out.q < 0 ? -frac : frac) + out.E);
    out.residual = std::abs(lhs - rhs);
    return out;
}

PsiResidual psi_residual(double t, std::uint64_t H) {
    if (H < 1) throw validation_error("psi_residual: H must be >= 1");
    PsiResidual out;
    out.psi = t - std::floor(t) - 0.5;
    double s = 0.0;
    for (std::uint64_t n = H; n >= 1; --n)
        s += std::sin(kTwoPi * double(n) * t) / (std::numbers::pi * double(n));
    out.partial = -s;
    out.residual = std::abs(out.psi - out.partial);
    const double dist = std::abs(t - std::round(t));
    out.envelope = dist > 0 ? std::min(1.0, 1.0 / (double(H) * dist)) : 1.0;
    out.ratio = out.residual / out.envelope;
    return out;
}

namespace {

std::uint64_t eval_poly_mod(const std::vector<Int>& poly, const Int& x, std::uint64_t q) {
    Int acc = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
    return mod_floor(acc, q).convert_to<std::uint64_t>();
}

}  // namespace

IncompleteSumResult incomplete_rational_sum(const std::vector<Int>& fPoly,
                                            const std::vector<Int>& gPoly,
                                            const std::vector<Int>& vPoly,
                                            const std::vector<std::uint64_t>& parts, const Int& A,
                                            std::uint64_t B, const Int& h) {
    if (parts.empty()) throw validation_error("incomplete_rational_sum: empty factorization");
    u128 qWide = 1;
    for (std::uint64_t part : parts) {
        if (part < 1) throw validation_error("incomplete_rational_sum: parts must be >= 1");
        qWide *= part;
        if (qWide > u128(~0ull)) throw validation_error("incomplete_rational_sum: q too large");
    }
    const std::uint64_t q = std::uint64_t(qWide);
    for (auto& [p, e] : factor_u64(q))
        if (e > 1) throw validation_error("incomplete_rational_sum: q is not squarefree");

    IncompleteSumResult out;
    const std::uint64_t hq = mod_floor(h, q).convert_to<std::uint64_t>();
    std::complex<double> total = 0.0;
    for (std::uint64_t i = 1; i <= B; ++i) {
        const Int n = A + i;
        const std::uint64_t gv = eval_poly_mod(gPoly, n, q);
        const std::uint64_t vv = eval_poly_mod(vPoly, n, q);
        if (gcd_u64(mul_mod_u64(gv, vv % q, q), q) != 1) {
            ++out.skipped;
            continue;
        }
        const std::uint64_t fv = eval_poly_mod(fPoly, n, q);
        const auto bez = ext_gcd(Int(gv), Int(q));
        const std::uint64_t ginv = mod_floor(bez.x, q).convert_to<std::uint64_t>();
        const std::uint64_t phase = mul_mod_u64(mul_mod_u64(hq, fv, q), ginv, q);
        total += unit_phase(double(phase) / double(q));
        ++out.termCount;
    }
    out.value = total;

    // Envelope with implied constant 1 and epsilon = 0: the k-part split is
    // parts = {q0, q1, ..., qk}, Delta = gcd(q0, h).
    const int k = int(parts.size()) - 1;
    const std::uint64_t q0 = parts[0];
    const std::uint64_t delta = gcd_u64(q0, mod_floor(h, q0).convert_to<std::uint64_t>());
    const double Bd = double(B);
    double env = std::pow(double(delta) / double(q0), 1.0 / double(1 << (k + 1))) +
                 std::pow(double(q0) / (double(delta) * Bd * Bd), 1.0 / double(1 << (k + 1)));
    for (int j = 1; j <= k; ++j)
        env += std::pow(double(parts[k + 1 - j]) / Bd, 1.0 / double(1 << j));
    out.envelope = Bd * env;
    out.ratio = out.envelope > 0 ? std::abs(out.value) / out.envelope : 0.0;
    return out;
}

}  // namespace cubicsieve
