#include "cubicsieve/cubicring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cubicsieve/errors.hpp"
#include "cubicsieve/factorint.hpp"

namespace cubicsieve {

namespace {

// A monic cubic is reducible over Q exactly when it has an integer root,
// which must divide the constant term.
bool has_rational_root(const Int& c2, const Int& c1, const Int& c0) {
    if (c0 == 0) return true;
    auto eval = [&](const Int& x) { return ((x + c2) * x + c1) * x + c0; };
    std::vector<Int> divisors{1};
    for (auto& [p, e] : factor_int(c0)) {
        std::vector<Int> next;
        Int pk = 1;
        for (unsigned k = 0; k <= e; ++k) {
            for (auto& d : divisors) next.push_back(d * pk);
            pk *= p;
        }
        divisors = std::move(next);
    }
    for (auto& d : divisors)
        if (eval(d) == 0 || eval(-d) == 0) return true;
    return false;
}

}  // namespace

CubicPoly::CubicPoly(Int c2, Int c1, Int c0)
    : c2_(std::move(c2)), c1_(std::move(c1)), c0_(std::move(c0)) {
    if (has_rational_root(c2_, c1_, c0_))
        throw reducible_polynomial_error("cubic has a rational root: " + to_string());
    disc_ = c2_ * c2_ * c1_ * c1_ - 4 * c1_ * c1_ * c1_ - 4 * c2_ * c2_ * c2_ * c0_ -
            27 * c0_ * c0_ + 18 * c2_ * c1_ * c0_;
}

CubicPoly CubicPoly::parse(const std::string& text) {
    std::array<Int, 3> c;
    std::stringstream ss(text);
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ',')) {
        if (i >= 3) throw validation_error("--poly expects three integers c2,c1,c0");
        try {
            c[i++] = Int(tok);
        } catch (const std::exception&) {
            throw validation_error("--poly: bad integer '" + tok + "'");
        }
    }
    if (i != 3) throw validation_error("--poly expects three integers c2,c1,c0");
    return CubicPoly(c[0], c[1], c[2]);
}

Int CubicPoly::eval(const Int& x) const { return ((x + c2_) * x + c1_) * x + c0_; }

Int CubicPoly::eval_derivative(const Int& x) const { return (3 * x + 2 * c2_) * x + c1_; }

std::uint64_t CubicPoly::eval_mod(std::uint64_t x, std::uint64_t m) const {
    std::uint64_t c2m = mod_floor(c2_, m).convert_to<std::uint64_t>();
    std::uint64_t c1m = mod_floor(c1_, m).convert_to<std::uint64_t>();
    std::uint64_t c0m = mod_floor(c0_, m).convert_to<std::uint64_t>();
    std::uint64_t v = (x + c2m) % m;
    v = (mul_mod_u64(v, x, m) + c1m) % m;
    v = (mul_mod_u64(v, x, m) + c0m) % m;
    return v;
}

std::pair<int, int> CubicPoly::signature() const { return disc_ > 0 ? std::pair{3, 0} : std::pair{1, 1}; }

std::string CubicPoly::to_string() const {
    std::ostringstream os;
    os << "X^3";
    auto term = [&](const Int& c, const char* mono) {
        if (c == 0) return;
        os << (c > 0 ? " + " : " - ");
        Int a = c < 0 ? Int(-c) : c;
        if (a != 1 || mono[0] == '\0') os << a.str();
        os << mono;
    };
    term(c2_, "X^2");
    term(c1_, "X");
    term(c0_, "");
    return os.str();
}

std::string RingElem::to_string() const {
    std::ostringstream os;
    os << "(" << a0.str() << ", " << a1.str() << ", " << a2.str() << ")";
    return os.str();
}

RingElem add(const RingElem& x, const RingElem& y) { return {x.a0 + y.a0, x.a1 + y.a1, x.a2 + y.a2}; }
RingElem sub(const RingElem& x, const RingElem& y) { return {x.a0 - y.a0, x.a1 - y.a1, x.a2 - y.a2}; }

Mat3 mult_matrix_at(const CubicPoly& f, const RingElem& alpha) {
    Mat3 m;
    std::array<Int, 3> col{alpha.a0, alpha.a1, alpha.a2};
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) m[i][j] = col[i];
        std::array<Int, 3> next{-f.c0() * col[2], col[0] - f.c1() * col[2],
                                col[1] - f.c2() * col[2]};
        col = next;
    }
    return m;
}

RingElem mul(const CubicPoly& f, const RingElem& x, const RingElem& y) {
    Mat3 m = mult_matrix_at(f, x);
    RingElem r;
    r.a0 = m[0][0] * y.a0 + m[0][1] * y.a1 + m[0][2] * y.a2;
    r.a1 = m[1][0] * y.a0 + m[1][1] * y.a1 + m[1][2] * y.a2;
    r.a2 = m[2][0] * y.a0 + m[2][1] * y.a1 + m[2][2] * y.a2;
    return r;
}

namespace {

Int det3_int(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

Int norm(const CubicPoly& f, const RingElem& alpha) { return det3_int(mult_matrix_at(f, alpha)); }

Mat3 cofactors_at(const CubicPoly& f, const RingElem& alpha) {
    Mat3 m = mult_matrix_at(f, alpha);
    Mat3 b;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            int r0 = i == 0 ? 1 : 0, r1 = i == 2 ? 1 : 2;
            int c0 = j == 0 ? 1 : 0, c1 = j == 2 ? 1 : 2;
            Int minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
            b[i][j] = ((i + j) % 2 == 0) ? minor : -minor;
        }
    }
    return b;
}

Mat3 transpose(const Mat3& m) {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
    return t;
}

Int eval_q(const CubicPoly& f, const Int& a1, const Int& a2) {
    const Int &c0 = f.c0(), &c1 = f.c1(), &c2 = f.c2();
    return a2 * a2 * a2 * c1 * c2 - a1 * a2 * a2 * c2 * c2 - a2 * a2 * a2 * c0 -
           a1 * a2 * a2 * c1 + 2 * a1 * a1 * a2 * c2 - a1 * a1 * a1;
}

Int eval_q0(const CubicPoly& f, const Int& a1, const Int& a2) { return a2 * f.c2() - a1; }

Int eval_U(const RingElem& alpha) { return alpha.a2 * alpha.a2; }

Int eval_V(const CubicPoly& f, const RingElem& alpha) {
    const Int &a0 = alpha.a0, &a1 = alpha.a1, &a2 = alpha.a2, &c2 = f.c2();
    return a2 * a0 + (a2 * a2 * c2 * c2 - 2 * a1 * a2 * c2 + a1 * a1);
}

std::complex<double> Embeddings::apply(const RingElem& alpha, int which) const {
    const std::complex<double> r = roots[which];
    return to_double(alpha.a0) + to_double(alpha.a1) * r + to_double(alpha.a2) * r * r;
}

namespace {

long double eval_ld(long double c2, long double c1, long double c0, long double x) {
    return ((x + c2) * x + c1) * x + c0;
}

long double refine_root(long double c2, long double c1, long double c0, long double lo,
                        long double hi, double precision) {
    // Bisection until the bracket is small, then Newton polish.
    long double flo = eval_ld(c2, c1, c0, lo);
    for (int i = 0; i < 200 && hi - lo > precision * 0.25L; ++i) {
        long double mid = 0.5L * (lo + hi);
        long double fm = eval_ld(c2, c1, c0, mid);
        if ((fm <= 0) == (flo <= 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    long double x = 0.5L * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        long double fx = eval_ld(c2, c1, c0, x);
        long double dfx = (3.0L * x + 2.0L * c2) * x + c1;
        if (dfx == 0) break;
        long double nx = x - fx / dfx;
        if (nx < lo || nx > hi) break;
        x = nx;
    }
    return x;
}

}  // namespace

Embeddings embeddings(const CubicPoly& f, double precision) {
    if (precision < 1e-15 || precision > 1.0)
        throw validation_error("embeddings: precision out of supported range");
    const long double c2 = f.c2().convert_to<long double>();
    const long double c1 = f.c1().convert_to<long double>();
    const long double c0 = f.c0().convert_to<long double>();
    const long double bound =
        1.0L + std::max({std::fabs(c2), std::fabs(c1), std::fabs(c0)});

    Embeddings out;
    if (f.disc() < 0) {
        out.r1 = 1;
        out.r2 = 1;
        long double rho = refine_root(c2, c1, c0, -bound, bound, precision);
        // Deflate to X^2 + b X + c.
        long double b = rho + c2;
        long double c = (rho + c2) * rho + c1;
        long double im2 = 4.0L * c - b * b;
        long double im = im2 > 0 ? std::sqrt(im2) * 0.5L : 0.0L;
        out.roots = {std::complex<double>(double(rho), 0.0),
                     std::complex<double>(double(-0.5L * b), double(im)),
                     std::complex<double>(double(-0.5L * b), double(-im))};
    } else {
        out.r1 = 3;
        out.r2 = 0;
        // Three real roots separated by the critical points of f.
        long double disc_crit = c2 * c2 - 3.0L * c1;
        long double s = std::sqrt(disc_crit);
        long double x1 = (-c2 - s) / 3.0L;
        long double x2 = (-c2 + s) / 3.0L;
        long double r0 = refine_root(c2, c1, c0, -bound, x1, precision);
        long double r1v = refine_root(c2, c1, c0, x1, x2, precision);
        long double r2v = refine_root(c2, c1, c0, x2, bound, precision);
        out.roots = {std::complex<double>(double(r0), 0.0),
                     std::complex<double>(double(r1v), 0.0),
                     std::complex<double>(double(r2v), 0.0)};
    }
    return out;
}

}  // namespace cubicsieve
