#include "cubicsieve/sympoly.hpp"

#include <sstream>

#include "cubicsieve/errors.hpp"

namespace cubicsieve::sympoly {

SparsePoly SparsePoly::constant(Int c) {
    SparsePoly p;
    if (c != 0) p.terms_.emplace(Monomial{}, std::move(c));
    return p;
}

SparsePoly SparsePoly::variable(Var v, int exponent) {
    if (exponent < 0) throw validation_error("SparsePoly: negative exponent");
    if (exponent == 0) return constant(1);
    Monomial m;
    m.e[v] = static_cast<std::uint8_t>(exponent);
    return monomial(1, m);
}

SparsePoly SparsePoly::monomial(Int coeff, const Monomial& m) {
    SparsePoly p;
    if (coeff != 0) p.terms_.emplace(m, std::move(coeff));
    return p;
}

int SparsePoly::total_degree() const {
    if (terms_.empty()) return -1;
    return terms_.begin()->first.total_degree();
}

int SparsePoly::degree_in(Var v) const {
    if (terms_.empty()) return -1;
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, int(m.e[v]));
    return d;
}

void SparsePoly::add_term(const Monomial& m, const Int& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

SparsePoly SparsePoly::operator-() const {
    SparsePoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
    SparsePoly r = *this;
    r += o;
    return r;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const {
    SparsePoly r = *this;
    r -= o;
    return r;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
    SparsePoly r;
    for (auto& [ma, ca] : terms_) {
        for (auto& [mb, cb] : o.terms_) {
            Monomial m;
            for (int i = 0; i < 6; ++i) {
                int e = int(ma.e[i]) + int(mb.e[i]);
                if (e > 255) throw internal_error("SparsePoly: exponent overflow");
                m.e[i] = static_cast<std::uint8_t>(e);
            }
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

std::optional<SparsePoly> SparsePoly::try_divide(const SparsePoly& divisor) const {
    if (divisor.is_zero()) throw zero_divisor_error("SparsePoly: division by zero polynomial");
    SparsePoly rem = *this;
    SparsePoly quot;
    const auto& [lm, lc] = *divisor.terms_.begin();
    while (!rem.is_zero()) {
        const auto& [rm, rc] = *rem.terms_.begin();
        Monomial m;
        for (int i = 0; i < 6; ++i) {
            if (rm.e[i] < lm.e[i]) return std::nullopt;
            m.e[i] = static_cast<std::uint8_t>(rm.e[i] - lm.e[i]);
        }
        if (rc % lc != 0) return std::nullopt;
        SparsePoly t = monomial(rc / lc, m);
        quot += t;
        rem -= t * divisor;
    }
    return quot;
}

SparsePoly SparsePoly::divide_exact(const SparsePoly& divisor) const {
    auto q = try_divide(divisor);
    if (!q) throw non_exact_division_error("SparsePoly: division is not exact");
    return *q;
}

Int SparsePoly::evaluate(const std::array<Int, 6>& values) const {
    Int total = 0;
    for (auto& [m, c] : terms_) {
        Int t = c;
        for (int i = 0; i < 6; ++i)
            if (m.e[i]) t *= pow_int(values[i], m.e[i]);
        total += t;
    }
    return total;
}

SparsePoly SparsePoly::specialize_c(const Int& c0, const Int& c1, const Int& c2) const {
    const std::array<Int, 3> cv{c0, c1, c2};
    SparsePoly r;
    for (auto& [m, c] : terms_) {
        Int t = c;
        for (int i = 0; i < 3; ++i)
            if (m.e[C0 + i]) t *= pow_int(cv[i], m.e[C0 + i]);
        Monomial nm;
        for (int i = 0; i < 3; ++i) nm.e[i] = m.e[i];
        r.add_term(nm, t);
    }
    return r;
}

SparsePoly SparsePoly::coeff_of_a0(int k) const {
    SparsePoly r;
    for (auto& [m, c] : terms_) {
        if (int(m.e[A0]) != k) continue;
        Monomial nm = m;
        nm.e[A0] = 0;
        r.add_term(nm, c);
    }
    return r;
}

std::string SparsePoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (int i = 0; i < 6; ++i)
            if (m.e[i]) os << '*' << kVarNames[i] << '^' << int(m.e[i]);
    }
    return os.str();
}

SparsePoly& PolyMatrix3::at(int i, int j) {
    if (i < 0 || i > 2 || j < 0 || j > 2) throw validation_error("PolyMatrix3: index out of range");
    return m[i][j];
}

const SparsePoly& PolyMatrix3::at(int i, int j) const {
    return const_cast<PolyMatrix3*>(this)->at(i, j);
}

PolyMatrix3 mult_matrix_symbolic() {
    using P = SparsePoly;
    const P c0 = P::variable(C0), c1 = P::variable(C1), c2 = P::variable(C2);
    PolyMatrix3 M;
    std::array<P, 3> col{P::variable(A0), P::variable(A1), P::variable(A2)};
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) M.m[i][j] = col[i];
        // Multiply the column by r: (b0, b1, b2) -> (-c0 b2, b0 - c1 b2, b1 - c2 b2).
        std::array<P, 3> next{-(c0 * col[2]), col[0] - c1 * col[2], col[1] - c2 * col[2]};
        col = next;
    }
    return M;
}

SparsePoly cofactor(const PolyMatrix3& M, int i, int j) {
    if (i < 0 || i > 2 || j < 0 || j > 2) throw validation_error("cofactor: index out of range");
    std::array<int, 2> rows, cols;
    for (int k = 0, t = 0; k < 3; ++k)
        if (k != i) rows[t++] = k;
    for (int k = 0, t = 0; k < 3; ++k)
        if (k != j) cols[t++] = k;
    SparsePoly minor = M.m[rows[0]][cols[0]] * M.m[rows[1]][cols[1]] -
                       M.m[rows[0]][cols[1]] * M.m[rows[1]][cols[0]];
    return ((i + j) % 2 == 0) ? minor : -minor;
}

SparsePoly det3(const PolyMatrix3& M) {
    SparsePoly d;
    for (int j = 0; j < 3; ++j) d += M.m[0][j] * cofactor(M, 0, j);
    return d;
}

namespace {

// Determinant of a square polynomial matrix by fraction-free elimination.
SparsePoly bareiss_det(std::vector<std::vector<SparsePoly>> a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return SparsePoly::constant(1);
    int sign = 1;
    SparsePoly prev = SparsePoly::constant(1);
    for (int k = 0; k + 1 < n; ++k) {
        if (a[k][k].is_zero()) {
            int pivot = -1;
            for (int i = k + 1; i < n; ++i)
                if (!a[i][k].is_zero()) {
                    pivot = i;
                    break;
                }
            if (pivot < 0) return {};
            std::swap(a[k], a[pivot]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                SparsePoly num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                a[i][j] = num.divide_exact(prev);
            }
            a[i][k] = {};
        }
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

}  // namespace

SparsePoly resultant_wrt_a0(const SparsePoly& p, const SparsePoly& q) {
    if (p.is_zero() || q.is_zero())
        throw validation_error("resultant_wrt_a0: zero polynomial input");
    const int m = p.degree_in(A0), n = q.degree_in(A0);
    if (m <= 0 || n <= 0)
        throw validation_error("resultant_wrt_a0: inputs must have positive degree in a0");
    std::vector<SparsePoly> pc(m + 1), qc(n + 1);
    for (int k = 0; k <= m; ++k) pc[k] = p.coeff_of_a0(k);
    for (int k = 0; k <= n; ++k) qc[k] = q.coeff_of_a0(k);
    const int dim = m + n;
    std::vector<std::vector<SparsePoly>> syl(dim, std::vector<SparsePoly>(dim));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) syl[i][i + (m - k)] = pc[k];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) syl[n + i][i + (n - k)] = qc[k];
    return bareiss_det(std::move(syl));
}

PseudoDivision pseudo_divide_a0(const SparsePoly& p, const SparsePoly& q) {
    if (q.is_zero()) throw zero_divisor_error("pseudo_divide_a0: zero divisor");
    const int dq = q.degree_in(A0);
    const SparsePoly lc = q.coeff_of_a0(dq);
    PseudoDivision out;
    out.power = std::max(0, p.degree_in(A0) - dq + 1);
    int pending = out.power;
    SparsePoly rem = p, quot;
    while (!rem.is_zero() && rem.degree_in(A0) >= dq) {
        const int dr = rem.degree_in(A0);
        SparsePoly t = rem.coeff_of_a0(dr) * SparsePoly::variable(A0, dr - dq);
        --pending;
        quot = lc * quot + t;
        rem = lc * rem - t * q;
    }
    for (int i = 0; i < pending; ++i) {
        quot = lc * quot;
        rem = lc * rem;
    }
    out.quotient = std::move(quot);
    out.remainder = std::move(rem);
    return out;
}

CofactorSystem build_cofactor_system() {
    CofactorSystem s;
    s.M = mult_matrix_symbolic();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s.B[i][j] = cofactor(s.M, i, j);
    s.norm = det3(s.M);

    const SparsePoly lhs = s.B[1][2] * s.B[0][0] - s.B[0][2] * s.B[1][0];
    if (auto q0 = lhs.try_divide(s.norm)) s.q0 = *q0;

    s.R = resultant_wrt_a0(s.B[0][2], s.norm);
    s.R0 = resultant_wrt_a0(s.B[0][2], s.B[1][1]);
    if (!s.q0.is_zero())
        if (auto q = s.R0.try_divide(s.q0)) s.q = *q;

    // Bezout pair from pseudo-division of B22 by the a0-linear B13:
    // lc(B13)^2 * B22 = A * B13 + S with S free of a0, so U = lc^2, V = -A.
    PseudoDivision pd = pseudo_divide_a0(s.B[1][1], s.B[0][2]);
    SparsePoly lc = s.B[0][2].coeff_of_a0(1);
    s.U = SparsePoly::constant(1);
    for (int i = 0; i < pd.power; ++i) s.U *= lc;
    s.V = -pd.quotient;
    return s;
}

namespace {

IdentityReport verify(const CofactorSystem& s, const SparsePoly& c0, const SparsePoly& c1,
                      const SparsePoly& c2) {
    IdentityReport rep;

    const SparsePoly lhs1 = s.B[1][2] * s.B[0][0] - s.B[0][2] * s.B[1][0];
    rep.checks.push_back({"cofactor_product_q0N", !s.q0.is_zero() && lhs1 == s.q0 * s.norm &&
                                                      s.q0.degree_in(A0) <= 0});
    rep.checks.push_back({"resultant_square", -(s.q0 * s.q0 * s.R) == s.R0 * s.R0});
    rep.checks.push_back({"resultant_factors_qq0", !s.q.is_zero() && s.R0 == s.q * s.q0});
    rep.checks.push_back({"bezout_UB22_VB13", s.U * s.B[1][1] + s.V * s.B[0][2] == s.q * s.q0});
    const bool colrel = s.B[1][0] == -(c0 * s.B[0][2]) &&
                        s.B[1][1] == s.B[0][0] - c1 * s.B[0][2] &&
                        s.B[1][2] == s.B[0][1] - c2 * s.B[0][2];
    rep.checks.push_back({"inverse_column_relations", colrel});

    bool cross = false;
    if (s.B[0][1].degree_in(A0) > 0) {
        const SparsePoly res12 = resultant_wrt_a0(s.B[0][2], s.B[0][1]);
        cross = -(s.q0 * res12) == s.R0;
    }
    rep.checks.push_back({"cross_resultant_info", cross, true});
    return rep;
}

CofactorSystem specialize_system(const CofactorSystem& s, const Int& c0, const Int& c1,
                                 const Int& c2) {
    CofactorSystem t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            t.M.m[i][j] = s.M.m[i][j].specialize_c(c0, c1, c2);
            t.B[i][j] = s.B[i][j].specialize_c(c0, c1, c2);
        }
    t.norm = s.norm.specialize_c(c0, c1, c2);
    t.q0 = s.q0.specialize_c(c0, c1, c2);
    t.R = s.R.specialize_c(c0, c1, c2);
    t.R0 = s.R0.specialize_c(c0, c1, c2);
    t.q = s.q.specialize_c(c0, c1, c2);
    t.U = s.U.specialize_c(c0, c1, c2);
    t.V = s.V.specialize_c(c0, c1, c2);
    return t;
}

}  // namespace

bool IdentityReport::all_required_hold() const {
    for (auto& c : checks)
        if (!c.informational && !c.holds) return false;
    return true;
}

IdentityReport verify_identities() {
    return verify(build_cofactor_system(), SparsePoly::variable(C0), SparsePoly::variable(C1),
                  SparsePoly::variable(C2));
}

IdentityReport verify_identities_at(const Int& c0, const Int& c1, const Int& c2) {
    return verify(specialize_system(build_cofactor_system(), c0, c1, c2),
                  SparsePoly::constant(c0), SparsePoly::constant(c1), SparsePoly::constant(c2));
}

}  // namespace cubicsieve::sympoly
