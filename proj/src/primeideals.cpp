#include "cubicsieve/primeideals.hpp"

#include <algorithm>
#include <map>

#include "cubicsieve/errors.hpp"
#include "cubicsieve/factorint.hpp"

namespace cubicsieve {

using std::uint64_t;

namespace {

// ---- polynomial arithmetic over F_p for the large-p root finder ----

using FpPoly = std::vector<uint64_t>;  // little endian coefficients

void trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

FpPoly sub(const FpPoly& a, const FpPoly& b, uint64_t p) {
    FpPoly r = a;
    if (b.size() > r.size()) r.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i] % p) % p;
    trim(r);
    return r;
}

FpPoly mul(const FpPoly& a, const FpPoly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + mul_mod_u64(a[i], b[j], p)) % p;
    trim(r);
    return r;
}

uint64_t inv_mod_u64(uint64_t a, uint64_t p) { return pow_mod_u64(a % p, p - 2, p); }

// Division with remainder; p prime so leading coefficients invert.
std::pair<FpPoly, FpPoly> divmod(FpPoly a, const FpPoly& b, uint64_t p) {
    trim(a);
    if (b.empty()) throw internal_error("FpPoly divmod: zero divisor");
    FpPoly q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, 0);
    const uint64_t linv = inv_mod_u64(b.back(), p);
    while (degree(a) >= degree(b)) {
        const int shift = degree(a) - degree(b);
        const uint64_t c = mul_mod_u64(a.back(), linv, p);
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) {
            uint64_t t = mul_mod_u64(c, b[i], p);
            a[i + shift] = (a[i + shift] + p - t) % p;
        }
        trim(a);
    }
    trim(q);
    return {q, a};
}

FpPoly gcd(FpPoly a, FpPoly b, uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FpPoly r = divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        const uint64_t linv = inv_mod_u64(a.back(), p);
        for (auto& c : a) c = mul_mod_u64(c, linv, p);
    }
    return a;
}

FpPoly pow_mod(FpPoly base, uint64_t e, const FpPoly& mod, uint64_t p) {
    FpPoly r{1};
    base = divmod(std::move(base), mod, p).second;
    while (e) {
        if (e & 1) r = divmod(mul(r, base, p), mod, p).second;
        base = divmod(mul(base, base, p), mod, p).second;
        e >>= 1;
    }
    return r;
}

// g splits into distinct linear factors over F_p; collect its roots.
void collect_roots(const FpPoly& g, uint64_t p, std::vector<uint64_t>& out) {
    const int d = degree(g);
    if (d <= 0) return;
    if (d == 1) {
        uint64_t root = mul_mod_u64(p - g[0] % p, inv_mod_u64(g[1], p), p);
        out.push_back(root % p);
        return;
    }
    for (uint64_t s = 0;; ++s) {
        if (s >= p) throw internal_error("collect_roots: splitting failed");
        FpPoly h = pow_mod({s % p, 1}, (p - 1) / 2, g, p);
        h = gcd(sub(h, {1}, p), g, p);
        if (degree(h) > 0 && degree(h) < d) {
            collect_roots(h, p, out);
            collect_roots(divmod(g, h, p).first, p, out);
            return;
        }
    }
}

Int fdiv(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

const char* to_string(SplitType t) {
    switch (t) {
        case SplitType::inert: return "inert";
        case SplitType::one_root: return "one_root";
        case SplitType::split: return "split";
        case SplitType::ramified: return "ramified";
    }
    return "?";
}

std::vector<uint64_t> roots_mod_p(const CubicPoly& f, uint64_t p) {
    if (!is_prime_u64(p)) throw validation_error("roots_mod_p: p is not prime");
    std::vector<uint64_t> roots;
    if (p < (1u << 16)) {
        const uint64_t c2 = mod_floor(f.c2(), p).convert_to<uint64_t>();
        const uint64_t c1 = mod_floor(f.c1(), p).convert_to<uint64_t>();
        const uint64_t c0 = mod_floor(f.c0(), p).convert_to<uint64_t>();
        // Forward differences of a cubic: three additions per candidate.
        uint64_t v = c0;                                  // f(0)
        uint64_t d1 = (1 + c2 + c1) % p;                  // f(1) - f(0)
        uint64_t d2 = (6 + 2 * c2) % p;                   // second difference at 0
        const uint64_t d3 = 6 % p;
        for (uint64_t x = 0; x < p; ++x) {
            if (v == 0) roots.push_back(x);
            v += d1;
            if (v >= p) v -= p;
            d1 += d2;
            if (d1 >= p) d1 -= p;
            d2 += d3;
            if (d2 >= p) d2 -= p;
        }
        return roots;
    }
    FpPoly fp{mod_floor(f.c0(), p).convert_to<uint64_t>(),
              mod_floor(f.c1(), p).convert_to<uint64_t>(),
              mod_floor(f.c2(), p).convert_to<uint64_t>(), 1};
    FpPoly xp = pow_mod({0, 1}, p, fp, p);
    FpPoly g = gcd(sub(xp, {0, 1}, p), fp, p);
    collect_roots(g, p, roots);
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<Int> roots_mod_prime_power(const CubicPoly& f, uint64_t p, unsigned e) {
    if (!is_prime_u64(p)) throw validation_error("roots_mod_prime_power: p is not prime");
    if (e == 0) throw validation_error("roots_mod_prime_power: exponent must be positive");
    std::vector<Int> cur;
    for (uint64_t a : roots_mod_p(f, p)) cur.push_back(Int(a));
    Int pk = p;
    for (unsigned k = 2; k <= e; ++k) {
        const Int pk1 = pk;
        pk *= p;
        std::vector<Int> next;
        for (const Int& b : cur) {
            const Int fb = mod_floor(f.eval(b), pk);
            const Int df = mod_floor(f.eval_derivative(b), p);
            if (df != 0) {
                // Simple root: unique continuation.
                const Int t = mod_floor(-(fb / pk1) * *inv_mod(df, Int(p)), p);
                next.push_back(b + t * pk1);
            } else if (fb == 0) {
                for (uint64_t t = 0; t < p; ++t) next.push_back(b + t * pk1);
            }
        }
        cur = std::move(next);
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

SplitType splitting_type(const CubicPoly& f, uint64_t p) {
    if (f.is_ramified(p)) return SplitType::ramified;
    switch (roots_mod_p(f, p).size()) {
        case 0: return SplitType::inert;
        case 1: return SplitType::one_root;
        case 3: return SplitType::split;
        default: throw internal_error("double root at an unramified prime");
    }
}

Int hensel_lift(const CubicPoly& f, uint64_t p, uint64_t a, unsigned k) {
    if (!is_prime_u64(p)) throw validation_error("hensel_lift: p is not prime");
    if (f.is_ramified(p))
        throw discriminant_coprimality_error("hensel_lift: p divides Disc(f)");
    if (k == 0) throw validation_error("hensel_lift: k must be positive");
    if (a >= p || f.eval_mod(a, p) != 0)
        throw validation_error("hensel_lift: a is not a root of f mod p");
    const Int dfa = mod_floor(f.eval_derivative(a), p);
    if (dfa == 0) throw validation_error("hensel_lift: root is not simple");
    const Int dinv = *inv_mod(dfa, Int(p));

    Int x = a;
    Int pj = p;
    for (unsigned j = 2; j <= k; ++j) {
        const Int pj1 = pj;
        pj *= p;
        const Int fx = mod_floor(f.eval(x), pj);
        const Int t = mod_floor(-(fx / pj1) * dinv, p);
        x += t * pj1;
    }
    return x;
}

IdealFD::IdealFD(const CubicPoly& f, std::vector<IdealFactor> factors) {
    std::map<std::pair<uint64_t, uint64_t>, unsigned> merged;
    for (const auto& fac : factors) {
        if (!is_prime_u64(fac.prime.p)) throw validation_error("IdealFD: p is not prime");
        if (fac.prime.root >= fac.prime.p || f.eval_mod(fac.prime.root, fac.prime.p) != 0)
            throw validation_error("IdealFD: root is not a root of f mod p");
        if (fac.exponent == 0) throw validation_error("IdealFD: exponent must be >= 1");
        merged[{fac.prime.p, fac.prime.root}] += fac.exponent;
    }
    norm_ = 1;
    for (const auto& [key, e] : merged) {
        factors_.push_back({{key.first, key.second}, e});
        norm_ *= pow_int(Int(key.first), e);
    }
}

int rho(const CubicPoly& f, const IdealFD& I) {
    if (gcd(I.norm(), f.disc()) != 1)
        throw discriminant_coprimality_error("rho: N(I) shares a factor with Disc(f)");
    for (size_t i = 1; i < I.factors().size(); ++i)
        if (I.factors()[i].prime.p == I.factors()[i - 1].prime.p) return 0;
    return 1;
}

KClass k_of_ideal(const CubicPoly& f, const IdealFD& I) {
    if (rho(f, I) == 0) throw rho_zero_error("k_of_ideal: rho(I) = 0");
    Int k = 0, m = 1;
    for (const auto& fac : I.factors()) {
        const Int lift = hensel_lift(f, fac.prime.p, fac.prime.root, fac.exponent);
        const Int pe = pow_int(Int(fac.prime.p), fac.exponent);
        k = crt_pair(k, m, lift, pe);
        m *= pe;
    }
    return {k, m};
}

KClass k_alpha_cofactor(const CubicPoly& f, const RingElem& alpha) {
    const Int N = norm(f, alpha);
    if (N == 0) throw validation_error("k_alpha_cofactor: alpha is zero");
    const Int Nabs = N < 0 ? Int(-N) : N;
    if (gcd(Nabs, f.disc()) != 1)
        throw discriminant_coprimality_error("k_alpha_cofactor: N(alpha) not coprime to Disc(f)");
    const Mat3 B = cofactors_at(f, alpha);
    const auto inv = inv_mod(B[0][2], Nabs);
    if (!inv) throw validation_error("k_alpha_cofactor: B13 not invertible mod N(alpha)");
    const Int k = mod_floor(B[1][2] * *inv, Nabs);
    if (mod_floor(f.eval(k), Nabs) != 0)
        throw internal_error("k_alpha_cofactor: N(alpha) does not divide f(k)");
    return {k, Nabs};
}

bool divides_elem(const CubicPoly& f, const RingElem& alpha, const RingElem& beta) {
    if (alpha.is_zero()) throw validation_error("divides_elem: alpha is zero");
    const Int N = norm(f, alpha);
    const Int Nabs = N < 0 ? Int(-N) : N;
    const Mat3 adj = transpose(cofactors_at(f, alpha));
    const std::array<Int, 3> b{beta.a0, beta.a1, beta.a2};
    for (int i = 0; i < 3; ++i) {
        Int v = adj[i][0] * b[0] + adj[i][1] * b[1] + adj[i][2] * b[2];
        if (v % Nabs != 0) return false;
    }
    return true;
}

bool divides(const CubicPoly& f, const RingElem& alpha, const Int& n) {
    return divides_elem(f, alpha, RingElem{n, -1, 0});
}

uint64_t count_prime_ideals(const CubicPoly& f, uint64_t x) {
    if (x < 2) throw validation_error("count_prime_ideals: x must be >= 2");
    uint64_t count = 0;
    for (uint64_t p : primes_up_to(x)) {
        if (f.is_ramified(p)) continue;
        const size_t nroots = roots_mod_p(f, p).size();
        count += nroots;
        if (nroots == 1 && p <= x / p) count += 1;                   // norm p^2
        if (nroots == 0 && p <= x / p / p) count += 1;               // norm p^3
    }
    return count;
}

Int lattice_pair_count(const CubicPoly& f, const IdealFD& R, const Int& A, const Int& B,
                       uint64_t M, bool coprime_only) {
    const KClass kc = R.factors().empty() ? KClass{0, 1} : k_of_ideal(f, R);
    const Int& N = kc.modulus;
    Int total = 0;
    for (Int b = B; b <= B + M; ++b) {
        const Int t = mod_floor(b * kc.k, N);
        if (!coprime_only) {
            total += fdiv(A + Int(M) - t, N) - fdiv(A - 1 - t, N);
        } else {
            Int a = A + mod_floor(t - A, N);
            for (; a <= A + M; a += N)
                if (gcd(a, b) == 1) ++total;
        }
    }
    return total;
}

IdealFD factor_principal(const CubicPoly& f, const RingElem& alpha) {
    const Int N = norm(f, alpha);
    if (N == 0) throw validation_error("factor_principal: alpha is zero");
    std::vector<IdealFactor> factors;
    for (const auto& [p, e] : factor_int(N)) {
        if (p > Int(~0ull)) throw validation_error("factor_principal: prime factor exceeds 2^64");
        const uint64_t pu = p.convert_to<uint64_t>();
        if (f.is_ramified(pu))
            throw discriminant_coprimality_error("factor_principal: ramified prime divides N(alpha)");
        std::vector<uint64_t> matching;
        for (uint64_t a : roots_mod_p(f, pu)) {
            const Int v = alpha.a0 + alpha.a1 * a + alpha.a2 * Int(a) * a;
            if (mod_floor(v, pu) == 0) matching.push_back(a);
        }
        if (matching.empty())
            throw validation_error("factor_principal: a prime of degree > 1 divides (alpha)");
        if (matching.size() > 1)
            throw rho_zero_error("factor_principal: two primes of equal norm divide (alpha)");
        factors.push_back({{pu, matching[0]}, e});
    }
    return IdealFD(f, factors);
}

namespace {

// Upper-triangular Hermite basis of the lattice spanned by the given rows.
Mat3 hnf_rows(std::vector<std::array<Int, 3>> rows) {
    Mat3 out{};
    int next = 0;
    for (int col = 0; col < 3; ++col) {
        // Eliminate column `col` below position `next` by gcd steps.
        while (true) {
            int piv = -1;
            for (size_t i = next; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                if (piv < 0 || boost::multiprecision::abs(rows[i][col]) <
                                   boost::multiprecision::abs(rows[piv][col]))
                    piv = static_cast<int>(i);
            }
            if (piv < 0) break;
            std::swap(rows[next], rows[piv]);
            bool clean = true;
            for (size_t i = next + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                const Int q = fdiv(rows[i][col], rows[next][col]);
                for (int j = 0; j < 3; ++j) rows[i][j] -= q * rows[next][j];
                if (rows[i][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (static_cast<size_t>(next) < rows.size() && rows[next][col] != 0) {
            if (rows[next][col] < 0)
                for (int j = 0; j < 3; ++j) rows[next][j] = -rows[next][j];
            for (int j = 0; j < 3; ++j) out[next][j] = rows[next][j];
            ++next;
        }
    }
    if (next != 3) throw internal_error("hnf_rows: lattice has rank < 3");
    return out;
}

std::vector<std::array<Int, 3>> module_rows(const CubicPoly& f,
                                            const std::vector<RingElem>& gens) {
    std::vector<std::array<Int, 3>> rows;
    const RingElem r{0, 1, 0};
    for (const auto& g : gens) {
        RingElem v = g;
        for (int k = 0; k < 3; ++k) {
            rows.push_back({v.a0, v.a1, v.a2});
            v = mul(f, v, r);
        }
    }
    return rows;
}

Mat3 lattice_product(const CubicPoly& f, const Mat3& a, const Mat3& b) {
    std::vector<std::array<Int, 3>> rows;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const RingElem u{a[i][0], a[i][1], a[i][2]};
            const RingElem v{b[j][0], b[j][1], b[j][2]};
            const RingElem w = mul(f, u, v);
            rows.push_back({w.a0, w.a1, w.a2});
        }
    return hnf_rows(std::move(rows));
}

}  // namespace

Mat3 ideal_lattice(const CubicPoly& f, const IdealFD& I) {
    Mat3 acc{};
    acc[0][0] = acc[1][1] = acc[2][2] = 1;
    for (const auto& fac : I.factors()) {
        const Mat3 prime = hnf_rows(module_rows(
            f, {RingElem{Int(fac.prime.p), 0, 0}, RingElem{Int(fac.prime.root), -1, 0}}));
        for (unsigned e = 0; e < fac.exponent; ++e) acc = lattice_product(f, acc, prime);
    }
    return acc;
}

bool lattice_contains(const Mat3& hnf, const RingElem& beta) {
    std::array<Int, 3> v{beta.a0, beta.a1, beta.a2};
    for (int i = 0; i < 3; ++i) {
        if (v[i] % hnf[i][i] != 0) return false;
        const Int x = v[i] / hnf[i][i];
        for (int j = 0; j < 3; ++j) v[j] -= x * hnf[i][j];
    }
    return v[0] == 0 && v[1] == 0 && v[2] == 0;
}

std::vector<IdealFD> enumerate_rho1_ideals(const CubicPoly& f, uint64_t maxNorm) {
    std::vector<std::pair<uint64_t, std::vector<uint64_t>>> usable;
    for (uint64_t p : primes_up_to(maxNorm)) {
        if (f.is_ramified(p)) continue;
        auto roots = roots_mod_p(f, p);
        if (!roots.empty()) usable.emplace_back(p, std::move(roots));
    }
    std::vector<IdealFD> out;
    std::vector<IdealFactor> current;
    auto rec = [&](auto&& self, size_t idx, uint64_t normSoFar) -> void {
        if (!current.empty()) out.emplace_back(f, current);
        for (size_t i = idx; i < usable.size(); ++i) {
            const uint64_t p = usable[i].first;
            if (normSoFar > maxNorm / p) break;
            for (uint64_t root : usable[i].second) {
                uint64_t n = normSoFar;
                unsigned e = 0;
                while (n <= maxNorm / p) {
                    n *= p;
                    ++e;
                    current.push_back({{p, root}, e});
                    // Rewrite as a single factor with the right exponent.
                    current.back().exponent = e;
                    self(self, i + 1, n);
                    current.pop_back();
                }
            }
        }
    };
    rec(rec, 0, 1);
    return out;
}

const std::vector<uint64_t>& RootsCache::get(uint64_t p) {
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(p);
        if (it != cache_.end()) return it->second;
    }
    auto roots = roots_mod_p(f_, p);
    std::unique_lock lock(mutex_);
    return cache_.emplace(p, std::move(roots)).first->second;
}

}  // namespace cubicsieve
