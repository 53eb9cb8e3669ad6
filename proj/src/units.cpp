#include "cubicsieve/units.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "cubicsieve/errors.hpp"

namespace cubicsieve {

namespace {

RingElem unit_inverse(const CubicPoly& f, const RingElem& u) {
    const Int N = norm(f, u);
    if (N != 1 && N != -1) throw internal_error("unit_inverse: norm is not +-1");
    const Mat3 B = cofactors_at(f, u);
    RingElem inv{B[0][0], B[0][1], B[0][2]};
    if (N < 0) inv = -inv;
    return inv;
}

RingElem elem_pow(const CubicPoly& f, RingElem base, long long k) {
    if (k < 0) {
        base = unit_inverse(f, base);
        k = -k;
    }
    RingElem r{1, 0, 0};
    while (k) {
        if (k & 1) r = mul(f, r, base);
        base = mul(f, base, base);
        k >>= 1;
    }
    return r;
}

double real_embedding_abs(const Embeddings& emb, const RingElem& a, int which) {
    return std::abs(emb.apply(a, which).real());
}

// Normalize the representative: positive first real embedding, log > 0.
RingElem normalize_unit(const CubicPoly& f, const Embeddings& emb, RingElem u) {
    if (std::abs(emb.apply(u, 0)) < 1.0) u = unit_inverse(f, u);
    if (emb.apply(u, 0).real() < 0) u = -u;
    return u;
}

struct LogUnit {
    RingElem elem;
    std::array<double, 2> lv;  // log-embedding vector (second entry unused in rank 1)
};

double dot2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] * b[0] + a[1] * b[1];
}

std::array<double, 2> sub2(const std::array<double, 2>& a, const std::array<double, 2>& b,
                           double k) {
    return {a[0] - k * b[0], a[1] - k * b[1]};
}

}  // namespace

UnitGroup find_units(const CubicPoly& f, int searchBound) {
    if (searchBound < 10) throw validation_error("find_units: searchBound must be >= 10");
    const Embeddings emb = embeddings(f);
    UnitGroup out;
    out.r1 = emb.r1;
    out.r2 = emb.r2;

    std::vector<RingElem> units;
    for (long long a0 = -searchBound; a0 <= searchBound; ++a0)
        for (long long a1 = -searchBound; a1 <= searchBound; ++a1)
            for (long long a2 = -searchBound; a2 <= searchBound; ++a2) {
                if (a0 == 0 && a1 == 0 && a2 == 0) continue;
                RingElem u{a0, a1, a2};
                const Int N = norm(f, u);
                if (N != 1 && N != -1) continue;
                // Identify u and -u.
                if (a0 < 0 || (a0 == 0 && (a1 < 0 || (a1 == 0 && a2 < 0)))) continue;
                units.push_back(u);
            }

    const double eps = 1e-7;
    if (emb.r2 == 1) {
        // Rank 1: reduce the log values by a tolerant Euclid, tracking elements.
        std::vector<std::pair<RingElem, double>> logs;
        for (const auto& u : units) {
            const double l = std::log(std::abs(emb.apply(u, 0)));
            if (std::abs(l) > eps) logs.emplace_back(u, l);
        }
        if (logs.empty())
            throw validation_error("find_units: no unit of infinite order within bound");
        auto best = *std::min_element(logs.begin(), logs.end(), [](auto& a, auto& b) {
            return std::abs(a.second) < std::abs(b.second);
        });
        bool changed = true;
        for (int round = 0; round < 64 && changed; ++round) {
            changed = false;
            for (const auto& [u, l] : logs) {
                const double k = std::round(l / best.second);
                const double r = l - k * best.second;
                if (std::abs(r) > eps && std::abs(r) < std::abs(best.second) - eps) {
                    RingElem v = mul(f, u, elem_pow(f, best.first, -(long long)k));
                    best = {v, r};
                    changed = true;
                }
            }
        }
        out.generators.push_back(normalize_unit(f, emb, best.first));
        return out;
    }

    // Rank 2 (totally real): reduce the 2-dimensional log lattice.
    std::vector<LogUnit> logs;
    for (const auto& u : units) {
        std::array<double, 2> lv{std::log(real_embedding_abs(emb, u, 0)),
                                 std::log(real_embedding_abs(emb, u, 1))};
        if (std::sqrt(dot2(lv, lv)) > eps) logs.push_back({u, lv});
    }
    if (logs.empty()) throw validation_error("find_units: no unit of infinite order within bound");
    std::sort(logs.begin(), logs.end(), [](auto& a, auto& b) {
        return dot2(a.lv, a.lv) < dot2(b.lv, b.lv);
    });
    LogUnit b1 = logs.front();
    const LogUnit* second = nullptr;
    for (const auto& lu : logs) {
        if (std::abs(lu.lv[0] * b1.lv[1] - lu.lv[1] * b1.lv[0]) > eps) {
            second = &lu;
            break;
        }
    }
    if (!second)
        throw validation_error("find_units: log lattice has rank < 2 within bound; raise it");
    LogUnit b2 = *second;

    auto gauss_reduce = [&]() {
        for (int i = 0; i < 64; ++i) {
            if (dot2(b2.lv, b2.lv) < dot2(b1.lv, b1.lv)) std::swap(b1, b2);
            const double k = std::round(dot2(b1.lv, b2.lv) / dot2(b1.lv, b1.lv));
            if (k == 0) break;
            b2.elem = mul(f, b2.elem, elem_pow(f, b1.elem, -(long long)k));
            b2.lv = sub2(b2.lv, b1.lv, k);
        }
    };
    gauss_reduce();
    // Swap in any found unit that the current basis misses.
    for (int round = 0; round < 32; ++round) {
        bool swapped = false;
        for (const auto& lu : logs) {
            const double det = b1.lv[0] * b2.lv[1] - b1.lv[1] * b2.lv[0];
            const double x = (lu.lv[0] * b2.lv[1] - lu.lv[1] * b2.lv[0]) / det;
            const double y = (b1.lv[0] * lu.lv[1] - b1.lv[1] * lu.lv[0]) / det;
            if (std::abs(x - std::round(x)) < 1e-6 && std::abs(y - std::round(y)) < 1e-6)
                continue;
            LogUnit v = lu;
            v.elem = mul(f, v.elem,
                         mul(f, elem_pow(f, b1.elem, -(long long)std::round(x)),
                             elem_pow(f, b2.elem, -(long long)std::round(y))));
            v.lv = sub2(sub2(v.lv, b1.lv, std::round(x)), b2.lv, std::round(y));
            b2 = v;
            gauss_reduce();
            swapped = true;
            break;
        }
        if (!swapped) break;
    }

    RingElem g1 = normalize_unit(f, emb, b1.elem);
    RingElem g2 = normalize_unit(f, emb, b2.elem);
    out.generators = {g1, g2};
    for (const auto& g : out.generators) {
        bool totallyPositive = true;
        for (int i = 0; i < 3; ++i)
            if (emb.apply(g, i).real() <= 0) totallyPositive = false;
        out.totally_positive.push_back(totallyPositive ? g : mul(f, g, g));
    }
    return out;
}

DomainDescriptor make_domain(const CubicPoly& f, const UnitGroup& units) {
    DomainDescriptor d{};
    d.emb = embeddings(f);
    d.generators = units.generators;
    if (units.r2 == 1) {
        if (units.generators.size() != 1)
            throw validation_error("make_domain: expected one generator in the (1,1) case");
        d.kind = DomainDescriptor::Kind::annulus;
        d.w = units.generators[0];
        d.wAbs = std::abs(d.emb.apply(d.w, 0));
        if (d.wAbs < 1.0) {
            d.w = unit_inverse(f, d.w);
            d.wAbs = std::abs(d.emb.apply(d.w, 0));
        }
        return d;
    }
    if (units.totally_positive.size() != 2)
        throw validation_error("make_domain: expected two totally positive generators");
    d.kind = DomainDescriptor::Kind::cone_pair;
    d.w1p = units.totally_positive[0];
    d.w2p = units.totally_positive[1];
    const RingElem one{1, 0, 0};
    const RingElem w12 = mul(f, d.w1p, d.w2p);
    auto embed = [&](const RingElem& g) {
        std::array<double, 3> v;
        for (int i = 0; i < 3; ++i) v[i] = d.emb.apply(g, i).real();
        return v;
    };
    d.cone1 = {embed(one), embed(d.w1p), embed(w12)};
    d.cone2 = {embed(one), embed(d.w2p), embed(w12)};
    return d;
}

namespace {

Membership cone_membership(const std::array<std::array<double, 3>, 3>& G,
                           const std::array<double, 3>& v, double eps) {
    // Solve c * G = v by Cramer on G^T.
    double m[3][3], rhs[3];
    for (int i = 0; i < 3; ++i) {
        rhs[i] = v[i];
        for (int j = 0; j < 3; ++j) m[i][j] = G[j][i];
    }
    auto det3 = [](double a[3][3]) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double d = det3(m);
    if (std::abs(d) < 1e-14) throw internal_error("cone basis is singular");
    std::array<double, 3> c;
    for (int k = 0; k < 3; ++k) {
        double mk[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) mk[i][j] = (j == k) ? rhs[i] : m[i][j];
        c[k] = det3(mk) / d;
    }
    const double scale = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), 1e-300});
    bool allPos = true, nearZero = false;
    for (double x : c) {
        if (x <= eps * scale) allPos = false;
        if (std::abs(x) <= eps * scale) nearZero = true;
    }
    if (allPos) return Membership::inside;
    bool allNonneg = true;
    for (double x : c)
        if (x < -eps * scale) allNonneg = false;
    if (allNonneg && nearZero) return Membership::boundary;
    return Membership::outside;
}

}  // namespace

Membership in_domain(const DomainDescriptor& D, const RingElem& alpha) {
    if (alpha.is_zero()) throw validation_error("in_domain: alpha is zero");
    if (D.kind == DomainDescriptor::Kind::annulus) {
        const double s = std::abs(D.emb.apply(alpha, 0));
        double nabs = 1.0;
        {
            std::complex<double> prod = 1.0;
            for (int i = 0; i < 3; ++i) prod *= D.emb.apply(alpha, i);
            nabs = std::abs(prod);
        }
        if (nabs <= 0) return Membership::outside;
        const double t = s / std::cbrt(nabs);
        if (std::abs(t - D.wAbs) <= D.boundaryEps * std::max(1.0, D.wAbs))
            return Membership::boundary;
        if (t >= 1.0 - D.boundaryEps && t < D.wAbs) return Membership::inside;
        return Membership::outside;
    }
    std::array<double, 3> v;
    for (int i = 0; i < 3; ++i) v[i] = D.emb.apply(alpha, i).real();
    const Membership m1 = cone_membership(D.cone1, v, D.boundaryEps);
    if (m1 == Membership::inside) return m1;
    const Membership m2 = cone_membership(D.cone2, v, D.boundaryEps);
    if (m2 == Membership::inside) return m2;
    if (m1 == Membership::boundary || m2 == Membership::boundary) return Membership::boundary;
    return Membership::outside;
}

std::vector<RingElem> associates_in_domain(const CubicPoly& f, const DomainDescriptor& D,
                                           const RingElem& alpha) {
    if (alpha.is_zero()) throw validation_error("associates_in_domain: alpha is zero");
    std::set<std::array<std::string, 3>> seen;
    std::vector<RingElem> out;
    auto consider = [&](const RingElem& cand) {
        if (in_domain(D, cand) != Membership::inside) return;
        std::array<std::string, 3> key{cand.a0.str(), cand.a1.str(), cand.a2.str()};
        if (seen.insert(key).second) out.push_back(cand);
    };
    if (D.kind == DomainDescriptor::Kind::annulus) {
        const double t =
            std::abs(D.emb.apply(alpha, 0)) / std::cbrt(std::abs(to_double(norm(f, alpha))));
        const double k0 = -std::log(std::max(t, 1e-300)) / std::log(D.wAbs);
        for (long long k = (long long)std::floor(k0) - 2; k <= (long long)std::floor(k0) + 2;
             ++k) {
            const RingElem u = mul(f, elem_pow(f, D.w, k), alpha);
            consider(u);
            consider(-u);
        }
    } else {
        const int K = 8;
        for (long long k1 = -K; k1 <= K; ++k1)
            for (long long k2 = -K; k2 <= K; ++k2) {
                const RingElem u = mul(
                    f, mul(f, elem_pow(f, D.generators[0], k1), elem_pow(f, D.generators[1], k2)),
                    alpha);
                consider(u);
                consider(-u);
            }
    }
    std::sort(out.begin(), out.end(), [](const RingElem& a, const RingElem& b) {
        if (a.a0 != b.a0) return a.a0 < b.a0;
        if (a.a1 != b.a1) return a.a1 < b.a1;
        return a.a2 < b.a2;
    });
    return out;
}

NormaStats norm_size_constant(const CubicPoly& f, const DomainDescriptor& D,
                              std::uint64_t sampleCount, std::uint64_t seed) {
    if (sampleCount < 100) throw validation_error("norm_size_constant: sampleCount must be >= 100");
    std::mt19937_64 gen(seed);
    auto draw = [&](long long lo, long long hi) {
        return lo + (long long)(gen() % (std::uint64_t)(hi - lo + 1));
    };
    NormaStats stats;
    stats.bucketMax.assign(64, 0.0);
    std::uint64_t guard = 0;
    const std::uint64_t guardLimit = sampleCount * 5000ull;
    while (stats.accepted < sampleCount) {
        if (++guard > guardLimit)
            throw validation_error("norm_size_constant: domain acceptance rate too low");
        RingElem a{draw(-50, 50), draw(-50, 50), draw(-50, 50)};
        if (a.is_zero()) continue;
        if (in_domain(D, a) != Membership::inside) continue;
        const Int N = norm(f, a);
        if (N == 0) continue;
        const double nabs = std::abs(to_double(N));
        const double mx = std::max({std::abs(to_double(a.a0)), std::abs(to_double(a.a1)),
                                    std::abs(to_double(a.a2))});
        const double ratio = mx / std::cbrt(nabs);
        ++stats.accepted;
        stats.maxRatio = std::max(stats.maxRatio, ratio);
        int bucket = std::min(63, (int)std::floor(std::log2(std::max(nabs, 1.0))));
        stats.bucketMax[bucket] = std::max(stats.bucketMax[bucket], ratio);
    }
    return stats;
}

DomainBoxBounds domain_bounds(const DomainDescriptor& D) {
    DomainBoxBounds out{};
    if (D.kind == DomainDescriptor::Kind::annulus) {
        // The distinguished real embedding is bounded by wAbs * |N|^{1/3} in
        // the annulus; the complex pair then carries at most |N|^{1/3}.
        out.embeddingBound = {std::max(D.wAbs, 1.0), 1.0, 1.0};
    } else {
        // In a cone alpha = sum x_j g_j with x_j >= 0 and N >= sum x_j^3, so
        // sigma_i(alpha) <= (sum_j sigma_i(g_j)) * |N|^{1/3}.
        for (int i = 0; i < 3; ++i) {
            double s1 = D.cone1[0][i] + D.cone1[1][i] + D.cone1[2][i];
            double s2 = D.cone2[0][i] + D.cone2[1][i] + D.cone2[2][i];
            out.embeddingBound[i] = std::max(s1, s2);
        }
    }
    // Pull back through the inverse of the embedding matrix V = [[1, r, r^2]].
    std::complex<double> r0 = D.emb.roots[0], r1 = D.emb.roots[1], r2 = D.emb.roots[2];
    std::complex<double> V[3][3] = {{1.0, r0, r0 * r0}, {1.0, r1, r1 * r1}, {1.0, r2, r2 * r2}};
    std::complex<double> det = V[0][0] * (V[1][1] * V[2][2] - V[1][2] * V[2][1]) -
                               V[0][1] * (V[1][0] * V[2][2] - V[1][2] * V[2][0]) +
                               V[0][2] * (V[1][0] * V[2][1] - V[1][1] * V[2][0]);
    for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) {
            // |(V^{-1})_{ji}| = |cofactor of V at (i, j)| / |det|.
            int r0i = i == 0 ? 1 : 0, r1i = i == 2 ? 1 : 2;
            int c0i = j == 0 ? 1 : 0, c1i = j == 2 ? 1 : 2;
            std::complex<double> minor = V[r0i][c0i] * V[r1i][c1i] - V[r0i][c1i] * V[r1i][c0i];
            acc += std::abs(minor / det) * out.embeddingBound[i];
        }
        out.coordRadius[j] = acc;
    }
    return out;
}

double domain_box_radius(const DomainDescriptor& D, double x) {
    const DomainBoxBounds b = domain_bounds(D);
    const double r = std::max({b.coordRadius[0], b.coordRadius[1], b.coordRadius[2]});
    return r * std::cbrt(x);
}

std::pair<double, double> a0_interval(const DomainDescriptor& D, const DomainBoxBounds& b,
                                      double x, long long a1, long long a2) {
    const double cbx = std::cbrt(x);
    double lo = -1e300, hi = 1e300;
    for (int i = 0; i < 3; ++i) {
        const std::complex<double> r = D.emb.roots[i];
        const std::complex<double> t = double(a1) * r + double(a2) * r * r;
        const double B = b.embeddingBound[i] * cbx;
        if (std::abs(r.imag()) < 1e-12) {
            lo = std::max(lo, -B - t.real());
            hi = std::min(hi, B - t.real());
        } else {
            const double s2 = B * B - t.imag() * t.imag();
            if (s2 < 0) return {1.0, 0.0};
            const double s = std::sqrt(s2);
            lo = std::max(lo, -s - t.real());
            hi = std::min(hi, s - t.real());
        }
    }
    return {lo, hi};
}

HarmonicSum principal_norm_harmonic_sum(const CubicPoly& f, const DomainDescriptor& D,
                                        std::uint64_t x) {
    if (x < 1) throw validation_error("principal_norm_harmonic_sum: x must be >= 1");
    const DomainBoxBounds bounds = domain_bounds(D);
    const double cbx = std::cbrt(double(x));
    const long long R1 = (long long)std::ceil(bounds.coordRadius[1] * cbx) + 1;
    const long long R2 = (long long)std::ceil(bounds.coordRadius[2] * cbx) + 1;
    const double Rmax = domain_box_radius(D, double(x)) + 2;

    // Machine-width norm evaluation when the magnitudes allow it.
    const double cmax = std::max(
        {1.0, std::abs(to_double(f.c0())), std::abs(to_double(f.c1())),
         std::abs(to_double(f.c2()))});
    const bool fast =
        384.0 * Rmax * Rmax * Rmax * std::pow(cmax, 6) < 1.0e38 && cmax < 1e9;
    const auto c2l = fast ? (long long)f.c2().convert_to<long long>() : 0;
    const auto c1l = fast ? (long long)f.c1().convert_to<long long>() : 0;
    const auto c0l = fast ? (long long)f.c0().convert_to<long long>() : 0;
    auto norm_fast = [&](long long a0, long long a1, long long a2) -> __int128 {
        using I = __int128;
        I m[3][3];
        I col[3] = {a0, a1, a2};
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) m[i][j] = col[i];
            I next0 = -I(c0l) * col[2];
            I next1 = col[0] - I(c1l) * col[2];
            I next2 = col[1] - I(c2l) * col[2];
            col[0] = next0;
            col[1] = next1;
            col[2] = next2;
        }
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };

    std::vector<std::pair<Int, RingElem>> reps;  // (norm, canonical representative)
    std::set<std::array<std::string, 3>> seen;
    for (long long a1 = -R1; a1 <= R1; ++a1)
        for (long long a2 = -R2; a2 <= R2; ++a2) {
            const auto [lod, hid] = a0_interval(D, bounds, double(x), a1, a2);
            if (lod > hid) continue;
            const long long lo = (long long)std::floor(lod) - 1;
            const long long hi = (long long)std::ceil(hid) + 1;
            for (long long a0 = lo; a0 <= hi; ++a0) {
                if (a0 == 0 && a1 == 0 && a2 == 0) continue;
                Int Nabs;
                if (fast) {
                    __int128 n = norm_fast(a0, a1, a2);
                    if (n == 0) continue;
                    if (n < 0) n = -n;
                    if (n > __int128(x)) continue;
                    Nabs = Int(std::uint64_t(n));
                } else {
                    const Int N = norm(f, RingElem{a0, a1, a2});
                    if (N == 0) continue;
                    Nabs = N < 0 ? Int(-N) : N;
                    if (Nabs > x) continue;
                }
                RingElem a{a0, a1, a2};
                if (in_domain(D, a) != Membership::inside) continue;
                const auto assoc = associates_in_domain(f, D, a);
                if (assoc.empty()) continue;
                const RingElem& canon = assoc.front();
                std::array<std::string, 3> key{canon.a0.str(), canon.a1.str(), canon.a2.str()};
                if (!seen.insert(key).second) continue;
                reps.emplace_back(Nabs, canon);
            }
        }

    std::sort(reps.begin(), reps.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    HarmonicSum out;
    out.idealCount = reps.size();
    const std::array<std::uint64_t, 4> marks{x / 8, x / 4, x / 2, x};
    size_t mi = 0;
    double run = 0.0;
    Rat exact = 0;
    size_t i = 0;
    for (; mi < marks.size(); ++mi) {
        for (; i < reps.size() && reps[i].first <= marks[mi]; ++i) {
            run += 1.0 / to_double(reps[i].first);
            exact += Rat(1) / Rat(reps[i].first);
        }
        if (marks[mi] >= 1) out.checkpoints.emplace_back((double)marks[mi], run);
    }
    out.sum = run;
    out.exactSum = exact;
    out.representatives = std::move(reps);
    // Least-squares slope of the checkpoints against log x.
    if (out.checkpoints.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (auto& [cx, cy] : out.checkpoints) {
            if (cx < 1) continue;
            const double lx = std::log(cx);
            sx += lx;
            sy += cy;
            sxx += lx * lx;
            sxy += lx * cy;
            ++n;
        }
        if (n >= 2 && n * sxx - sx * sx > 1e-12)
            out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return out;
}

}  // namespace cubicsieve
