#include "cubicsieve/sieve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <thread>

#include "cubicsieve/errors.hpp"
#include "cubicsieve/factorint.hpp"
#include "cubicsieve/units.hpp"

namespace cubicsieve {

using std::uint64_t;

int SieveWeights::divisor_sum(uint64_t n) const {
    std::vector<uint64_t> ps;
    for (auto& [p, e] : factor_u64(n))
        if (p < z) ps.push_back(p);
    int total = 0;
    const size_t subsets = size_t(1) << ps.size();
    for (size_t mask = 0; mask < subsets; ++mask) {
        uint64_t d = 1;
        for (size_t i = 0; i < ps.size(); ++i)
            if (mask & (size_t(1) << i)) d *= ps[i];
        total += lambda(d);
    }
    return total;
}

SieveWeights rosser_weights(uint64_t D, uint64_t z) {
    if (D < 2) throw validation_error("rosser_weights: D below 2");
    if (z < 2 || z > D) throw validation_error("rosser_weights: need 2 <= z <= D");
    SieveWeights w;
    w.D = D;
    w.z = z;
    w.weights[1] = 1;
    std::vector<uint64_t> ps = primes_up_to(z - 1);
    std::sort(ps.begin(), ps.end(), std::greater<>());
    // Depth-first over decreasing prime chains; the cube condition applies
    // when the chain reaches even length.
    auto rec = [&](auto&& self, size_t from, uint64_t d, unsigned len) -> void {
        for (size_t i = from; i < ps.size(); ++i) {
            const uint64_t p = ps[i];
            const u128 nd = u128(d) * p;
            if (nd > D) continue;
            if ((len + 1) % 2 == 0 && u128(d) * p * p * p > D) continue;
            w.weights[uint64_t(nd)] = (len + 1) % 2 == 0 ? 1 : -1;
            self(self, i + 1, uint64_t(nd), len + 1);
        }
    };
    rec(rec, 0, 1, 0);
    return w;
}

std::vector<PartialFactorization> progression_sieve(const CubicPoly& f, uint64_t nLo,
                                                    uint64_t nHi, uint64_t primeBound,
                                                    RootsCache* cache) {
    if (nHi < nLo || nLo < 1) throw validation_error("progression_sieve: bad range");
    std::vector<PartialFactorization> out(nHi - nLo + 1);
    for (uint64_t n = nLo; n <= nHi; ++n) {
        auto& rec = out[n - nLo];
        rec.n = n;
        rec.value = f.eval(Int(n));
        rec.cofactor = rec.value < 0 ? Int(-rec.value) : rec.value;
    }
    const u128 cap = u128(primeBound) * primeBound;
    for (uint64_t p : primes_up_to(primeBound)) {
        const std::vector<uint64_t>& base =
            cache ? cache->get(p) : roots_mod_p(f, p);
        if (base.empty()) continue;
        uint64_t pe = p;
        unsigned e = 1;
        while (true) {
            const std::vector<Int> roots =
                e == 1 ? std::vector<Int>(base.begin(), base.end())
                       : roots_mod_prime_power(f, p, e);
            if (roots.empty()) break;
            for (const Int& root : roots) {
                const uint64_t a = root.convert_to<uint64_t>();
                uint64_t n0 = nLo + (a + pe - (nLo % pe)) % pe;
                for (uint64_t n = n0; n <= nHi; n += pe) {
                    auto& rec = out[n - nLo];
                    if (rec.cofactor % p != 0)
                        throw internal_error("progression_sieve: progression misses its prime");
                    rec.cofactor /= p;
                    rec.factors.emplace_back(p, 1u);
                }
            }
            if (u128(pe) * p > cap) break;
            pe *= p;
            ++e;
        }
    }
    for (auto& rec : out) {
        std::sort(rec.factors.begin(), rec.factors.end());
        std::vector<std::pair<uint64_t, unsigned>> merged;
        for (auto& [p, e] : rec.factors) {
            if (!merged.empty() && merged.back().first == p)
                merged.back().second += e;
            else
                merged.emplace_back(p, e);
        }
        rec.factors = std::move(merged);
    }
    return out;
}

FactorizationRecord factor_polynomial_value(const CubicPoly& f, uint64_t n) {
    FactorizationRecord rec;
    rec.n = n;
    rec.value = f.eval(Int(n));
    if (rec.value == 0) throw validation_error("factor_polynomial_value: f(n) = 0");
    rec.factors = factor_int(rec.value);
    rec.pplus = 1;
    for (auto& [p, e] : rec.factors) rec.pplus = std::max(rec.pplus, p);
    return rec;
}

Int largest_prime_factor(const CubicPoly& f, uint64_t n) {
    return factor_polynomial_value(f, n).pplus;
}

namespace {

// P+ of the cofactor left by the progression sieve, combined with the primes
// the sieve already extracted.
Int finish_pplus(const PartialFactorization& rec) {
    Int best = 1;
    for (auto& [p, e] : rec.factors) best = std::max(best, Int(p));
    if (rec.cofactor > 1) {
        if (is_probable_prime(rec.cofactor)) {
            best = std::max(best, rec.cofactor);
        } else {
            for (auto& [p, e] : factor_int(rec.cofactor)) best = std::max(best, p);
        }
    }
    return best;
}

}  // namespace

ScanReport scan_density(const CubicPoly& f, uint64_t X, std::vector<double> cList,
                        unsigned threads) {
    if (X < 1000) throw validation_error("scan_density: X must be >= 10^3");
    for (double c : cList)
        if (c < 0.0 || c > 2.0) throw validation_error("scan_density: c values must lie in [0, 2]");
    if (threads == 0) threads = 1;

    const auto t0 = std::chrono::steady_clock::now();
    RootsCache cache(f);
    const uint64_t primeBound = 2000;
    const uint64_t lo = X + 1, hi = 2 * X;
    const uint64_t chunk = (hi - lo + 1 + threads - 1) / threads;

    std::vector<std::vector<uint64_t>> partial(threads,
                                               std::vector<uint64_t>(cList.size(), 0));
    auto worker = [&](unsigned t) {
        const uint64_t a = lo + t * chunk;
        if (a > hi) return;
        const uint64_t b = std::min(hi, a + chunk - 1);
        auto recs = progression_sieve(f, a, b, primeBound, &cache);
        for (const auto& rec : recs) {
            const Int pp = finish_pplus(rec);
            const long double lp = pp.convert_to<long double>();
            const long double ln = static_cast<long double>(rec.n);
            for (size_t i = 0; i < cList.size(); ++i)
                if (std::log(lp) > (1.0L + cList[i]) * std::log(ln)) ++partial[t][i];
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();

    ScanReport rep;
    rep.X = X;
    rep.thresholds = std::move(cList);
    rep.counts.assign(rep.thresholds.size(), 0);
    for (unsigned t = 0; t < threads; ++t)
        for (size_t i = 0; i < rep.counts.size(); ++i) rep.counts[i] += partial[t][i];
    for (uint64_t c : rep.counts) rep.densities.push_back(double(c) / double(X));
    rep.threads = threads;
    rep.elapsedSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

LogSplit log_split(const CubicPoly& f, uint64_t n, uint64_t X) {
    if (!(n > X && n <= 2 * X)) throw validation_error("log_split: n must lie in (X, 2X]");
    const FactorizationRecord rec = factor_polynomial_value(f, n);
    LogSplit out;
    const Int cutoff = Int(3) * X;
    for (auto& [p, e] : rec.factors) {
        const double contrib = double(e) * std::log(to_double(p));
        if (f.disc() % p == 0) {
            out.excluded += contrib;
        } else if (p <= cutoff) {
            // First-degree block of norm p below the cutoff.
            out.log1 += contrib;
        } else {
            out.log2 += contrib;
        }
    }
    return out;
}

namespace {

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

// #{n in (X, 2X] : n = k (mod N)}
uint64_t progression_count(uint64_t X, const Int& k, const Int& N) {
    const Int hi = floor_div(Int(2) * X - k, N);
    const Int lo = floor_div(Int(X) - k, N);
    return (hi - lo).convert_to<uint64_t>();
}

}  // namespace

ToyReport s0_s1_toy(const CubicPoly& f, uint64_t X, double delta, double theta,
                    const ToyParams& params) {
    if (X < 10 || X > 100000)
        throw validation_error("s0_s1_toy: X must lie in [10, 10^5] for full enumeration");
    if (delta <= 0.0 || delta >= 1.0) throw validation_error("s0_s1_toy: delta must be in (0,1)");
    if (theta < 0.0) throw validation_error("s0_s1_toy: theta must be >= 0");

    const double lX = std::log(double(X));
    const double M = std::exp(lX * (1.0 + delta) / 3.0);
    const double Nbound = std::exp(lX * (1.0 + 2.0 * delta) / 3.0);
    const double kLo = std::exp(lX * 3.0 * delta), kHi = std::exp(lX * 4.0 * delta);
    const double normLo = std::exp(lX * (1.0 + delta));
    const double normHi = std::exp(lX * (1.0 + 2.0 * delta));
    const double zd = std::exp(lX * delta);
    const uint64_t z = std::max<uint64_t>(2, uint64_t(zd));
    const uint64_t D = std::max<uint64_t>(2, uint64_t(std::exp(lX * 3.0 * delta)));
    const double pfloorL = std::exp(lX * theta);

    Int pminQ = params.pminQ;
    if (pminQ < 0) {
        pminQ = 256;
        const Int c0abs = f.c0() < 0 ? Int(-f.c0()) : f.c0();
        if (c0abs > pminQ) pminQ = c0abs;
    }

    const SieveWeights weights = rosser_weights(D, z);
    const UnitGroup units = find_units(f, params.unitSearchBound);
    const DomainDescriptor dom = make_domain(f, units);

    std::set<uint64_t> splitSmall;
    for (uint64_t p : primes_up_to(z > 0 ? z - 1 : 0))
        if (splitting_type(f, p) == SplitType::split) splitSmall.insert(p);

    // First-degree primes K with kLo < N(K) <= kHi, coprime to the discriminant.
    std::vector<std::pair<uint64_t, uint64_t>> Ks;
    for (uint64_t p : primes_up_to(uint64_t(kHi))) {
        if (double(p) <= kLo) continue;
        if (f.is_ramified(p)) continue;
        for (uint64_t root : roots_mod_p(f, p)) Ks.emplace_back(p, root);
    }

    ToyReport rep;
    rep.kCount = Ks.size();
    rep.S = 0;
    rep.S0 = 0;
    rep.S1 = 0;
    rep.minLog1Margin = 1e300;
    bool logOk = true;

    const double q1Lo = std::pow(Nbound, 5.0 / 7.0), q1Hi = std::pow(Nbound, 5.0 / 7.0 + delta);
    const double q2Lo = std::pow(Nbound, 6.0 / 7.0), q2Hi = std::pow(Nbound, 6.0 / 7.0 + delta);

    const DomainBoxBounds bounds = domain_bounds(dom);
    const double cbN = std::cbrt(normHi);
    const long long amax1 = (long long)std::ceil(bounds.coordRadius[1] * cbN) + 1;
    const long long amax2 = (long long)std::ceil(bounds.coordRadius[2] * cbN) + 1;

    for (long long a1 = -amax1; a1 <= amax1; ++a1) {
        for (long long a2 = -amax2; a2 <= amax2; ++a2) {
            if (gcd(Int(a1), Int(a2)) != 1) continue;
            const Int qv = eval_q(f, Int(a1), Int(a2));
            Int qa = qv < 0 ? Int(-qv) : qv;
            if (to_double(qa) < params.cq * M * M * M) continue;
            if (gcd(Int(a1) * a2, qa) != 1) continue;
            const auto qf = factor_int(qa);
            bool ok = true;
            for (auto& [p, e] : qf)
                if (e > 1 || p <= pminQ) ok = false;  // squarefree, P-(q) floor
            if (!ok) continue;
            if (params.requireQ1Q2) {
                std::vector<Int> w1, w2;
                for (auto& [p, e] : qf) {
                    const double pd = to_double(p);
                    if (pd > q1Lo && pd < q1Hi) w1.push_back(p);
                    if (pd > q2Lo && pd < q2Hi) w2.push_back(p);
                }
                const bool pairExists =
                    !w1.empty() && !w2.empty() &&
                    !(w1.size() == 1 && w2.size() == 1 && w1[0] == w2[0]);
                if (!pairExists) continue;
            }

            const auto [lod, hid] = a0_interval(dom, bounds, normHi, a1, a2);
            if (lod > hid) continue;
            const long long a0lo = (long long)std::floor(lod) - 1;
            const long long a0hi = (long long)std::ceil(hid) + 1;
            for (long long a0 = a0lo; a0 <= a0hi; ++a0) {
                if (a0 % 2 == 0) continue;  // 2 must not divide a0
                const RingElem alpha{a0, a1, a2};
                const Int N = norm(f, alpha);
                const Int Nabs = N < 0 ? Int(-N) : N;
                const double nd = to_double(Nabs);
                if (!(nd > normLo && nd <= normHi)) continue;
                if (in_domain(dom, alpha) != Membership::inside) continue;
                const Mat3 B = cofactors_at(f, alpha);
                const Int b13 = B[0][2];
                const Int b13abs = b13 < 0 ? Int(-b13) : b13;
                if (to_double(b13abs) < params.cb * M * M) continue;
                if (gcd(qa, b13abs) != 1) continue;
                if (gcd(Nabs, b13abs * f.disc()) != 1) continue;

                std::vector<IdealFactor> nf;
                try {
                    // Also certifies rho(alpha) = 1.
                    nf = factor_principal(f, alpha).factors();
                } catch (const validation_error&) {
                    continue;
                }
                const KClass kc = k_alpha_cofactor(f, alpha);

                for (const auto& [p, root] : Ks) {
                    if (Nabs % p != 0) continue;
                    const Int v = Int(a0) + Int(a1) * root + Int(a2) * Int(root) * root;
                    if (mod_floor(v, p) != 0) continue;  // K does not divide (alpha)

                    // Primes of N(L) = N(alpha)/p: all must clear the theta
                    // floor; the small split ones feed the sieve weight.
                    bool pfloorOk = true;
                    std::vector<uint64_t> smallSplit;
                    for (const auto& fac : nf) {
                        const uint64_t pp = fac.prime.p;
                        if (pp == p && fac.exponent == 1) continue;
                        if (double(pp) <= pfloorL) pfloorOk = false;
                        if (pp < z && splitSmall.count(pp)) smallSplit.push_back(pp);
                    }
                    if (!pfloorOk) continue;

                    int wgt = 0;
                    const size_t subsets = size_t(1) << smallSplit.size();
                    for (size_t mask = 0; mask < subsets; ++mask) {
                        uint64_t d = 1;
                        for (size_t i = 0; i < smallSplit.size(); ++i)
                            if (mask & (size_t(1) << i)) d *= smallSplit[i];
                        wgt += weights.lambda(d);
                    }

                    const uint64_t cnt = progression_count(X, kc.k, Nabs);
                    rep.S += Rat(wgt) * cnt;
                    rep.S0 += Rat(wgt) / Rat(Nabs);
                    rep.S1 += Rat(wgt) * (Rat(cnt) - Rat(X) / Rat(Nabs));
                    ++rep.pairCount;
                    rep.terms.push_back({p, alpha, wgt, cnt});

                    if (wgt > 0 && cnt > 0) {
                        Int n = kc.k + Nabs * floor_div(Int(X) - kc.k, Nabs) + Nabs;
                        for (; n <= Int(2) * X; n += Nabs) {
                            const LogSplit ls = log_split(f, n.convert_to<uint64_t>(), X);
                            const double margin = ls.log1 - (1.0 + delta) * lX;
                            rep.minLog1Margin = std::min(rep.minLog1Margin, margin);
                            if (margin < -1e-9) logOk = false;
                            ++rep.positiveWeightN;
                        }
                    }
                }
            }
        }
    }

    rep.identityExact = (rep.S == Rat(X) * rep.S0 + rep.S1);
    rep.log1BoundHolds = logOk;
    if (rep.minLog1Margin > 1e299) rep.minLog1Margin = 0.0;
    return rep;
}

}  // namespace cubicsieve
