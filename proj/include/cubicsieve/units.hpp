#pragma once

// Unit-group search by bounded enumeration plus log-lattice reduction, the
// fundamental domain it defines (an annulus in the complex case, a pair of
// open cones in the totally real case), and the size statistics of lattice
// points inside the domain.

#include <array>
#include <cstdint>
#include <vector>

#include "cubicsieve/cubicring.hpp"
#include "cubicsieve/ints.hpp"

namespace cubicsieve {

struct UnitGroup {
    int r1 = 0, r2 = 0;
    // One generator in the (1,1) case, two in the (3,0) case. Torsion is
    // always {+-1} for a cubic field. Generators are normalized to have a
    // positive first real embedding.
    std::vector<RingElem> generators;
    // Totally positive generators, (3,0) only: g or g^2 per generator.
    std::vector<RingElem> totally_positive;
};

enum class Membership { outside, inside, boundary };

struct DomainDescriptor {
    enum class Kind { annulus, cone_pair } kind;

    Embeddings emb;  // embeddings of the defining polynomial

    // annulus: alpha is inside iff 1 <= |s(alpha)| / |N(alpha)|^{1/3} <= wAbs
    // for the real embedding s, identifying alpha with -alpha.
    RingElem w;
    double wAbs = 0.0;

    // cone_pair: rows are the embedded generator triples of {1, w1+, w1+w2+}
    // and {1, w2+, w1+w2+}.
    RingElem w1p, w2p;
    std::array<std::array<double, 3>, 3> cone1{}, cone2{};

    std::vector<RingElem> generators;  // copied from the unit group

    double boundaryEps = 1e-9;
};

// Enumerates |a_i| <= searchBound for norm +-1 elements and reduces their
// log-embedding vectors. The result generates a finite-index subgroup of the
// unit group; fundamentality is not certified. Throws when nothing is found.
UnitGroup find_units(const CubicPoly& f, int searchBound);

DomainDescriptor make_domain(const CubicPoly& f, const UnitGroup& units);

Membership in_domain(const DomainDescriptor& D, const RingElem& alpha);

// All associates u * alpha landing inside the domain, u over a bounded
// window of the found unit group (torsion included).
std::vector<RingElem> associates_in_domain(const CubicPoly& f, const DomainDescriptor& D,
                                           const RingElem& alpha);

struct NormaStats {
    double maxRatio = 0.0;          // max over samples of max|a_i| / |N|^{1/3}
    std::vector<double> bucketMax;  // per dyadic norm bucket
    std::uint64_t accepted = 0;
};

// Samples integer alpha inside the domain and measures the size ratio of
// Lemma-norma type. Deterministic for a fixed seed.
NormaStats norm_size_constant(const CubicPoly& f, const DomainDescriptor& D,
                              std::uint64_t sampleCount, std::uint64_t seed);

// Enumeration bounds for lattice points of the domain: |sigma_i(alpha)| <=
// embeddingBound[i] * |N|^{1/3} and |a_j| <= coordRadius[j] * |N|^{1/3}.
struct DomainBoxBounds {
    std::array<double, 3> embeddingBound;
    std::array<double, 3> coordRadius;
};
DomainBoxBounds domain_bounds(const DomainDescriptor& D);

// Radius R such that every alpha in the domain with |N(alpha)| <= x has all
// three coordinates bounded by R in absolute value.
double domain_box_radius(const DomainDescriptor& D, double x);

// Closed interval of a0 compatible with the embedding bounds at norm <= x for
// fixed a1, a2; first > second means empty.
std::pair<double, double> a0_interval(const DomainDescriptor& D, const DomainBoxBounds& b,
                                      double x, long long a1, long long a2);

struct HarmonicSum {
    double sum = 0.0;
    Rat exactSum = 0;
    double slope = 0.0;  // least-squares slope of partial sums against log x
    std::uint64_t idealCount = 0;
    std::vector<std::pair<double, double>> checkpoints;      // (x, sum up to x)
    std::vector<std::pair<Int, RingElem>> representatives;   // (norm, canonical rep)
};

// Sum of 1/N over one domain representative per principal ideal of norm <= x.
HarmonicSum principal_norm_harmonic_sum(const CubicPoly& f, const DomainDescriptor& D,
                                        std::uint64_t x);

}  // namespace cubicsieve
