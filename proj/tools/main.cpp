// Command-line front door: one binary, one subcommand per experiment, JSON
// reports always, CSV for the tabular commands. Reports are byte-identical
// for a fixed config and seed; timing goes to stderr only.

#include <cstdio>
#include <cstdlib>
#include <random>
#include <fstream>
#include <iostream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubicsieve/cubicring.hpp"
#include "cubicsieve/errors.hpp"
#include "cubicsieve/expsums.hpp"
#include "cubicsieve/factorint.hpp"
#include "cubicsieve/primeideals.hpp"
#include "cubicsieve/sieve.hpp"
#include "cubicsieve/sympoly.hpp"
#include "cubicsieve/units.hpp"
#include "cubicsieve/version.hpp"

using json = nlohmann::ordered_json;
using namespace cubicsieve;

namespace {

struct GlobalOptions {
    std::string poly;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string jsonPath = "-";
    std::string csvPath;
};

RingElem parse_alpha(const std::string& s) {
    std::array<Int, 3> a;
    std::stringstream ss(s);
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ',')) {
        if (i >= 3) throw validation_error("alpha expects three integers a0,a1,a2");
        a[i++] = Int(tok);
    }
    if (i != 3) throw validation_error("alpha expects three integers a0,a1,a2");
    return {a[0], a[1], a[2]};
}

std::vector<Int> parse_int_list(const std::string& s) {
    std::vector<Int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.emplace_back(tok);
    return out;
}

json base_report(const GlobalOptions& g, const std::string& command) {
    json j;
    j["schema"] = kSchemaVersion;
    j["version"] = kVersion;
    j["command"] = command;
    j["poly"] = g.poly.empty() ? json(nullptr) : json(g.poly);
    j["seed"] = g.seed;
    return j;
}

void emit(const GlobalOptions& g, const json& report, const std::string& csv = "") {
    const std::string text = report.dump(2) + "\n";
    if (g.jsonPath == "-") {
        std::cout << text;
    } else {
        std::ofstream out(g.jsonPath, std::ios::binary);
        if (!out) throw validation_error("cannot open JSON output path " + g.jsonPath);
        out << text;
    }
    if (!g.csvPath.empty()) {
        if (csv.empty()) throw validation_error("this command produces no CSV output");
        std::ofstream out(g.csvPath, std::ios::binary);
        if (!out) throw validation_error("cannot open CSV output path " + g.csvPath);
        out << csv;
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

json identity_report_json(const sympoly::IdentityReport& rep) {
    json checks = json::object();
    for (const auto& c : rep.checks) checks[c.name] = c.holds;
    return checks;
}

int run(int argc, char** argv) {
    CLI::App app{"verification and scanning toolkit for cubic polynomial factorizations"};
    app.set_config("--config", "", "key=value config file; flags override");
    app.get_config_formatter_base()->arrayDelimiter(';');
    GlobalOptions g;
    if (const char* env = std::getenv("CUBICSIEVE_THREADS")) g.threads = std::atoi(env);
    app.add_option("--poly", g.poly, "cubic coefficients c2,c1,c0");
    app.add_option("--seed", g.seed, "seed for all randomized paths");
    app.add_option("--threads", g.threads, "worker thread count");
    app.add_option("--json", g.jsonPath, "JSON output path, - for stdout");
    app.add_option("--csv", g.csvPath, "CSV output path (tabular commands)");
    app.require_subcommand(1);

    // identities
    auto* cmdIdent = app.add_subcommand("identities", "verify the cofactor/resultant identities");
    cmdIdent->callback([&] {
        json rep = base_report(g, "identities");
        rep["generic"] = identity_report_json(sympoly::verify_identities());
        if (!g.poly.empty()) {
            const CubicPoly f = CubicPoly::parse(g.poly);
            rep["specialized"] =
                identity_report_json(sympoly::verify_identities_at(f.c0(), f.c1(), f.c2()));
            const auto sys = sympoly::build_cofactor_system();
            rep["q_specialized"] = sys.q.specialize_c(f.c0(), f.c1(), f.c2()).to_string();
        }
        const auto sys = sympoly::build_cofactor_system();
        rep["q"] = sys.q.to_string();
        rep["q0"] = sys.q0.to_string();
        rep["U"] = sys.U.to_string();
        rep["V"] = sys.V.to_string();
        emit(g, rep);
    });

    // roots
    std::uint64_t rootsP = 0;
    auto* cmdRoots = app.add_subcommand("roots", "roots of f modulo a prime");
    cmdRoots->add_option("--p", rootsP, "prime modulus")->required();
    cmdRoots->callback([&] {
        const CubicPoly f = CubicPoly::parse(g.poly);
        json rep = base_report(g, "roots");
        rep["p"] = rootsP;
        rep["roots"] = roots_mod_p(f, rootsP);
        rep["splitting"] = to_string(splitting_type(f, rootsP));
        emit(g, rep);
    });

    // lift
    std::uint64_t liftP = 0, liftA = 0;
    unsigned liftK = 1;
    auto* cmdLift = app.add_subcommand("lift", "Hensel lift of a simple root");
    cmdLift->add_option("--p", liftP)->required();
    cmdLift->add_option("--a", liftA)->required();
    cmdLift->add_option("--k", liftK)->required();
    cmdLift->callback([&] {
        const CubicPoly f = CubicPoly::parse(g.poly);
        json rep = base_report(g, "lift");
        const Int lifted = hensel_lift(f, liftP, liftA, liftK);
        rep["root"] = lifted.str();
        rep["modulus"] = pow_int(Int(liftP), liftK).str();
        emit(g, rep);
    });

    // kalpha
    std::string kalphaAlpha;
    auto* cmdK = app.add_subcommand("kalpha", "residue class of alpha via the cofactor formula");
    cmdK->add_option("--alpha", kalphaAlpha, "a0,a1,a2")->required();
    cmdK->callback([&] {
        const CubicPoly f = CubicPoly::parse(g.poly);
        const RingElem alpha = parse_alpha(kalphaAlpha);
        const KClass kc = k_alpha_cofactor(f, alpha);
        json rep = base_report(g, "kalpha");
        rep["alpha"] = kalphaAlpha;
        rep["k"] = kc.k.str();
        rep["modulus"] = kc.modulus.str();
        emit(g, rep);
    });

    // ideal
    std::string idealFactors;
    auto* cmdIdeal = app.add_subcommand("ideal", "norm, rho and residue class of an ideal");
    cmdIdeal->add_option("--factors", idealFactors, "list p:root:exp,p:root:exp,...")->required();
    cmdIdeal->callback([&] {
        const CubicPoly f = CubicPoly::parse(g.poly);
        std::vector<IdealFactor> factors;
        std::stringstream ss(idealFactors);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::uint64_t p, a;
            unsigned e = 1;
            if (std::sscanf(tok.c_str(), "%lu:%lu:%u", &p, &a, &e) < 2)
                throw validation_error("bad ideal factor '" + tok + "', expected p:root[:exp]");
            factors.push_back({{p, a}, e});
        }
        const IdealFD I(f, factors);
        json rep = base_report(g, "ideal");
        rep["norm"] = I.norm().str();
        const int r = rho(f, I);
        rep["rho"] = r;
        if (r == 1) {
            const KClass kc = k_of_ideal(f, I);
            rep["k"] = kc.k.str();
            rep["modulus"] = kc.modulus.str();
        }
        emit(g, rep);
    });

    // units
    int unitBound = 12;
    std::uint64_t unitSamples = 10000;
    auto* cmdUnits = app.add_subcommand("units", "unit search and fundamental domain statistics");
    cmdUnits->add_option("--bound", unitBound, "coordinate bound of the search box");
    cmdUnits->add_option("--samples", unitSamples, "samples for the size-ratio constant");
    cmdUnits->callback([&] {
        const CubicPoly f = CubicPoly::parse(g.poly);
        const UnitGroup u = find_units(f, unitBound);
        const DomainDescriptor dom = make_domain(f, u);
        json rep = base_report(g, "units");
        rep["signature"] = {u.r1, u.r2};
        json gens = json::array();
        for (const auto& gen : u.generators)
            gens.push_back({{"a0", gen.a0.str()}, {"a1", gen.a1.str()}, {"a2", gen.a2.str()},
                            {"norm", norm(f, gen).str()}});
        rep["generators"] = gens;
        rep["torsion"] = "{+1, -1}";
        if (!u.totally_positive.empty()) {
            json tp = json::array();
            for (const auto& gen : u.totally_positive)
                tp.push_back({{"a0", gen.a0.str()}, {"a1", gen.a1.str()}, {"a2", gen.a2.str()}});
            rep["totally_positive"] = tp;
        }
        const NormaStats stats = norm_size_constant(f, dom, unitSamples, g.seed);
        rep["norma_ratio_max"] = fmt_double(stats.maxRatio);
        rep["norma_samples"] = stats.accepted;
        emit(g, rep);
    });

    // scan
    std::uint64_t scanX = 0;
    std::vector<double> scanC;
    auto* cmdScan = app.add_subcommand("scan", "density of n with P+(f(n)) > n^(1+c)");
    cmdScan->add_option("--X", scanX, "scan over n in (X, 2X]")->required();
    cmdScan->add_option("--c", scanC, "threshold exponents")->required()->delimiter(',');
    cmdScan->callback([&] {
        const CubicPoly f = CubicPoly::parse(g.poly);
        const ScanReport r = scan_density(f, scanX, scanC, g.threads);
        json rep = base_report(g, "scan");
        rep["X"] = r.X;
        json rows = json::array();
        std::ostringstream csv;
        csv << "c,count,density\n";
        for (size_t i = 0; i < r.thresholds.size(); ++i) {
            rows.push_back({{"c", r.thresholds[i]},
                            {"count", r.counts[i]},
                            {"density", fmt_double(r.densities[i])}});
            csv << fmt_double(r.thresholds[i]) << ',' << r.counts[i] << ','
                << fmt_double(r.densities[i]) << "\n";
        }
        rep["results"] = rows;
        std::cerr << "scan: " << r.elapsedSeconds << " s on " << r.threads << " thread(s)\n";
        emit(g, rep, csv.str());
    });

    // weights
    std::uint64_t wD = 0, wZ = 0, wCheck = 0;
    auto* cmdW = app.add_subcommand("weights", "lower-bound sieve weights");
    cmdW->add_option("--D", wD, "sieving limit")->required();
    cmdW->add_option("--z", wZ, "sifting level")->required();
    cmdW->add_option("--check-upto", wCheck, "brute-force the divisor-sum bound up to N");
    cmdW->callback([&] {
        const SieveWeights w = rosser_weights(wD, wZ);
        json rep = base_report(g, "weights");
        rep["D"] = w.D;
        rep["z"] = w.z;
        rep["support_size"] = w.weights.size();
        rep["lambda_1"] = w.lambda(1);
        if (wCheck > 0) {
            bool ok = true;
            std::uint64_t violations = 0;
            // All z-smooth n <= wCheck by depth-first generation.
            std::vector<std::uint64_t> ps = primes_up_to(w.z - 1);
            auto rec = [&](auto&& self, size_t i, std::uint64_t n) -> void {
                const int s = w.divisor_sum(n);
                if (n == 1 ? s != 1 : s > 0) {
                    ok = false;
                    ++violations;
                }
                for (size_t k = i; k < ps.size(); ++k) {
                    if (n > wCheck / ps[k]) break;
                    self(self, k, n * ps[k]);
                }
            };
            rec(rec, 0, 1);
            rep["check_upto"] = wCheck;
            rep["check_ok"] = ok;
            rep["check_violations"] = violations;
        }
        emit(g, rep);
    });

    // expsum
    auto* cmdExp = app.add_subcommand("expsum", "exponential sum evaluations");
    cmdExp->require_subcommand(1);
    std::string expAlphas;
    int expRandom = 0, expJ = 1, expAmax = 30;
    std::string expN = "1";
    std::uint64_t expX = 100;
    auto* cmdSigma = cmdExp->add_subcommand("sigma", "exact-phase sum over a set of alpha");
    cmdSigma->add_option("--alphas", expAlphas, "semicolon-separated a0,a1,a2 triples");
    cmdSigma->add_option("--random", expRandom, "draw this many admissible alpha instead");
    cmdSigma->add_option("--amax", expAmax, "coordinate bound for random draws");
    cmdSigma->add_option("--n", expN);
    cmdSigma->add_option("--j", expJ);
    cmdSigma->add_option("--X", expX);
    cmdSigma->callback([&] {
        const CubicPoly f = CubicPoly::parse(g.poly);
        std::vector<RingElem> setL;
        if (!expAlphas.empty()) {
            std::stringstream ss(expAlphas);
            std::string tok;
            while (std::getline(ss, tok, ';')) setL.push_back(parse_alpha(tok));
        } else if (expRandom > 0) {
            if (expAmax < 1) throw validation_error("expsum sigma: --amax must be >= 1");
            if (expRandom > 100000) throw validation_error("expsum sigma: --random too large");
            std::mt19937_64 gen(g.seed);
            std::uint64_t attempts = 0;
            while ((int)setL.size() < expRandom) {
                if (++attempts > 200000ull * (std::uint64_t)expRandom)
                    throw validation_error("expsum sigma: admissible draws too rare in this box");
                RingElem a{(long long)(gen() % (2 * expAmax + 1)) - expAmax,
                           (long long)(gen() % (2 * expAmax + 1)) - expAmax,
                           (long long)(gen() % (2 * expAmax + 1)) - expAmax};
                if (a.is_zero()) continue;
                try {
                    (void)k_alpha_cofactor(f, a);
                    (void)error_term(f, a);
                    setL.push_back(a);
                } catch (const validation_error&) {
                }
            }
        } else {
            throw validation_error("expsum sigma: provide --alphas or --random");
        }
        const Int n(expN);
        const ExpSumResult s = sigma_sum(f, setL, n, expJ, expX);
        const ExpSumResult e = e_sum(f, setL, n, expJ, expX);
        json rep = base_report(g, "expsum.sigma");
        rep["terms"] = s.termCount;
        rep["sigma"] = {{"re", fmt_double(s.value.real())}, {"im", fmt_double(s.value.imag())}};
        rep["e_sum"] = {{"re", fmt_double(e.value.real())}, {"im", fmt_double(e.value.imag())}};
        rep["difference"] = fmt_double(std::abs(s.value - e.value));
        double bound = 0.0;
        for (const auto& a : setL) {
            const ErrorTerm et = error_term(f, a);
            bound += 2.0 * 3.14159265358979323846 * std::abs(to_double(n)) * std::abs(et.E);
        }
        rep["difference_bound"] = fmt_double(bound);
        emit(g, rep);
    });

    std::string klF = "0", klG = "0,1", klV = "1", klParts = "1", klA = "0", klH = "1";
    std::uint64_t klB = 100;
    auto* cmdKloos = cmdExp->add_subcommand("kloos", "incomplete rational exponential sum");
    cmdKloos->add_option("--f", klF, "numerator polynomial coefficients, low to high");
    cmdKloos->add_option("--g", klG, "denominator polynomial coefficients");
    cmdKloos->add_option("--v", klV, "admissibility polynomial coefficients");
    cmdKloos->add_option("--q", klParts, "factorization q0,q1,...,qk of the modulus")->required();
    cmdKloos->add_option("--A", klA);
    cmdKloos->add_option("--B", klB);
    cmdKloos->add_option("--hmul", klH, "numerator multiplier h");
    cmdKloos->callback([&] {
        std::vector<std::uint64_t> parts;
        for (const Int& v : parse_int_list(klParts)) {
            if (v < 1 || v > Int(~0ull)) throw validation_error("--q parts must be positive");
            parts.push_back(v.convert_to<std::uint64_t>());
        }
        const IncompleteSumResult r = incomplete_rational_sum(
            parse_int_list(klF), parse_int_list(klG), parse_int_list(klV), parts, Int(klA), klB,
            Int(klH));
        json rep = base_report(g, "expsum.kloos");
        rep["value"] = {{"re", fmt_double(r.value.real())}, {"im", fmt_double(r.value.imag())}};
        rep["abs"] = fmt_double(std::abs(r.value));
        rep["terms"] = r.termCount;
        rep["skipped"] = r.skipped;
        rep["envelope"] = fmt_double(r.envelope);
        rep["ratio"] = fmt_double(r.ratio);
        emit(g, rep);
    });

    double psiT = 0.25;
    std::uint64_t psiH = 1000;
    auto* cmdPsi = cmdExp->add_subcommand("psi", "sawtooth Fourier residual");
    cmdPsi->add_option("--t", psiT)->required();
    cmdPsi->add_option("--H", psiH)->required();
    cmdPsi->callback([&] {
        const PsiResidual r = psi_residual(psiT, psiH);
        json rep = base_report(g, "expsum.psi");
        rep["t"] = psiT;
        rep["H"] = psiH;
        rep["psi"] = fmt_double(r.psi);
        rep["partial_sum"] = fmt_double(r.partial);
        rep["residual"] = fmt_double(r.residual);
        rep["envelope"] = fmt_double(r.envelope);
        rep["ratio"] = fmt_double(r.ratio);
        emit(g, rep);
    });

    // s0s1
    std::uint64_t toyX = 1000;
    double toyDelta = 0.3, toyTheta = -1.0, toyCq = 1.0, toyCb = 1.0;
    std::string toyPmin = "-1";
    bool toyNoQ12 = false;
    int toyUnitBound = 12;
    auto* cmdToy = app.add_subcommand("s0s1", "toy-scale decomposition S = X*S0 + S1");
    cmdToy->add_option("--X", toyX)->required();
    cmdToy->add_option("--delta", toyDelta)->required();
    cmdToy->add_option("--theta", toyTheta, "defaults to delta");
    cmdToy->add_option("--cq", toyCq, "implied constant in q >= cq*M^3");
    cmdToy->add_option("--cb", toyCb, "implied constant in B13 >= cb*M^2");
    cmdToy->add_option("--pmin-q", toyPmin, "prime floor for q; -1 means max(256, |c0|)");
    cmdToy->add_flag("--no-q1q2", toyNoQ12, "drop the two-prime window condition on q");
    cmdToy->add_option("--unit-bound", toyUnitBound);
    cmdToy->callback([&] {
        const CubicPoly f = CubicPoly::parse(g.poly);
        ToyParams params;
        params.cq = toyCq;
        params.cb = toyCb;
        params.pminQ = Int(toyPmin);
        params.requireQ1Q2 = !toyNoQ12;
        params.unitSearchBound = toyUnitBound;
        const double theta = toyTheta < 0 ? toyDelta : toyTheta;
        const ToyReport r = s0_s1_toy(f, toyX, toyDelta, theta, params);
        json rep = base_report(g, "s0s1");
        rep["X"] = toyX;
        rep["delta"] = toyDelta;
        rep["theta"] = theta;
        rep["S"] = Rat(r.S).str();
        rep["S0"] = r.S0.str();
        rep["S1"] = r.S1.str();
        rep["identity_exact"] = r.identityExact;
        rep["log1_bound_holds"] = r.log1BoundHolds;
        rep["min_log1_margin"] = fmt_double(r.minLog1Margin);
        rep["K_count"] = r.kCount;
        rep["pair_count"] = r.pairCount;
        rep["positive_weight_n"] = r.positiveWeightN;
        emit(g, rep);
    });

    // Let global flags like --poly appear after the subcommand name.
    std::function<void(CLI::App*)> enableFallthrough = [&](CLI::App* a) {
        for (CLI::App* sub : a->get_subcommands([](const CLI::App*) { return true; })) {
            sub->fallthrough();
            enableFallthrough(sub);
        }
    };
    enableFallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
