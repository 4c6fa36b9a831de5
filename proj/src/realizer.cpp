#include "jm/realizer.hpp"

#include "jm/surgery.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <cstdio>
#include <numbers>

namespace jm {

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form thresholds of planar symmetric families.
double pair_bound(int n, int d) { return 1.0 / (std::sin(d * kPi / (2 * n)) + std::cos(d * kPi / (2 * n))); }
double run3_bound(int n) { return 1.0 / (2 * std::sin(kPi / (2 * n)) + std::cos(kPi / n)); }
double full_bound(int n) { return planar_symmetric_bound(n); }
double specker_hi(int n) { return 1.0 / ((n - 2) * std::sin(kPi / (2 * n)) + std::sin(kPi / n)); }

std::string nstr(int n) { return std::to_string(n); }
std::string pair_expr(int n, int d) {
    std::string a = (d == 1 ? "" : nstr(d)) + "pi/" + nstr(2 * n);
    return "1/(sin(" + a + ")+cos(" + a + "))";
}
std::string run3_expr(int n) { return "1/(2sin(pi/" + nstr(2 * n) + ")+cos(pi/" + nstr(n) + "))"; }
std::string full_expr(int n) { return "1/(" + nstr(n) + "sin(pi/" + nstr(2 * n) + "))"; }

EtaWindow window(double lo, std::string lo_expr, double hi, std::string hi_expr, bool lo_sharp = true,
                 bool hi_sharp = true) {
    return {lo, hi, std::move(lo_expr), std::move(hi_expr), lo_sharp, hi_sharp};
}

// Bound of the triple {1,2,4}-type arrangement in N = 6 (gaps pi/6, pi/2, pi/3).
double six_124() { return 4.0 / (2.0 + std::sqrt(2.0) + std::sqrt(6.0)); }
// Bound of the non-consecutive triples of N = 5.
double five_124() { return 4.0 / (std::sqrt(5.0) - 1.0 + 2.0 * std::sqrt(10.0 - 2.0 * std::sqrt(5.0))); }

std::vector<VertexSet> cyclic_runs(int n, int len) {
    std::vector<VertexSet> out;
    for (int i = 0; i < n; ++i) {
        VertexSet s;
        for (int j = 0; j < len; ++j) s.push_back((i + j) % n + 1);
        std::sort(s.begin(), s.end());
        out.push_back(s);
    }
    return out;
}

CatalogEntry planar_entry(std::string tag, int n, std::vector<int> subset, EtaWindow w, std::vector<VertexSet> claimed,
                          const RealizeOptions& opts, std::string note = {}) {
    if (n < 2 || n > kMaxJointN) throw std::invalid_argument("planar recipe: N out of range");
    RealizationRecipe r;
    r.kind = RecipeKind::PlanarSymmetricSubset;
    r.tag = std::move(tag);
    r.family_n = n;
    r.subset = std::move(subset);
    r.window = std::move(w);
    r.eta = opts.eta.value_or(r.window.midpoint());
    if (!(r.eta > 0.0) || r.eta > 1.0) throw std::invalid_argument("recipe: eta must lie in (0, 1]");
    r.povms = PlanarSymmetricFamily{n, r.eta}.members(r.subset);
    r.note = std::move(note);
    int m = int(r.subset.size());
    return {r, JmStructure(m, claimed)};
}

CatalogEntry item6_mixed(const RealizeOptions& opts) {
    const double theta = kPi / 8;  // 22.5 degrees, middle of the admissible (15, 30] degree range
    RealizationRecipe r;
    r.kind = RecipeKind::MixedPurity;
    r.tag = "four-vertex-6";
    r.window = window(pair_same_purity_bound(2 * theta), "1/(sin(pi/8)+cos(pi/8))", pair_same_purity_bound(theta),
                      "1/(sin(pi/16)+cos(pi/16))");
    r.eta = opts.eta.value_or(std::sqrt(2.0 / 3.0));
    if (!(r.eta > 0.0) || r.eta > 1.0) throw std::invalid_argument("recipe: eta must lie in (0, 1]");
    r.povms = {BinaryQubitPovm::unbiased(r.eta, planar(0.0)), BinaryQubitPovm::unbiased(r.eta, planar(theta)),
               BinaryQubitPovm::unbiased(r.eta, planar(-theta)), BinaryQubitPovm::unbiased(1.0, planar(0.0))};
    r.note = "E1..E3 unbiased with purity sqrt(2/3) at 0 and +-22.5 deg, E4 projective along E1; the star admits "
             "no realization by coplanar POVMs of equal purity";
    return {r, JmStructure(4, {{1, 2}, {1, 3}, {1, 4}})};
}

CatalogEntry item6_noncoplanar(const RealizeOptions& opts) {
    const double alpha = kPi / 6;
    const double phi = std::acos(std::cos(alpha) * std::cos(alpha));
    RealizationRecipe r;
    r.kind = RecipeKind::NonCoplanar;
    r.tag = "four-vertex-6";
    r.window = window(pair_same_purity_bound(phi), "1/(cos(phi/2)+sin(phi/2)), cos(phi)=3/4",
                      pair_same_purity_bound(alpha), "sqrt(2/3)");
    r.eta = opts.eta.value_or(r.window.midpoint());
    if (!(r.eta > 0.0) || r.eta > 1.0) throw std::invalid_argument("recipe: eta must lie in (0, 1]");
    double c = std::cos(alpha), s = std::sin(alpha);
    r.povms = {BinaryQubitPovm::unbiased(r.eta, {1, 0, 0}), BinaryQubitPovm::unbiased(r.eta, {c, s, 0}),
               BinaryQubitPovm::unbiased(r.eta, {c, -s, 0}), BinaryQubitPovm::unbiased(r.eta, {c, 0, s})};
    r.note = "E2, E3 at +-30 deg from E1 in the xy plane, E4 at 30 deg from E1 in the xz plane";
    return {r, JmStructure(4, {{1, 2}, {1, 3}, {1, 4}})};
}

// ---------------------------------------------------------------------------

std::vector<BinaryQubitPovm> restrict(const std::vector<BinaryQubitPovm>& povms, const VertexSet& s) {
    std::vector<BinaryQubitPovm> out;
    for (int v : s) out.push_back(povms.at(v - 1));
    return out;
}

struct Witness {
    JointPovm joint;
    std::string constructor;
    double margin = 0.0;
    double tolerance = 1e-12;  // validation tolerance appropriate for the constructor
};

std::optional<Witness> find_witness(const RealizationRecipe& r, const std::vector<BinaryQubitPovm>& povms,
                                    const VertexSet& s, const OracleParams& oracle) {
    auto sub = restrict(povms, s);
    if (sub.size() == 1) {
        JointPovm j;
        j.n = 1;
        j.effects[1] = sub[0].effect(+1);
        j.effects[0] = sub[0].effect(-1);
        return Witness{j, "single", 0.0};
    }
    if (r.kind == RecipeKind::PlanarSymmetricSubset) {
        std::vector<int> idx;
        for (int v : s) idx.push_back(r.subset.at(v - 1));
        double bound = planar_subset_bound(r.family_n, idx);
        bool same = true;
        for (size_t i = 0; i < sub.size(); ++i)
            same = same && sub[i] == PlanarSymmetricFamily{r.family_n, r.eta}.member(idx[i]);
        if (same && r.eta <= bound + 1e-12)
            return Witness{surgery_mtuple(r.family_n, idx, r.eta), idx.size() == 2 ? "surgery_pair" : "surgery_mtuple",
                           bound - r.eta};
    }
    if (sub.size() <= 8) {
        PathVerdict pv = general_binary_best_ordering(sub);
        if (compatible(pv.verdict))
            return Witness{build_general_binary_joint(sub, pv.labelling).joint, "general_binary", pv.verdict.margin};
    }
    if (sub.size() <= size_t(kMaxOracleN)) {
        FeasibilityVerdict fv = oracle_decide(sub, oracle);
        if (fv.status == FeasibilityStatus::Feasible) return Witness{fv.witness, "oracle", -fv.residual, oracle.eps_oracle};
    }
    return std::nullopt;
}

std::optional<Evidence> incompatibility_proof(const std::vector<BinaryQubitPovm>& povms, const VertexSet& s,
                                              const OracleParams& oracle) {
    auto sub = restrict(povms, s);
    Verdict v = decide_closed_form(sub);
    if (incompatible(v)) return Evidence{s, Decision::Incompatible, v.criterion, v.margin, {}, std::nullopt};
    if (sub.size() <= size_t(kMaxOracleN)) {
        FeasibilityVerdict fv = oracle_decide(sub, oracle);
        if (fv.status == FeasibilityStatus::LikelyInfeasible)
            return Evidence{s, Decision::Incompatible, "oracle_infeasible", -fv.residual, {}, std::nullopt};
    }
    return std::nullopt;
}

double witness_tolerance(const std::string& constructor, const OracleParams& oracle) {
    return constructor == "oracle" ? oracle.eps_oracle : 1e-12;
}

}  // namespace

std::string to_string(RecipeKind k) {
    switch (k) {
        case RecipeKind::PlanarSymmetricSubset: return "planar_symmetric_subset";
        case RecipeKind::MixedPurity: return "mixed_purity";
        default: return "non_coplanar";
    }
}

// ---------------------------------------------------------------------------

CatalogEntry catalog_n_cycle(int n, const RealizeOptions& opts) {
    if (n < 3 || n > kMaxRealizeN) throw std::invalid_argument("n_cycle: N must lie in [3, 12]");
    std::vector<int> all(n);
    for (int k = 0; k < n; ++k) all[k] = k + 1;
    if (n == 3) {
        // The general window is empty for N = 3; every pair of the trine is
        // adjacent, so the cycle is the trine structure.
        return planar_entry("n-cycle-3", 3, all, window(2.0 / 3.0, "2/3", pair_bound(3, 1), pair_expr(3, 1)),
                            n_cycle(3).maximal(), opts, "window of the trine: pairs compatible, triple not");
    }
    return planar_entry("n-cycle-" + nstr(n), n, all,
                        window(pair_bound(n, 2), pair_expr(n, 2), pair_bound(n, 1), pair_expr(n, 1)),
                        n_cycle(n).maximal(), opts);
}

CatalogEntry catalog_n_specker(int n, const RealizeOptions& opts) {
    if (n < 3 || n > kMaxRealizeN) throw std::invalid_argument("n_specker: N must lie in [3, 12]");
    std::vector<int> all(n);
    for (int k = 0; k < n; ++k) all[k] = k + 1;
    // The upper endpoint is only known to be sufficient once the (N-1)-subsets have more than three members.
    return planar_entry("n-specker-" + nstr(n), n, all,
                        window(full_bound(n), full_expr(n), specker_hi(n),
                               "1/(" + nstr(n - 2) + "sin(pi/" + nstr(2 * n) + ")+sin(pi/" + nstr(n) + "))", true,
                               n <= 4),
                        n_specker(n).maximal(), opts);
}

CatalogEntry catalog_four_vertex(int id, const RealizeOptions& opts) {
    const std::string tag = "four-vertex-" + nstr(id);
    switch (id) {
        case 1:
            return planar_entry(tag, 4, {1, 2, 3, 4}, window(pair_bound(4, 1), pair_expr(4, 1), 1.0, "1", true, false),
                                {}, opts);
        case 2:
            return planar_entry(tag, 7, {1, 2, 4, 6}, window(pair_bound(7, 2), pair_expr(7, 2), pair_bound(7, 1), pair_expr(7, 1)),
                                {{1, 2}}, opts);
        case 3:
            return planar_entry(tag, 6, {1, 2, 4, 5}, window(pair_bound(6, 2), "sqrt(3)-1", pair_bound(6, 1), "sqrt(2/3)"),
                                {{1, 2}, {3, 4}}, opts);
        case 4:
            return planar_entry(tag, 6, {1, 2, 3, 5}, window(pair_bound(6, 2), "sqrt(3)-1", pair_bound(6, 1), "sqrt(2/3)"),
                                {{1, 2}, {2, 3}}, opts);
        case 5:
            return planar_entry(tag, 5, {1, 2, 3, 4}, window(pair_bound(5, 2), pair_expr(5, 2), pair_bound(5, 1), pair_expr(5, 1)),
                                {{1, 2}, {2, 3}, {3, 4}}, opts);
        case 6:
            return opts.item6 == Item6Recipe::MixedPurity ? item6_mixed(opts) : item6_noncoplanar(opts);
        case 7:
            return planar_entry(tag, 8, {1, 2, 3, 6}, window(run3_bound(8), run3_expr(8), pair_bound(8, 2), pair_expr(8, 2)),
                                {{1, 2}, {1, 3}, {2, 3}}, opts);
        case 8:
            return planar_entry(tag, 4, {1, 2, 3, 4}, window(pair_bound(4, 2), "sqrt(2)/2", pair_bound(4, 1), "sqrt(2-sqrt(2))"),
                                n_cycle(4).maximal(), opts);
        case 9:
            return planar_entry(tag, 7, {1, 2, 3, 6}, window(run3_bound(7), run3_expr(7), pair_bound(7, 2), pair_expr(7, 2)),
                                {{1, 2}, {1, 3}, {2, 3}, {1, 4}}, opts);
        case 10:
            return planar_entry(tag, 6, {1, 2, 3, 5}, window(run3_bound(6), "2/(sqrt(6)+sqrt(3)-sqrt(2))", pair_bound(6, 2), "sqrt(3)-1"),
                                {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}}, opts);
        case 11:
            return planar_entry(tag, 4, {1, 2, 3, 4}, window(run3_bound(4), "sqrt(2)/(1+sqrt(2(2-sqrt(2))))", pair_bound(4, 2), "sqrt(2)/2"),
                                n_complete(4).maximal(), opts);
        case 12:
            return planar_entry(tag, 8, {1, 2, 3, 6}, window(pair_bound(8, 3), pair_expr(8, 3), run3_bound(8), run3_expr(8)),
                                {{1, 2, 3}}, opts);
        case 13:
            return planar_entry(tag, 7, {1, 2, 3, 6}, window(pair_bound(7, 3), pair_expr(7, 3), run3_bound(7), run3_expr(7)),
                                {{1, 2, 3}, {1, 4}}, opts);
        case 14:
            return planar_entry(tag, 6, {1, 2, 3, 5}, window(pair_bound(6, 3), "sqrt(2)/2", run3_bound(6), "2/(sqrt(6)+sqrt(3)-sqrt(2))"),
                                {{1, 2, 3}, {1, 4}, {3, 4}}, opts);
        case 15:
            return planar_entry(tag, 6, {1, 2, 3, 5}, window(six_124(), "4/(2+sqrt(2)+sqrt(6))", pair_bound(6, 3), "sqrt(2)/2"),
                                {{1, 2, 3}, {1, 4}, {2, 4}, {3, 4}}, opts);
        case 16:
            return planar_entry(tag, 6, {1, 2, 3, 4}, window(pair_bound(6, 3), "sqrt(2)/2", run3_bound(6), "2/(sqrt(6)+sqrt(3)-sqrt(2))"),
                                {{1, 2, 3}, {2, 3, 4}}, opts);
        case 17:
            return planar_entry(tag, 5, {1, 2, 3, 4}, window(five_124(), "4/(sqrt(5)-1+2sqrt(10-2sqrt(5)))", run3_bound(5), "(1+3sqrt(5))/11"),
                                {{1, 2, 3}, {2, 3, 4}, {1, 4}}, opts);
        case 18:
            // Any eta above 2/3 separates the trine {1,3,5}; the quoted lower endpoint is not where the structure changes.
            return planar_entry(tag, 6, {1, 2, 3, 5},
                                window(five_124(), "4/(sqrt(5)-1+2sqrt(10-2sqrt(5)))", six_124(), "4/(2+sqrt(2)+sqrt(6))", false, true),
                                {{1, 2, 3}, {1, 2, 4}, {2, 3, 4}}, opts, "structure persists down to eta > 2/3");
        case 19:
            return planar_entry(tag, 4, {1, 2, 3, 4}, window(full_bound(4), full_expr(4), run3_bound(4), "sqrt(2)/(1+sqrt(2(2-sqrt(2))))"),
                                n_specker(4).maximal(), opts);
        case 20:
            return planar_entry(tag, 4, {1, 2, 3, 4}, window(0.0, "0", full_bound(4), full_expr(4), false, true),
                                {{1, 2, 3, 4}}, opts);
        default:
            throw std::invalid_argument("four-vertex atlas id must lie in [1, 20]");
    }
}

std::vector<std::string> misc_tags() {
    return {"4-cycle", "4-complete", "4-specker", "5-cycle", "5-complete", "ex5123",
            "5-specker", "6-cycle", "ex61213", "ex6123", "ex612314", "6-specker"};
}

CatalogEntry catalog_misc(const std::string& tag, const RealizeOptions& opts) {
    auto all = [](int n) {
        std::vector<int> v(n);
        for (int k = 0; k < n; ++k) v[k] = k + 1;
        return v;
    };
    if (tag == "4-cycle" || tag == "5-cycle" || tag == "6-cycle") {
        CatalogEntry e = catalog_n_cycle(tag[0] - '0', opts);
        e.recipe.tag = tag;
        return e;
    }
    if (tag == "4-specker" || tag == "5-specker" || tag == "6-specker") {
        CatalogEntry e = catalog_n_specker(tag[0] - '0', opts);
        e.recipe.tag = tag;
        return e;
    }
    if (tag == "4-complete")
        return planar_entry(tag, 4, all(4), window(run3_bound(4), "sqrt(2)/(1+sqrt(2(2-sqrt(2))))", pair_bound(4, 2), "sqrt(2)/2"),
                            n_complete(4).maximal(), opts);
    if (tag == "5-complete")
        return planar_entry(tag, 5, all(5), window(run3_bound(5), "(1+3sqrt(5))/11", pair_bound(5, 2), "(3+sqrt(5)-sqrt(2(5+sqrt(5))))/2"),
                            n_complete(5).maximal(), opts);
    if (tag == "ex5123")
        return planar_entry(tag, 5, all(5), window(five_124(), "4/(sqrt(5)-1+2sqrt(10-2sqrt(5)))", run3_bound(5), "(1+3sqrt(5))/11"),
                            cyclic_runs(5, 3), opts);
    if (tag == "ex61213") {
        std::vector<VertexSet> pairs;
        for (int i = 1; i <= 6; ++i)
            for (int j = i + 1; j <= 6; ++j)
                if (std::min(j - i, 6 - (j - i)) <= 2) pairs.push_back({i, j});
        return planar_entry(tag, 6, all(6), window(run3_bound(6), "2/(sqrt(6)+sqrt(3)-sqrt(2))", pair_bound(6, 2), "sqrt(3)-1"),
                            pairs, opts);
    }
    if (tag == "ex6123")
        return planar_entry(tag, 6, all(6), window(pair_bound(6, 3), "sqrt(2)/2", run3_bound(6), "2/(sqrt(6)+sqrt(3)-sqrt(2))"),
                            cyclic_runs(6, 3), opts);
    if (tag == "ex612314") {
        auto sets = cyclic_runs(6, 3);
        sets.insert(sets.end(), {{1, 4}, {2, 5}, {3, 6}});
        return planar_entry(tag, 6, all(6), window(six_124(), "4/(2+sqrt(2)+sqrt(6))", pair_bound(6, 3), "sqrt(2)/2"), sets, opts);
    }
    throw std::invalid_argument("unknown scenario tag: " + tag);
}

// ---------------------------------------------------------------------------

std::string joint_digest(const JointPovm& j) {
    // FNV-1a over the outcome keys and the IEEE bit patterns of the effects.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(std::uint64_t(j.n));
    for (const auto& [x, e] : j.effects) {
        mix(x);
        for (double d : {e.alpha, e.bloch.x, e.bloch.y, e.bloch.z}) mix(std::bit_cast<std::uint64_t>(d));
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RealizationCertificate certify(const CatalogEntry& entry, const OracleParams& oracle) {
    RealizationCertificate c;
    c.recipe = entry.recipe;
    c.povms = entry.recipe.povms;
    c.claimed = entry.claimed;
    for (const auto& s : c.claimed.maximal()) {
        auto w = find_witness(c.recipe, c.povms, s, oracle);
        if (!w) throw CertificationError("no joint POVM found for compatible set " + to_string(s));
        c.evidence.push_back({s, Decision::Compatible, w->constructor, w->margin, joint_digest(w->joint), w->joint});
    }
    for (const auto& s : c.claimed.minimal_incompatible()) {
        auto ev = incompatibility_proof(c.povms, s, oracle);
        if (!ev) throw CertificationError("no incompatibility proof for set " + to_string(s));
        c.evidence.push_back(*ev);
    }
    return c;
}

RealizationCertificate realize_n_cycle(int n, const RealizeOptions& opts) { return certify(catalog_n_cycle(n, opts), opts.oracle); }
RealizationCertificate realize_n_specker(int n, const RealizeOptions& opts) {
    return certify(catalog_n_specker(n, opts), opts.oracle);
}
RealizationCertificate realize_four_vertex(int id, const RealizeOptions& opts) {
    return certify(catalog_four_vertex(id, opts), opts.oracle);
}
RealizationCertificate realize_misc(const std::string& tag, const RealizeOptions& opts) {
    return certify(catalog_misc(tag, opts), opts.oracle);
}

VerifyReport verify_certificate(const RealizationCertificate& c, VerifyMode mode, const OracleParams& oracle) {
    VerifyReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.failures.push_back(msg);
    };
    int n = int(c.povms.size());
    if (n != c.claimed.n_vertices()) {
        fail("claimed structure has " + nstr(c.claimed.n_vertices()) + " vertices for " + nstr(n) + " POVMs");
        return rep;
    }
    for (int k = 0; k < n; ++k)
        if (!validate_povm(c.povms[k]).ok()) fail("POVM " + nstr(k + 1) + " is invalid: " + validate_povm(c.povms[k]).summary());
    if (!rep.ok) return rep;

    auto find = [&](const VertexSet& s, Decision d) -> const Evidence* {
        for (const auto& e : c.evidence)
            if (e.subset == s && e.verdict == d) return &e;
        return nullptr;
    };
    const auto incompatible_sets = c.claimed.minimal_incompatible();
    const bool closed = mode != VerifyMode::Oracle, numeric = mode != VerifyMode::ClosedForm;

    for (const auto& s : c.claimed.maximal()) {
        const std::string name = "compatible set " + to_string(s);
        const Evidence* e = find(s, Decision::Compatible);
        if (!e) {
            fail(name + ": no evidence entry");
            continue;
        }
        auto sub = restrict(c.povms, s);
        if (closed) {
            // The stored witness must be a valid joint for the stated POVMs.
            double tol = witness_tolerance(e->criterion, oracle);
            std::optional<JointPovm> w = e->witness;
            if (!w) {
                auto re = find_witness(c.recipe, c.povms, s, oracle);
                if (re) w = re->joint, tol = re->tolerance;
            }
            if (!w) {
                fail(name + ": witness missing and could not be rebuilt");
            } else {
                auto val = validate_joint(*w, tol, tol);
                double err = w->n == int(sub.size()) ? marginal_error(*w, sub) : INFINITY;
                if (!val.ok()) fail(name + ": witness invalid (" + val.summary() + ")");
                else if (err > tol) fail(name + ": witness marginals deviate by " + std::to_string(err));
                else if (!e->digest.empty() && e->digest != joint_digest(*w)) fail(name + ": witness digest mismatch");
            }
        }
        if (numeric && sub.size() <= size_t(kMaxOracleN)) {
            FeasibilityVerdict fv = oracle_decide(sub, oracle);
            if (fv.status == FeasibilityStatus::LikelyInfeasible) fail(name + ": oracle reports infeasible");
            else if (fv.status == FeasibilityStatus::Inconclusive) rep.undecided.push_back(name + ": oracle inconclusive");
        }
    }

    for (const auto& s : incompatible_sets) {
        const std::string name = "incompatible set " + to_string(s);
        const Evidence* e = find(s, Decision::Incompatible);
        if (!e) {
            fail(name + ": no evidence entry");
            continue;
        }
        auto sub = restrict(c.povms, s);
        if (closed) {
            if (e->criterion == "oracle_infeasible") {
                if (oracle_decide(sub, oracle).status != FeasibilityStatus::LikelyInfeasible)
                    fail(name + ": oracle no longer reports infeasibility");
            } else {
                Verdict v = decide_closed_form(sub);
                if (!incompatible(v)) fail(name + ": closed-form verdict is " + to_string(v.decision));
                else if (std::abs(v.margin - e->margin) > 1e-9 * std::max(1.0, std::abs(v.margin)))
                    fail(name + ": recorded margin does not match");
            }
        }
        if (numeric && sub.size() <= size_t(kMaxOracleN)) {
            FeasibilityVerdict fv = oracle_decide(sub, oracle);
            if (fv.status == FeasibilityStatus::Feasible) fail(name + ": oracle found a joint POVM");
            else if (fv.status == FeasibilityStatus::Inconclusive) rep.undecided.push_back(name + ": oracle inconclusive");
        }
    }

    if (closed) {
        StructureResult sr = structure_of(c.povms, closed_form_decider());
        if (sr.partial()) {
            for (const auto& u : sr.undecided) rep.undecided.push_back("closed form leaves " + to_string(u) + " undecided");
            fail("closed-form structure is partial");
        } else if (!(sr.structure == c.claimed)) {
            fail("closed-form structure " + to_string(sr.structure) + " differs from the claim " + to_string(c.claimed));
        }
    }
    if (!rep.undecided.empty() && mode == VerifyMode::Oracle) rep.ok = false;
    return rep;
}

}  // namespace jm
