// jmtool: command-line front end for the joint measurability library.
//
// Exit codes: 0 success, 2 verification failure, 3 unknown or inconclusive
// result, 64 malformed input JSON, 65 precondition violation.

#include "jm/criteria.hpp"
#include "jm/json_io.hpp"
#include "jm/oracle.hpp"
#include "jm/realizer.hpp"
#include "jm/structures.hpp"
#include "jm/surgery.hpp"
#include "jm/symmetry.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>

namespace {

using namespace jm;

enum Exit { kOk = 0, kVerifyFailed = 2, kUnknown = 3, kBadJson = 64, kPrecondition = 65 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input = "-";
    std::string out;
    std::string mode = "closed-form";
    std::string structure;
    std::string family = "planar-symmetric";
    std::string n_range;
    std::string constructor = "auto";
    std::string subset;
    std::string angles;
    std::string tag;
    std::string recipe = "mixed";
    int n = 0;
    int id = 0;
    int random = 0;
    double eta = -1.0;
    unsigned seed = 20240531u;
};

Json read_json(const std::string& path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream f(path);
        if (!f) throw InputError("cannot open " + path);
        text.assign(std::istreambuf_iterator<char>(f), {});
    }
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw InputError(e.what());
    }
}

// Converts schema problems raised while decoding into InputError.
template <class F>
auto decode(F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw InputError(e.what());
    } catch (const JsonSchemaError& e) {
        throw InputError(e.what());
    }
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << text << '\n';
}

void emit(const Options& o, const Json& j) { emit(o, j.dump(2)); }

std::vector<int> parse_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

std::pair<int, int> parse_range(const std::string& s, int fallback) {
    if (s.empty()) return {fallback, fallback};
    auto dots = s.find("..");
    if (dots == std::string::npos) return {std::stoi(s), std::stoi(s)};
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
}

Decision oracle_decision(const std::vector<BinaryQubitPovm>& p) {
    switch (oracle_decide(p).status) {
        case FeasibilityStatus::Feasible: return Decision::Compatible;
        case FeasibilityStatus::LikelyInfeasible: return Decision::Incompatible;
        default: return Decision::Unknown;
    }
}

std::vector<BinaryQubitPovm> random_povms(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<BinaryQubitPovm> out;
    for (int k = 0; k < n; ++k) {
        BlochVector d{g(rng), g(rng), g(rng)};
        double r = u(rng);
        out.push_back({(2 * u(rng) - 1) * (1 - r), d * (r / d.norm())});
    }
    return out;
}

// ---------------------------------------------------------------------------

int cmd_check(const Options& o) {
    std::vector<BinaryQubitPovm> povms =
        o.random > 0 ? random_povms(o.random, o.seed) : decode([&] { return povms_from_json(read_json(o.input)); });
    int n = int(povms.size());
    if (n < 1) throw std::invalid_argument("check: no POVMs given");
    for (int k = 0; k < n; ++k)
        if (!validate_povm(povms[k]).ok())
            throw std::invalid_argument("POVM " + std::to_string(k + 1) + ": " + validate_povm(povms[k]).summary());
    bool closed = o.mode != "oracle", numeric = o.mode != "closed-form";
    if (numeric && n > kMaxOracleN) throw std::invalid_argument("check: oracle mode supports at most 12 POVMs");

    Json subsets = Json::array();
    bool unknown = false, disagree = false;
    for (Outcome m = 1; m <= full_mask(n); ++m) {
        VertexSet s = from_mask(m);
        std::vector<BinaryQubitPovm> sub;
        for (int v : s) sub.push_back(povms[v - 1]);
        Json row = {{"subset", s}};
        Decision cf = Decision::Unknown, orc = Decision::Unknown;
        if (closed) {
            Verdict v = decide_closed_form(sub);
            cf = v.decision;
            row["closed_form"] = to_json(v);
        }
        if (numeric) {
            FeasibilityVerdict fv = oracle_decide(sub);
            orc = fv.status == FeasibilityStatus::Feasible           ? Decision::Compatible
                  : fv.status == FeasibilityStatus::LikelyInfeasible ? Decision::Incompatible
                                                                     : Decision::Unknown;
            row["oracle"] = {{"status", to_string(fv.status)}, {"residual", fv.residual}, {"iterations", fv.iterations}};
        }
        if (closed && numeric && cf != Decision::Unknown && orc != Decision::Unknown && cf != orc) disagree = true;
        subsets.push_back(row);
    }

    Decider decider = closed ? closed_form_decider() : Decider(oracle_decision);
    if (closed && numeric)
        decider = [](const std::vector<BinaryQubitPovm>& p) {
            Decision d = decide_closed_form(p).decision;
            return d != Decision::Unknown ? d : oracle_decision(p);
        };
    StructureResult sr = structure_of(povms, decider);
    unknown = sr.partial();
    bool full = sr.structure.contains(from_mask(full_mask(n)));
    std::string overall = full ? "compatible" : unknown && sr.structure.minimal_incompatible().empty() ? "unknown" : "incompatible";
    // A full set that is not known compatible but has no incompatible subset is undecided.
    if (!full) {
        bool proven_incompatible = false;
        for (const auto& s : sr.structure.minimal_incompatible()) {
            bool undecided = false;
            for (const auto& u : sr.undecided) undecided = undecided || u == s;
            proven_incompatible = proven_incompatible || !undecided;
        }
        if (!proven_incompatible) overall = "unknown";
    }

    Json out = {{"n", n},        {"povms", to_json(povms)["povms"]}, {"mode", o.mode},
                {"verdict", overall}, {"structure", to_json(sr.structure)}, {"undecided", sr.undecided},
                {"subsets", subsets}};
    emit(o, out);
    std::cerr << "check: " << n << " POVM(s), full set " << overall << ", structure " << to_string(sr.structure)
              << (unknown ? " (partial)" : "") << '\n';
    if (disagree) {
        std::cerr << "check: closed form and oracle disagree\n";
        return kVerifyFailed;
    }
    return unknown ? kUnknown : kOk;
}

int cmd_joint(const Options& o) {
    const std::string& c = o.constructor;
    JointPovm joint;
    std::string used = c;
    if (c == "planar-symmetric" || c == "pair" || c == "mtuple" || c == "coplanar") {
        if (o.eta < 0) throw std::invalid_argument("joint: --eta is required");
        if (c == "planar-symmetric") {
            joint = build_planar_symmetric_joint({o.n, o.eta});
        } else if (c == "coplanar") {
            std::vector<double> angles;
            std::stringstream ss(o.angles);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) angles.push_back(decode([&] { return parse_angle(Json(item)); }));
            joint = build_coplanar_same_purity_joint(angles, o.eta);
        } else {
            auto s = parse_list(o.subset);
            if (c == "pair") {
                if (s.size() != 2) throw std::invalid_argument("joint: pair needs --subset k1,k2");
                joint = surgery_pair(o.n, s[0], s[1], o.eta);
            } else {
                joint = surgery_mtuple(o.n, s, o.eta);
            }
        }
    } else {
        auto povms = decode([&] { return povms_from_json(read_json(o.input)); });
        for (size_t k = 0; k < povms.size(); ++k)
            if (!validate_povm(povms[k]).ok()) throw std::invalid_argument("POVM " + std::to_string(k + 1) + " is invalid");
        if (c == "general-binary") {
            joint = build_general_binary_joint(povms).joint;
        } else if (c == "oracle" || c == "auto") {
            bool done = false;
            if (c == "auto" && povms.size() <= 8) {
                PathVerdict pv = general_binary_best_ordering(povms);
                if (compatible(pv.verdict)) {
                    joint = build_general_binary_joint(povms, pv.labelling).joint;
                    used = "general-binary";
                    done = true;
                }
            }
            if (!done) {
                FeasibilityVerdict fv = oracle_decide(povms);
                if (fv.status != FeasibilityStatus::Feasible) {
                    emit(o, to_json(fv));
                    std::cerr << "joint: no joint POVM found (oracle " << to_string(fv.status) << ")\n";
                    return kUnknown;
                }
                joint = fv.witness;
                used = "oracle";
            }
        } else {
            throw std::invalid_argument("joint: unknown constructor " + c);
        }
    }
    ValidationReport rep = validate_joint(joint, used == "oracle" ? 1e-9 : kEpsPsd, used == "oracle" ? 1e-9 : kEpsMarg);
    emit(o, to_json(joint));
    std::cerr << "joint: " << used << ", " << joint.nonzero_count() << " nonzero effects, validation " << rep.summary()
              << '\n';
    return rep.ok() ? kOk : kVerifyFailed;
}

CatalogEntry catalog_for(const Options& o, RealizeOptions& ro) {
    if (o.eta >= 0) ro.eta = o.eta;
    if (o.recipe == "noncoplanar") ro.item6 = Item6Recipe::NonCoplanar;
    else if (o.recipe != "mixed") throw std::invalid_argument("realize: --recipe must be mixed or noncoplanar");
    const std::string& s = o.structure;
    if (s == "n-cycle") return catalog_n_cycle(o.n, ro);
    if (s == "n-specker") return catalog_n_specker(o.n, ro);
    if (s == "four-vertex") return catalog_four_vertex(o.id, ro);
    if (s == "misc") return catalog_misc(o.tag, ro);
    return catalog_misc(s, ro);  // a misc tag given directly
}

int cmd_realize(const Options& o) {
    RealizeOptions ro;
    CatalogEntry entry = catalog_for(o, ro);
    RealizationCertificate c;
    try {
        c = certify(entry, ro.oracle);
    } catch (const CertificationError& e) {
        std::cerr << "realize: " << e.what() << '\n';
        return kVerifyFailed;
    }
    emit(o, to_json(c));
    std::cerr << "realize: " << c.recipe.tag << " at eta " << c.recipe.eta << ", structure " << to_string(c.claimed)
              << '\n';
    return kOk;
}

VerifyMode parse_mode(const std::string& m) {
    if (m == "closed-form") return VerifyMode::ClosedForm;
    if (m == "oracle") return VerifyMode::Oracle;
    return VerifyMode::Both;
}

int cmd_verify(const Options& o) {
    auto cert = decode([&] { return certificate_from_json(read_json(o.input)); });
    VerifyReport rep = verify_certificate(cert, parse_mode(o.mode));
    emit(o, to_json(rep));
    for (const auto& f : rep.failures) std::cerr << "verify: FAIL " << f << '\n';
    for (const auto& u : rep.undecided) std::cerr << "verify: undecided " << u << '\n';
    std::cerr << "verify: " << (rep.ok ? "ok" : "failed") << '\n';
    if (!rep.failures.empty()) return kVerifyFailed;
    return rep.ok ? kOk : kUnknown;
}

int cmd_atlas(const Options& o) {
    Json entries = Json::array();
    bool all_ok = true;
    auto add = [&](int id, const RealizeOptions& ro) {
        CatalogEntry e = catalog_four_vertex(id, ro);
        RealizationCertificate c = certify(e, ro.oracle);
        VerifyReport rep = verify_certificate(c, parse_mode(o.mode == "closed-form" ? "closed-form" : o.mode));
        all_ok = all_ok && rep.ok;
        Json j = {{"id", id},
                  {"canonical", canonical_form(e.claimed)},
                  {"structure", to_json(e.claimed)},
                  {"recipe", to_json(e.recipe)},
                  {"verified", rep.ok},
                  {"certificate", to_json(c)}};
        entries.push_back(j);
    };
    for (int id = 1; id <= 20; ++id) {
        add(id, {});
        if (id == 6) {
            RealizeOptions nc;
            nc.item6 = Item6Recipe::NonCoplanar;
            add(6, nc);
        }
    }
    Json manifest = {{"vertex_count", 4},
                     {"isomorphism_classes", enumerate_structures(4).size()},
                     {"entries", entries},
                     {"undecided_n5_range",
                      {{"lo", 4.0 / (3 * (std::sqrt(5.0) - 1) + std::sqrt(10 - 2 * std::sqrt(5.0)))},
                       {"hi", 4.0 / (std::sqrt(5.0) - 1 + 2 * std::sqrt(10 - 2 * std::sqrt(5.0)))},
                       {"note", "exact structure of 5 planar symmetric POVMs unknown in this purity range"}}}};
    emit(o, manifest);
    std::cerr << "atlas: " << entries.size() << " certificates, " << (all_ok ? "all verified" : "verification failures")
              << '\n';
    return all_ok ? kOk : kVerifyFailed;
}

int cmd_bounds(const Options& o) {
    auto [lo, hi] = parse_range(o.n_range, o.n > 0 ? o.n : 3);
    if (lo < 2 || hi < lo || hi > kMaxJointN) throw std::invalid_argument("bounds: N range must lie in [2, 20]");
    std::ostringstream os;
    os.precision(17);
    const double pi = std::numbers::pi;
    if (o.family == "planar-symmetric") {
        os << "N,nwise_bound,pair_adjacent,triple_consecutive\n";
        for (int n = lo; n <= hi; ++n) {
            os << n << ',' << planar_symmetric_bound(n) << ',' << planar_subset_bound(n, {1, 2}) << ',';
            if (n >= 3) os << planar_subset_bound(n, {1, 2, 3});
            os << '\n';
        }
    } else if (o.family == "n-cycle" || o.family == "n-specker") {
        os << "N,lo,hi\n";
        for (int n = std::max(lo, 3); n <= hi; ++n) {
            RealizeOptions ro;
            ro.eta = 0.5;  // placeholder; only the window is reported
            CatalogEntry e = o.family == "n-cycle" ? catalog_n_cycle(n, ro) : catalog_n_specker(n, ro);
            os << n << ',' << e.recipe.window.lo << ',' << e.recipe.window.hi << '\n';
        }
    } else if (o.family == "pair-distance") {
        os << "N,d,bound\n";
        for (int n = lo; n <= hi; ++n)
            for (int d = 1; d <= n / 2; ++d) os << n << ',' << d << ',' << pair_same_purity_bound(d * pi / n) << '\n';
    } else {
        throw std::invalid_argument("bounds: unknown family " + o.family);
    }
    std::string text = os.str();
    text.pop_back();
    emit(o, text);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint measurability of binary qubit POVMs"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--out", o.out, "Write the result to this file instead of standard output");
    app.add_option("--seed", o.seed, "Seed for randomized inputs");

    auto* check = app.add_subcommand("check", "Decide compatibility of every subset of a POVM set");
    check->add_option("input", o.input, "POVM set JSON (- for standard input)");
    check->add_option("--mode", o.mode)->check(CLI::IsMember({"closed-form", "oracle", "both"}));
    check->add_option("--random", o.random, "Check this many random POVMs instead of reading input");

    auto* joint = app.add_subcommand("joint", "Construct a joint POVM");
    joint->add_option("input", o.input, "POVM set JSON for general-binary, oracle and auto");
    joint->add_option("--constructor", o.constructor)
        ->check(CLI::IsMember({"auto", "planar-symmetric", "pair", "mtuple", "coplanar", "general-binary", "oracle"}));
    joint->add_option("--n", o.n, "Planar symmetric family size");
    joint->add_option("--eta", o.eta, "Purity");
    joint->add_option("--subset", o.subset, "Comma separated member indices, e.g. 1,3");
    joint->add_option("--angles", o.angles, "Comma separated angles of E_2..E_N, e.g. 60deg,120deg");

    auto* realize = app.add_subcommand("realize", "Realize a structure and emit its certificate");
    realize->add_option("--structure", o.structure, "n-cycle, n-specker, four-vertex, misc or a misc tag")->required();
    realize->add_option("--n", o.n);
    realize->add_option("--id", o.id, "Four-vertex atlas id (1..20)");
    realize->add_option("--tag", o.tag, "Scenario tag for --structure misc");
    realize->add_option("--eta", o.eta, "Purity (defaults to the window midpoint)");
    realize->add_option("--recipe", o.recipe, "Recipe for atlas id 6: mixed or noncoplanar");

    auto* verify = app.add_subcommand("verify", "Re-check a certificate");
    verify->add_option("input", o.input, "Certificate JSON (- for standard input)");
    verify->add_option("--mode", o.mode)->check(CLI::IsMember({"closed-form", "oracle", "both"}));

    auto* atlas = app.add_subcommand("atlas", "Certify all 20 four-vertex structures");
    atlas->add_option("--mode", o.mode)->check(CLI::IsMember({"closed-form", "oracle", "both"}));

    auto* bounds = app.add_subcommand("bounds", "Tabulate closed-form thresholds as CSV");
    bounds->add_option("--family", o.family)->check(CLI::IsMember({"planar-symmetric", "n-cycle", "n-specker", "pair-distance"}));
    bounds->add_option("--n", o.n_range, "N or a range such as 3..8");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kPrecondition;
    }

    try {
        if (*check) return cmd_check(o);
        if (*joint) return cmd_joint(o);
        if (*realize) return cmd_realize(o);
        if (*verify) return cmd_verify(o);
        if (*atlas) return cmd_atlas(o);
        if (*bounds) return cmd_bounds(o);
    } catch (const InputError& e) {
        std::cerr << "error: malformed input: " << e.what() << '\n';
        return kBadJson;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
