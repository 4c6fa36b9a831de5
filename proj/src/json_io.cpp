#include "jm/json_io.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jm {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw JsonSchemaError("json: " + what); }

RecipeKind kind_from_string(const std::string& s) {
    if (s == "planar_symmetric_subset") return RecipeKind::PlanarSymmetricSubset;
    if (s == "mixed_purity") return RecipeKind::MixedPurity;
    if (s == "non_coplanar") return RecipeKind::NonCoplanar;
    schema_error("unknown recipe kind " + s);
}

}  // namespace

double parse_angle(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) schema_error("angle must be a number or a string");
    std::string s = j.get<std::string>();
    double scale = 1.0;
    auto ends_with = [&](const std::string& suf) {
        return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
    };
    if (ends_with("deg")) {
        scale = std::numbers::pi / 180.0;
        s.resize(s.size() - 3);
    } else if (ends_with("rad")) {
        s.resize(s.size() - 3);
    }
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        schema_error("malformed angle '" + j.get<std::string>() + "'");
    }
    if (used != s.size()) schema_error("malformed angle '" + j.get<std::string>() + "'");
    return v * scale;
}

Json to_json(const BlochVector& v) { return Json::array({v.x, v.y, v.z}); }

Json to_json(const BinaryQubitPovm& p) { return {{"bias", p.bias}, {"bloch", to_json(p.bloch)}}; }

Json to_json(const std::vector<BinaryQubitPovm>& povms) {
    Json arr = Json::array();
    for (const auto& p : povms) arr.push_back(to_json(p));
    return {{"povms", arr}};
}

Json to_json(const Effect& e) { return {{"alpha", e.alpha}, {"bloch", to_json(e.bloch)}}; }

Json to_json(const JointPovm& j) {
    Json eff = Json::object();
    for (const auto& [x, e] : j.effects) eff[std::to_string(x)] = to_json(e);
    return {{"n", j.n}, {"effects", eff}};
}

Json to_json(const JmStructure& s) { return {{"n", s.n_vertices()}, {"maximal", s.maximal()}}; }

Json to_json(const Verdict& v) {
    return {{"verdict", to_string(v.decision)},
            {"strength", to_string(v.strength)},
            {"criterion", v.criterion},
            {"margin", v.margin}};
}

Json to_json(const EtaWindow& w) {
    return {{"lo", w.lo}, {"hi", w.hi}, {"lo_expr", w.lo_expr}, {"hi_expr", w.hi_expr},
            {"lo_sharp", w.lo_sharp}, {"hi_sharp", w.hi_sharp}};
}

Json to_json(const RealizationRecipe& r) {
    Json j = {{"kind", to_string(r.kind)}, {"tag", r.tag}, {"window", to_json(r.window)}, {"eta", r.eta}};
    if (r.kind == RecipeKind::PlanarSymmetricSubset) {
        j["family_n"] = r.family_n;
        j["subset"] = r.subset;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json to_json(const Evidence& e) {
    Json j = {{"subset", e.subset}, {"verdict", to_string(e.verdict)}, {"criterion", e.criterion}, {"margin", e.margin}};
    if (!e.digest.empty()) j["digest"] = e.digest;
    if (e.witness) j["witness"] = to_json(*e.witness);
    return j;
}

Json to_json(const RealizationCertificate& c) {
    Json ev = Json::array();
    for (const auto& e : c.evidence) ev.push_back(to_json(e));
    return {{"recipe", to_json(c.recipe)},
            {"povms", to_json(c.povms)["povms"]},
            {"structure", to_json(c.claimed)},
            {"evidence", ev}};
}

Json to_json(const FeasibilityVerdict& v) {
    Json j = {{"status", to_string(v.status)},
              {"residual", v.residual},
              {"iterations", v.iterations},
              {"params",
               {{"max_iter", v.params.max_iter},
                {"eps_oracle", v.params.eps_oracle},
                {"eps_infeas", v.params.eps_infeas},
                {"plateau", v.params.plateau}}}};
    if (v.status == FeasibilityStatus::Feasible) j["witness"] = to_json(v.witness);
    return j;
}

Json to_json(const VerifyReport& r) { return {{"ok", r.ok}, {"failures", r.failures}, {"undecided", r.undecided}}; }

// ---------------------------------------------------------------------------

BlochVector bloch_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 3) schema_error("Bloch vector must be an array of three numbers");
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

BinaryQubitPovm povm_from_json(const Json& j) {
    if (!j.is_object()) schema_error("POVM must be an object");
    BinaryQubitPovm p;
    p.bias = j.value("bias", 0.0);
    if (j.contains("bloch")) {
        p.bloch = bloch_from_json(j.at("bloch"));
    } else if (j.contains("eta") && j.contains("angle")) {
        double eta = j.at("eta").get<double>(), phi = parse_angle(j.at("angle"));
        double el = j.contains("elevation") ? parse_angle(j.at("elevation")) : 0.0;
        p.bloch = BlochVector{std::cos(el) * std::cos(phi), std::cos(el) * std::sin(phi), std::sin(el)} * eta;
    } else {
        schema_error("POVM needs \"bloch\" or \"eta\" and \"angle\"");
    }
    return p;
}

std::vector<BinaryQubitPovm> povms_from_json(const Json& j) {
    const Json& arr = j.is_object() ? j.at("povms") : j;
    if (!arr.is_array()) schema_error("\"povms\" must be an array");
    std::vector<BinaryQubitPovm> out;
    for (const auto& p : arr) out.push_back(povm_from_json(p));
    return out;
}

Effect effect_from_json(const Json& j) { return {j.at("alpha").get<double>(), bloch_from_json(j.at("bloch"))}; }

JointPovm joint_from_json(const Json& j) {
    JointPovm out;
    out.n = j.at("n").get<int>();
    if (out.n < 1 || out.n > kMaxJointN) schema_error("joint POVM size out of range");
    for (const auto& [key, val] : j.at("effects").items()) {
        size_t used = 0;
        unsigned long x = 0;
        try {
            x = std::stoul(key, &used);
        } catch (const std::exception&) {
            schema_error("bad outcome key " + key);
        }
        if (used != key.size() || x > full_mask(out.n)) schema_error("bad outcome key " + key);
        out.effects[Outcome(x)] = effect_from_json(val);
    }
    return out;
}

JmStructure structure_from_json(const Json& j) {
    return JmStructure(j.at("n").get<int>(), j.at("maximal").get<std::vector<VertexSet>>());
}

EtaWindow window_from_json(const Json& j) {
    EtaWindow w;
    w.lo = j.at("lo").get<double>();
    w.hi = j.at("hi").get<double>();
    w.lo_expr = j.value("lo_expr", "");
    w.hi_expr = j.value("hi_expr", "");
    w.lo_sharp = j.value("lo_sharp", true);
    w.hi_sharp = j.value("hi_sharp", true);
    return w;
}

RealizationRecipe recipe_from_json(const Json& j) {
    RealizationRecipe r;
    r.kind = kind_from_string(j.at("kind").get<std::string>());
    r.tag = j.value("tag", "");
    r.window = window_from_json(j.at("window"));
    r.eta = j.at("eta").get<double>();
    r.family_n = j.value("family_n", 0);
    r.subset = j.value("subset", std::vector<int>{});
    r.note = j.value("note", "");
    return r;
}

Decision decision_from_string(const std::string& s) {
    if (s == "compatible") return Decision::Compatible;
    if (s == "incompatible") return Decision::Incompatible;
    if (s == "unknown") return Decision::Unknown;
    schema_error("unknown verdict " + s);
}

Evidence evidence_from_json(const Json& j) {
    Evidence e;
    e.subset = j.at("subset").get<VertexSet>();
    e.verdict = decision_from_string(j.at("verdict").get<std::string>());
    e.criterion = j.at("criterion").get<std::string>();
    e.margin = j.at("margin").get<double>();
    e.digest = j.value("digest", "");
    if (j.contains("witness")) e.witness = joint_from_json(j.at("witness"));
    return e;
}

RealizationCertificate certificate_from_json(const Json& j) {
    RealizationCertificate c;
    c.recipe = recipe_from_json(j.at("recipe"));
    c.povms = povms_from_json(j.at("povms"));
    c.recipe.povms = c.povms;
    c.claimed = structure_from_json(j.at("structure"));
    for (const auto& e : j.at("evidence")) c.evidence.push_back(evidence_from_json(e));
    return c;
}

}  // namespace jm
