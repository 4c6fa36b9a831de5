#pragma once

// JSON forms of the library types. Doubles are written in shortest
// round-trip form, so parsing the output reproduces every value exactly.

#include "jm/criteria.hpp"
#include "jm/oracle.hpp"
#include "jm/povm.hpp"
#include "jm/realizer.hpp"
#include "jm/structures.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace jm {

using Json = nlohmann::json;

// Structurally valid JSON that does not match the expected schema.
struct JsonSchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Angles are numbers in radians or strings with a "deg" or "rad" suffix.
double parse_angle(const Json& j);

Json to_json(const BlochVector& v);
Json to_json(const BinaryQubitPovm& p);
Json to_json(const std::vector<BinaryQubitPovm>& povms);  // {"povms": [...]}
Json to_json(const Effect& e);
Json to_json(const JointPovm& j);
Json to_json(const JmStructure& s);
Json to_json(const Verdict& v);
Json to_json(const EtaWindow& w);
Json to_json(const RealizationRecipe& r);
Json to_json(const Evidence& e);
Json to_json(const RealizationCertificate& c);
Json to_json(const FeasibilityVerdict& v);
Json to_json(const VerifyReport& r);

BlochVector bloch_from_json(const Json& j);
// Accepts {"bias", "bloch": [x,y,z]} or {"bias", "eta", "angle"[, "elevation"]}.
BinaryQubitPovm povm_from_json(const Json& j);
std::vector<BinaryQubitPovm> povms_from_json(const Json& j);
Effect effect_from_json(const Json& j);
JointPovm joint_from_json(const Json& j);
JmStructure structure_from_json(const Json& j);
EtaWindow window_from_json(const Json& j);
RealizationRecipe recipe_from_json(const Json& j);
Evidence evidence_from_json(const Json& j);
RealizationCertificate certificate_from_json(const Json& j);

Decision decision_from_string(const std::string& s);

}  // namespace jm
