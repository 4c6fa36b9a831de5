#pragma once

// Realizations of joint measurability structures by qubit POVMs, together
// with machine-checkable certificates: a validated joint POVM for every
// maximal compatible set and an incompatibility proof (closed-form margin or
// oracle report) for every minimal incompatible set.

#include "jm/criteria.hpp"
#include "jm/oracle.hpp"
#include "jm/povm.hpp"
#include "jm/structures.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jm {

// Purity window (lo, hi]. A sharp endpoint is one where the structure is
// known to change when crossing it.
struct EtaWindow {
    double lo = 0.0, hi = 1.0;
    std::string lo_expr, hi_expr;
    bool lo_sharp = true, hi_sharp = true;

    bool contains(double eta) const { return eta > lo && eta <= hi; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

enum class RecipeKind { PlanarSymmetricSubset, MixedPurity, NonCoplanar };
std::string to_string(RecipeKind k);

struct RealizationRecipe {
    RecipeKind kind = RecipeKind::PlanarSymmetricSubset;
    std::string tag;
    int family_n = 0;            // planar symmetric family size
    std::vector<int> subset;     // members taken from the family (1-based)
    EtaWindow window;
    double eta = 0.0;
    std::vector<BinaryQubitPovm> povms;
    std::string note;
};

struct CatalogEntry {
    RealizationRecipe recipe;
    JmStructure claimed;  // indexed by position in recipe.povms
};

enum class Item6Recipe { MixedPurity, NonCoplanar };

struct RealizeOptions {
    std::optional<double> eta;  // overrides the window midpoint
    Item6Recipe item6 = Item6Recipe::MixedPurity;
    OracleParams oracle;
};

inline constexpr int kMaxRealizeN = 12;

CatalogEntry catalog_n_cycle(int n, const RealizeOptions& opts = {});
CatalogEntry catalog_n_specker(int n, const RealizeOptions& opts = {});
CatalogEntry catalog_four_vertex(int id, const RealizeOptions& opts = {});
CatalogEntry catalog_misc(const std::string& tag, const RealizeOptions& opts = {});
std::vector<std::string> misc_tags();

struct Evidence {
    VertexSet subset;
    Decision verdict = Decision::Unknown;
    std::string criterion;    // criterion or constructor that settles the subset
    double margin = 0.0;      // closed-form slack, or minus the oracle residual
    std::string digest;       // of the witness, for compatible entries
    std::optional<JointPovm> witness;
};

struct RealizationCertificate {
    RealizationRecipe recipe;
    std::vector<BinaryQubitPovm> povms;
    JmStructure claimed;
    std::vector<Evidence> evidence;
};

struct CertificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Builds the evidence for entry; throws CertificationError when a maximal set
// has no witness or a minimal incompatible set has no proof.
RealizationCertificate certify(const CatalogEntry& entry, const OracleParams& oracle = {});

RealizationCertificate realize_n_cycle(int n, const RealizeOptions& opts = {});
RealizationCertificate realize_n_specker(int n, const RealizeOptions& opts = {});
RealizationCertificate realize_four_vertex(int id, const RealizeOptions& opts = {});
RealizationCertificate realize_misc(const std::string& tag, const RealizeOptions& opts = {});

enum class VerifyMode { ClosedForm, Oracle, Both };

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> failures;
    std::vector<std::string> undecided;  // subsets neither proof route settled
};

VerifyReport verify_certificate(const RealizationCertificate& c, VerifyMode mode, const OracleParams& oracle = {});

// Stable hex digest of a joint POVM's effect values.
std::string joint_digest(const JointPovm& j);

}  // namespace jm
