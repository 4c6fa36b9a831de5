#pragma once

// Closed-form joint measurability criteria for binary qubit POVMs.
//
// Every criterion returns a Verdict whose margin is the signed slack of the
// tested inequality (positive means satisfied). Ties within kTieTol resolve
// toward Compatible, matching closed windows of the form (lo, hi].

#include "jm/povm.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace jm {

inline constexpr double kTieTol = 1e-12;

enum class Decision { Compatible, Incompatible, Unknown };
enum class Strength { Iff, NecessaryOnly, SufficientOnly };

std::string to_string(Decision d);
std::string to_string(Strength s);

struct Verdict {
    Decision decision = Decision::Unknown;
    Strength strength = Strength::Iff;
    double margin = 0.0;
    std::string criterion;
};

// Pairs ------------------------------------------------------------------

Verdict pair_general(const BinaryQubitPovm& p1, const BinaryQubitPovm& p2);
Verdict pair_unbiased(double eta1, const BlochVector& n1, double eta2, const BlochVector& n2);

// Largest common purity for two unbiased POVMs whose Bloch vectors are an angle phi apart.
double pair_same_purity_bound(double phi);

// Fermat-Torricelli point ------------------------------------------------

struct FtResult {
    BlochVector point;
    double distance_sum = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string method;  // "anchor", "diagonals" or "weiszfeld"
};

FtResult fermat_torricelli(const std::array<BlochVector, 4>& pts, int max_iter = 10000);

// Triples ----------------------------------------------------------------

Verdict triple_unbiased(const std::array<BlochVector, 3>& a);
Verdict triple_unbiased(const std::array<double, 3>& eta, const std::array<BlochVector, 3>& n);

// a2 must lie in the cone spanned by a1 and a3 (the middle vector of the
// arrangement); throws std::invalid_argument otherwise.
Verdict triple_coplanar_unbiased(const BlochVector& a1, const BlochVector& a2, const BlochVector& a3);

// Same-purity coplanar triple with the middle line at angles phi1 and phi2
// from the outer ones.
double triple_same_purity_bound(double phi1, double phi2);

// N unbiased POVMs with a common purity ------------------------------------

struct NBounds {
    double necessary = 0.0;   // eta above this is incompatible
    double sufficient = 0.0;  // eta up to this is compatible
};

NBounds n_bounds(const std::vector<BlochVector>& n);
std::pair<Verdict, Verdict> n_necessary_sufficient(double eta, const std::vector<BlochVector>& n);

// Planar symmetric families -------------------------------------------------

double planar_symmetric_bound(int n);
Verdict planar_symmetric_nwise(int n, double eta);

// Bound for the subset k_1 < ... < k_M (1-based) of N planar symmetric POVMs.
double planar_subset_bound(int n, const std::vector<int>& subset);
Verdict planar_subset_sufficient(int n, const std::vector<int>& subset, double eta);

// Coplanar unbiased POVMs with common purity; angles are those of E_2..E_N
// measured from E_1, strictly increasing inside (0, pi).
double coplanar_same_purity_bound(const std::vector<double>& angles);
Verdict coplanar_same_purity_sufficient(const std::vector<double>& angles, double eta);

// General binary POVMs --------------------------------------------------------

// The relabelling applied before evaluating the path inequality: flips[k]
// swaps the outcomes of input POVM k, and order lists input indices along
// the path.
struct PathLabelling {
    std::vector<bool> flips;
    std::vector<int> order;
};

struct PathVerdict {
    Verdict verdict;
    PathLabelling labelling;
};

// Path sum |a_1 + a_N| + sum_p |a_p - a_{p+1}| for the POVMs as given.
double path_length(const std::vector<BinaryQubitPovm>& povms);

// Flips outcomes so every bias is non-negative, orders by non-decreasing
// bias (stable) and tests the path inequality.
PathVerdict general_binary_sufficient(const std::vector<BinaryQubitPovm>& povms);

// Evaluates the inequality for an explicit labelling, which must leave the
// biases non-negative and non-decreasing along the path.
PathVerdict general_binary_with_labelling(const std::vector<BinaryQubitPovm>& povms, const PathLabelling& lab);

// Searches every admissible path ordering (and outcome flips of unbiased
// members) for the largest margin. Limited to N <= 8.
PathVerdict general_binary_best_ordering(const std::vector<BinaryQubitPovm>& povms);

// Composite closed-form decision ------------------------------------------------

// Combines the criteria above into one decision for an arbitrary set:
// Iff criteria first, then necessary conditions, then sufficient ones.
// Returns Unknown when nothing applies.
Verdict decide_closed_form(const std::vector<BinaryQubitPovm>& povms);

// Helpers shared with other modules.
bool compatible(const Verdict& v);
bool incompatible(const Verdict& v);

}  // namespace jm
