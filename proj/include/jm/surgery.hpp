#pragma once

// Explicit joint POVM constructors: the optimal joint of N planar symmetric
// POVMs and the marginal-surgery recipes for pairs, M-tuples, general
// coplanar same-purity sets and general (possibly biased) sets.
//
// All constructors check their closed-form bound (with 1e-12 slack) up front
// and throw std::domain_error when it fails. Measurement order in the result
// equals input order.

#include "jm/criteria.hpp"
#include "jm/povm.hpp"

#include <vector>

namespace jm {

struct PlanarSymmetricFamily {
    int n = 0;
    double eta = 0.0;

    // Unit direction of E_k (1-based): angle (k-1)*pi/N in the xy plane.
    BlochVector direction(int k) const;
    BinaryQubitPovm member(int k) const;
    std::vector<BinaryQubitPovm> members() const;
    std::vector<BinaryQubitPovm> members(const std::vector<int>& subset) const;
};

JointPovm build_planar_symmetric_joint(const PlanarSymmetricFamily& fam);

// Joint of E_{k1}, E_{k2} (k1 < k2) from an N-member planar symmetric family.
JointPovm surgery_pair(int n, int k1, int k2, double eta);

// Joint of the subset k_1 < ... < k_M. The 2M nonzero effects sit on the
// cyclic run outcomes (+^p -^(M-p)) and their negations.
JointPovm surgery_mtuple(int n, const std::vector<int>& subset, double eta);

// E_1 along x and E_{p+1} at angle angles[p-1] in the xy plane, all with purity eta.
JointPovm build_coplanar_same_purity_joint(const std::vector<double>& angles, double eta);

// Path-sum construction in input order. Biases must already be non-decreasing
// along the input; no outcome relabelling is applied.
JointPovm build_general_binary_path_joint(const std::vector<BinaryQubitPovm>& povms);

struct GeneralBinaryJoint {
    JointPovm joint;          // in the original measurement indexing and outcome labels
    PathLabelling labelling;  // the relabelling the construction ran under
};

// Applies the labelling (outcome flips, then path order), builds the joint for
// the relabelled set and maps it back to the caller's indexing.
GeneralBinaryJoint build_general_binary_joint(const std::vector<BinaryQubitPovm>& povms, const PathLabelling& lab);

// Default labelling: flip to non-negative bias, stable sort by bias.
GeneralBinaryJoint build_general_binary_joint(const std::vector<BinaryQubitPovm>& povms);

}  // namespace jm
