#pragma once

// The symmetry group S_N of the N planar symmetric Bloch lines.
//
// Element (r, false) is the rotation by r*pi/N about z. Element (r, true) is
// the reflection about the line at angle r*pi/(2N), written as the rotation
// (r, false) composed after the reflection about the x axis. Rotations are
// taken mod N because the rotation by pi fixes every line. For N = 2 the
// reflections act trivially on the two lines and are left out, leaving the
// two-element group generated by the quarter turn.

#include "jm/povm.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jm {

struct SymmetryElement {
    int rotation_steps = 0;
    bool reflection = false;
    bool operator==(const SymmetryElement&) const = default;
};

std::vector<SymmetryElement> group_elements(int n);

// Group product g*h: h is applied first.
SymmetryElement compose(const SymmetryElement& g, const SymmetryElement& h, int n);
SymmetryElement inverse(const SymmetryElement& g, int n);

// The 3x3 orthogonal matrix of g acting on Bloch vectors.
Matrix3 to_matrix(const SymmetryElement& g, int n);

// Name in the C_{2N}^r / sigma_{r pi/2N} notation, e.g. "C8^2" or "s3pi/8".
std::string element_name(const SymmetryElement& g, int n);

struct IndexAction {
    std::vector<int> image;   // image[i] is where subset[i] lands (1-based)
    std::vector<bool> flips;  // true when the mapped +1 vector points into the lower half plane
};

IndexAction act_on_indices(const SymmetryElement& g, const std::vector<int>& subset, int n);

// Searches the whole group for g mapping subset a onto subset b as sets.
std::optional<SymmetryElement> are_equivalent(const std::vector<int>& a, const std::vector<int>& b, int n);

// Moves a joint POVM for the planar symmetric members listed in subset
// (in that order) to a joint POVM for the image set under g, with the image
// indices sorted increasingly. Returns the sorted image alongside.
std::pair<std::vector<int>, JointPovm> transport_joint(const SymmetryElement& g, const std::vector<int>& subset,
                                                       const JointPovm& joint, int n);

}  // namespace jm
