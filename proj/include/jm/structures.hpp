#pragma once

// Joint measurability structures: downward-closed hypergraphs on vertices
// 1..n, stored by their maximal compatible sets.

#include "jm/criteria.hpp"
#include "jm/povm.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace jm {

using VertexSet = std::vector<int>;  // 1-based, strictly increasing

class JmStructure {
public:
    JmStructure() = default;

    // Keeps the inclusion-maximal members of sets and adds any vertex that is
    // not covered as a singleton.
    JmStructure(int n_vertices, const std::vector<VertexSet>& sets);

    int n_vertices() const { return n_; }
    const std::vector<VertexSet>& maximal() const { return maximal_; }
    bool contains(const VertexSet& subset) const;

    // Minimal subsets that are not compatible.
    std::vector<VertexSet> minimal_incompatible() const;

    bool operator==(const JmStructure&) const = default;

private:
    int n_ = 0;
    std::vector<VertexSet> maximal_;  // sorted
};

std::uint32_t to_mask(const VertexSet& s);
VertexSet from_mask(std::uint32_t m);
std::string to_string(const VertexSet& s);       // "{1,2,4}"
std::string to_string(const JmStructure& s);     // "{1,2},{2,3}"

JmStructure n_cycle(int n);
JmStructure nm_compatible(int n, int m);
inline JmStructure n_complete(int n) { return nm_compatible(n, 2); }
inline JmStructure n_specker(int n) { return nm_compatible(n, n - 1); }

inline constexpr int kMaxCanonicalVertices = 8;

// Lexicographically minimal relabelled maximal-set family, rendered as text.
std::string canonical_form(const JmStructure& s);
bool is_isomorphic(const JmStructure& a, const JmStructure& b);

// One representative per isomorphism class of downward-closed structures on
// n vertices (every singleton compatible). Limited to n <= 5.
std::vector<JmStructure> enumerate_structures(int n);

using Decider = std::function<Decision(const std::vector<BinaryQubitPovm>&)>;

Decider closed_form_decider();

struct StructureResult {
    JmStructure structure;            // built from the subsets decided compatible
    std::vector<VertexSet> undecided;  // subsets the decider left Unknown
    bool partial() const { return !undecided.empty(); }
};

StructureResult structure_of(const std::vector<BinaryQubitPovm>& povms, const Decider& decider);

}  // namespace jm
