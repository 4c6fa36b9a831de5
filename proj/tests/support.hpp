#pragma once

// Shared fixtures for the unit tests and the acceptance runner: random
// instances, the summation identity oracles and the reference S_4 Cayley table.

#include "jm/povm.hpp"

#include <array>
#include <random>
#include <string>
#include <vector>

namespace jm::testing {

using Rng = std::mt19937_64;

BlochVector random_unit(Rng& rng);
Matrix3 random_orthogonal(Rng& rng);
// Valid binary POVM; about a third come out unbiased.
BinaryQubitPovm random_povm(Rng& rng);
std::vector<BinaryQubitPovm> random_povms(Rng& rng, int n);

// Largest deviation of the four trigonometric sums from their closed forms
// over N in [n_lo, n_hi] and p in [1, N-1]. Odd-N sums are used for odd N
// and even-N sums for even N, matching where their index limits are integers.
double trig_sum_identity_error(int n_lo, int n_hi);

// Vertex i of the 2N-gon of joint directions, i in [-N+1, N].
BlochVector polygon_vertex(int n, int i);

// Compares the closed-form index interval of the first-k-positive sum with
// the indices found by testing every vertex's sign pattern. Returns a
// description of the first mismatch, or an empty string.
std::string check_first_k_bounds(int n);

// Same for the run intervals bounded by members a < b.
std::string check_run_bounds(int n);

// The first-k-positive Bloch sum taken from the optimal joint POVM, compared
// with its closed form. Returns the largest deviation.
double first_k_joint_sum_error(int n);

// S_4 multiplication table in element_name notation; the row element is
// applied after the column element.
extern const std::array<std::array<const char*, 8>, 8> kS4Table;
extern const std::array<const char*, 8> kS4Header;

}  // namespace jm::testing
