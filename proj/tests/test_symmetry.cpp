#include <doctest.h>

#include "jm/criteria.hpp"
#include "jm/povm.hpp"
#include "jm/surgery.hpp"
#include "jm/symmetry.hpp"

#include "support.hpp"

#include <algorithm>
#include <numbers>
#include <map>
#include <set>

using namespace jm;

namespace {

SymmetryElement by_name(const std::string& name, int n) {
    for (const auto& g : group_elements(n))
        if (element_name(g, n) == name) return g;
    FAIL("no element named " << name);
    return {};
}

// Unordered Bloch lines of the planar symmetric members in subset, as
// rotation steps mod N after applying g.
std::set<int> image_lines(const SymmetryElement& g, const std::vector<int>& subset, int n) {
    std::set<int> out;
    for (int k : act_on_indices(g, subset, n).image) out.insert(k);
    return out;
}

}  // namespace

TEST_CASE("S_4 multiplication table matches the reference table") {
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            auto g = by_name(jm::testing::kS4Header[r], 4);
            auto h = by_name(jm::testing::kS4Header[c], 4);
            CAPTURE(r);
            CAPTURE(c);
            CHECK(element_name(compose(g, h, 4), 4) == jm::testing::kS4Table[r][c]);
        }
    }
    CHECK(element_name(compose(by_name("C8", 4), by_name("C8", 4), 4), 4) == "C8^2");
    CHECK(element_name(compose(by_name("sx", 4), by_name("sx", 4), 4), 4) == "id");
}

TEST_CASE("group axioms for N = 2..8") {
    for (int n = 2; n <= 8; ++n) {
        auto els = group_elements(n);
        CHECK(els.size() == (n == 2 ? 2u : size_t(2 * n)));
        SymmetryElement id{};
        for (const auto& g : els) {
            CHECK(compose(g, id, n) == g);
            CHECK(compose(id, g, n) == g);
            CHECK(compose(g, inverse(g, n), n) == id);
            for (const auto& h : els) {
                auto gh = compose(g, h, n);
                CHECK(std::find(els.begin(), els.end(), gh) != els.end());
                for (const auto& k : els) CHECK(compose(compose(g, h, n), k, n) == compose(g, compose(h, k, n), n));
            }
        }
    }
}

TEST_CASE("matrices represent the group") {
    for (int n = 2; n <= 8; ++n) {
        for (const auto& g : group_elements(n)) {
            CHECK(is_orthogonal(to_matrix(g, n)));
            for (const auto& h : group_elements(n)) {
                // Rotations are reduced mod N, so products agree up to the half turn
                // about z, which fixes every line.
                Matrix3 lhs = to_matrix(compose(g, h, n), n), rhs = to_matrix(g, n) * to_matrix(h, n);
                double d = std::min((lhs - rhs).cwiseAbs().maxCoeff(),
                                    (lhs - rhs * rotation_z(std::numbers::pi)).cwiseAbs().maxCoeff());
                CHECK(d < 1e-12);
            }
        }
    }
}

TEST_CASE("act_on_indices") {
    auto a = act_on_indices(by_name("C12", 6), {1, 2}, 6);
    CHECK(a.image == std::vector<int>{2, 3});
    CHECK(a.flips == std::vector<bool>{false, false});

    auto same = act_on_indices(SymmetryElement{}, {1, 4, 5}, 6);
    CHECK(same.image == std::vector<int>{1, 4, 5});
    CHECK(same.flips == std::vector<bool>(3, false));

    // The images agree with the matrix action on the Bloch vectors.
    for (int n = 3; n <= 7; ++n) {
        PlanarSymmetricFamily fam{n, 1.0};
        for (const auto& g : group_elements(n)) {
            std::vector<int> all(n);
            for (int k = 0; k < n; ++k) all[k] = k + 1;
            auto act = act_on_indices(g, all, n);
            for (int k = 1; k <= n; ++k) {
                BlochVector img = apply(to_matrix(g, n), fam.direction(k));
                BlochVector expect = fam.direction(act.image[k - 1]) * (act.flips[k - 1] ? -1.0 : 1.0);
                CHECK(img.max_abs_diff(expect) < 1e-12);
            }
        }
    }
}

TEST_CASE("are_equivalent") {
    auto g = are_equivalent({1, 2, 5}, {1, 3, 4}, 6);
    REQUIRE(g.has_value());
    CHECK(image_lines(*g, {1, 2, 5}, 6) == std::set<int>{1, 3, 4});

    auto self = are_equivalent({1, 3}, {1, 3}, 5);
    REQUIRE(self.has_value());

    // N=5: brute force over all 10 elements for every pair of pairs.
    for (int a = 1; a <= 5; ++a)
        for (int b = a + 1; b <= 5; ++b)
            for (int c = 1; c <= 5; ++c)
                for (int d = c + 1; d <= 5; ++d) {
                    bool brute = false;
                    for (const auto& e : group_elements(5)) brute = brute || image_lines(e, {a, b}, 5) == std::set<int>{c, d};
                    CHECK(are_equivalent({a, b}, {c, d}, 5).has_value() == brute);
                }
    CHECK_FALSE(are_equivalent({1, 2}, {1, 3}, 5).has_value());
    CHECK(are_equivalent({1, 2}, {1, 5}, 5).has_value());
    CHECK_THROWS_AS(are_equivalent({1, 2}, {1, 2, 3}, 5), std::invalid_argument);
}

TEST_CASE("equivalent subsets receive identical verdicts") {
    jm::testing::Rng rng(17);
    std::uniform_real_distribution<double> u(0.3, 0.9);
    for (int n = 3; n <= 7; ++n) {
        for (int t = 0; t < 20; ++t) {
            double eta = u(rng);
            PlanarSymmetricFamily fam{n, eta};
            std::vector<int> subset;
            for (int k = 1; k <= n; ++k)
                if (rng() & 1) subset.push_back(k);
            if (subset.size() < 2) continue;
            for (const auto& g : group_elements(n)) {
                std::vector<int> img;
                for (int k : image_lines(g, subset, n)) img.push_back(k);
                Verdict a = decide_closed_form(fam.members(subset)), b = decide_closed_form(fam.members(img));
                CHECK(a.decision == b.decision);
                CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("transport_joint carries a witness to the image subset") {
    double eta = 0.7;
    JointPovm j = surgery_pair(6, 1, 2, eta);
    for (const auto& g : group_elements(6)) {
        auto [img, moved] = transport_joint(g, {1, 2}, j, 6);
        CHECK(validate_joint(moved).ok());
        CHECK(marginal_error(moved, PlanarSymmetricFamily{6, eta}.members(img)) < 1e-12);
    }
}
