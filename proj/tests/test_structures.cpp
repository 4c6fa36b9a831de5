#include <doctest.h>

#include "jm/structures.hpp"
#include "jm/surgery.hpp"

#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <set>

using namespace jm;

namespace {

// True when every subset of a compatible set is compatible.
bool downward_closed(const JmStructure& s) {
    int n = s.n_vertices();
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        if (!s.contains(from_mask(m))) continue;
        for (std::uint32_t sub = (m - 1) & m; sub; sub = (sub - 1) & m)
            if (!s.contains(from_mask(sub))) return false;
    }
    return true;
}

JmStructure relabel(const JmStructure& s, const std::vector<int>& perm) {
    std::vector<VertexSet> sets;
    for (const auto& m : s.maximal()) {
        VertexSet img;
        for (int v : m) img.push_back(perm[v - 1]);
        std::sort(img.begin(), img.end());
        sets.push_back(img);
    }
    return JmStructure(s.n_vertices(), sets);
}

}  // namespace

TEST_CASE("structure families") {
    CHECK(n_cycle(3) == n_complete(3));
    CHECK(n_specker(3) == n_cycle(3));
    CHECK(n_cycle(7).maximal().size() == 7);
    CHECK_FALSE(n_cycle(4).contains({1, 3}));
    CHECK(n_cycle(4).contains({1, 4}));

    CHECK(nm_compatible(5, 5).maximal() == std::vector<VertexSet>{{1, 2, 3, 4, 5}});
    CHECK(nm_compatible(4, 1).maximal() == std::vector<VertexSet>{{1}, {2}, {3}, {4}});
    CHECK(n_specker(4).minimal_incompatible() == std::vector<VertexSet>{{1, 2, 3, 4}});
    CHECK(n_cycle(4).minimal_incompatible() == std::vector<VertexSet>{{1, 3}, {2, 4}});

    CHECK(to_string(VertexSet{1, 2, 4}) == "{1,2,4}");
    CHECK(to_string(n_cycle(3)) == "{1,2},{1,3},{2,3}");
    CHECK(JmStructure(3, {{1, 2}}).maximal() == std::vector<VertexSet>{{3}, {1, 2}});
    CHECK_THROWS_AS(n_cycle(2), std::invalid_argument);
    CHECK_THROWS_AS(nm_compatible(3, 4), std::invalid_argument);
}

TEST_CASE("generated structures are downward closed") {
    for (int n = 3; n <= 6; ++n) {
        CHECK(downward_closed(n_cycle(n)));
        for (int m = 1; m <= n; ++m) CHECK(downward_closed(nm_compatible(n, m)));
    }
    for (int n = 1; n <= 5; ++n)
        for (const auto& s : enumerate_structures(n)) CHECK(downward_closed(s));
}

TEST_CASE("isomorphism classes") {
    CHECK(enumerate_structures(1).size() == 1);
    CHECK(enumerate_structures(2).size() == 2);
    CHECK(enumerate_structures(3).size() == 5);
    auto four = enumerate_structures(4);
    CHECK(four.size() == 20);
    std::set<std::string> forms;
    for (const auto& s : four) forms.insert(canonical_form(s));
    CHECK(forms.size() == 20);

    jm::testing::Rng rng(3);
    std::vector<int> perm(5);
    std::iota(perm.begin(), perm.end(), 1);
    for (int t = 0; t < 20; ++t) {
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(is_isomorphic(relabel(n_cycle(5), perm), n_cycle(5)));
        CHECK(canonical_form(relabel(n_cycle(5), perm)) == canonical_form(n_cycle(5)));
    }
    CHECK_FALSE(is_isomorphic(n_cycle(5), nm_compatible(5, 2)));
    CHECK_THROWS_AS(enumerate_structures(6), std::invalid_argument);
}

TEST_CASE("structure_of planar symmetric families") {
    Decider cf = closed_form_decider();
    auto r = structure_of(PlanarSymmetricFamily{4, 0.74}.members(), cf);
    CHECK_FALSE(r.partial());
    CHECK(r.structure == n_cycle(4));
    CHECK(structure_of(PlanarSymmetricFamily{4, 0.66}.members(), cf).structure == n_specker(4));
    for (int n = 2; n <= 7; ++n)
        CHECK(structure_of(PlanarSymmetricFamily{n, 0.01}.members(), cf).structure == nm_compatible(n, n));
}

TEST_CASE("raising eta never adds a compatible set") {
    Decider cf = closed_form_decider();
    for (int n = 3; n <= 6; ++n) {
        JmStructure prev;
        bool first = true;
        for (double eta = 0.40; eta <= 1.0; eta += 0.0025) {
            auto r = structure_of(PlanarSymmetricFamily{n, eta}.members(), cf);
            if (!first) {
                for (const auto& m : r.structure.maximal()) {
                    CAPTURE(n);
                    CAPTURE(eta);
                    CHECK(prev.contains(m));
                }
            }
            prev = r.structure;
            first = false;
        }
    }
}

TEST_CASE("structure_of reports undecided subsets") {
    Decider never = [](const std::vector<BinaryQubitPovm>& p) {
        return p.size() <= 1 ? Decision::Compatible : Decision::Unknown;
    };
    auto r = structure_of(PlanarSymmetricFamily{3, 0.5}.members(), never);
    CHECK(r.partial());
    CHECK(r.structure == nm_compatible(3, 1));
}
