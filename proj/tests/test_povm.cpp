#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jm/povm.hpp"
#include "jm/surgery.hpp"

#include "support.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace jm;
using jm::testing::Rng;

TEST_CASE("validate_povm on boundary cases") {
    CHECK(validate_povm({0.0, {1, 0, 0}}).ok());  // projective
    CHECK(validate_povm({0.0, {0, 0, 0}}).ok());  // coin

    auto rep = validate_povm({0.5, {0.6, 0, 0}});
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (const auto& v : rep.violations)
        if (std::abs(v.magnitude - 0.1) < 1e-12) found = true;  // 0.5 > 1 - 0.6 by 0.1
    CHECK(found);
}

TEST_CASE("effect eigenvalues of valid POVMs lie in [0, 1]") {
    Rng rng(11);
    for (int t = 0; t < 2000; ++t) {
        BinaryQubitPovm p = jm::testing::random_povm(rng);
        REQUIRE(validate_povm(p).ok());
        for (int s : {+1, -1}) {
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(p.effect(s).to_matrix());
            CHECK(es.eigenvalues().minCoeff() >= -1e-12);
            CHECK(es.eigenvalues().maxCoeff() <= 1 + 1e-12);
            CHECK(std::abs(es.eigenvalues().minCoeff() - p.effect(s).min_eigenvalue()) < 1e-12);
        }
        Effect sum = p.effect(+1) + p.effect(-1);
        CHECK(sum == Effect{2.0, {0, 0, 0}});
    }
}

TEST_CASE("marginalize the N=3 planar symmetric joint") {
    PlanarSymmetricFamily fam{3, 0.6};
    JointPovm j = build_planar_symmetric_joint(fam);
    JointPovm m = marginalize(j, {1, 2});
    CHECK(m.n == 2);
    CHECK(m.nonzero_count() == 4);
    CHECK(marginal_error(m, fam.members({1, 2})) < 1e-14);

    // Direct summation over the 8 outcome strings.
    Effect plus_plus;
    for (Outcome x = 0; x < 8; ++x)
        if ((x & 0b11) == 0b11) plus_plus += j.effect(x);
    CHECK(m.effect(0b11).max_abs_diff(plus_plus) < 1e-15);

    CHECK(marginalize(j, {1, 2, 3}) == j);
    CHECK_THROWS_AS(marginalize(j, {2, 1}), std::invalid_argument);
    CHECK_THROWS_AS(marginalize(j, {4}), std::out_of_range);
}

TEST_CASE("N=4 optimal joint marginalized onto {1,3}") {
    double eta = 1.0 / (4 * std::sin(std::numbers::pi / 8));
    JointPovm m = marginalize(build_planar_symmetric_joint({4, eta}), {1, 3});
    // Each of the four outcome pairs collects two of the eight weight-1/4 effects.
    for (Outcome x = 0; x < 4; ++x) CHECK(m.effect(x).alpha == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(marginal_error(m, PlanarSymmetricFamily{4, eta}.members({1, 3})) < 1e-14);
    CHECK(validate_joint(m).ok());
}

TEST_CASE("outcome relabelling") {
    CHECK(relabel_outcomes({0.0, {0.5, 0, 0}}, true) == BinaryQubitPovm{0.0, {-0.5, 0, 0}});
    CHECK(relabel_outcomes({0.2, {0.5, 0, 0}}, false) == BinaryQubitPovm{0.2, {0.5, 0, 0}});

    JointPovm j = build_planar_symmetric_joint({5, 0.5});
    CHECK(relabel_joint(j, std::vector<bool>(5, false)) == j);

    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        std::vector<bool> swaps(5);
        for (int k = 0; k < 5; ++k) swaps[k] = rng() & 1;
        JointPovm r = relabel_joint(j, swaps);
        CHECK(validate_joint(r).ok());
        for (int k = 1; k <= 5; ++k) {
            BinaryQubitPovm got = marginal_povm(r, k), want = relabel_outcomes(marginal_povm(j, k), swaps[k - 1]);
            CHECK(std::abs(got.bias - want.bias) < 1e-14);
            CHECK(got.bloch.max_abs_diff(want.bloch) < 1e-14);
        }
    }
}

TEST_CASE("permute_measurements takes input order[k] to position k") {
    JointPovm j = build_coplanar_same_purity_joint({0.4, 1.1, 2.0}, 0.5);
    JointPovm p = permute_measurements(j, {2, 0, 3, 1});
    CHECK(validate_joint(p).ok());
    CHECK(marginal_povm(p, 1) == marginal_povm(j, 3));
    CHECK(marginal_povm(p, 2) == marginal_povm(j, 1));
    CHECK(marginal_povm(p, 3) == marginal_povm(j, 4));
    CHECK(marginal_povm(p, 4) == marginal_povm(j, 2));
}

TEST_CASE("orthogonal transformations") {
    BinaryQubitPovm p{0.1, {0.3, -0.2, 0.5}};
    CHECK(apply_orthogonal(p, Matrix3::Identity()) == p);

    // Rotating the trine by pi/3 permutes its Bloch lines.
    PlanarSymmetricFamily trine{3, 0.6};
    auto rotated = apply_orthogonal(trine.members(), rotation_z(std::numbers::pi / 3));
    for (const auto& r : rotated) {
        bool on_line = false;
        for (const auto& m : trine.members())
            on_line = on_line || r.bloch.max_abs_diff(m.bloch) < 1e-14 || r.bloch.max_abs_diff(-m.bloch) < 1e-14;
        CHECK(on_line);
    }

    Rng rng(5);
    JointPovm j = build_planar_symmetric_joint({4, 0.6});
    for (int t = 0; t < 50; ++t) {
        Matrix3 o = jm::testing::random_orthogonal(rng);
        JointPovm oj = apply_orthogonal(j, o);
        CHECK(validate_joint(oj).ok());
        for (int k = 1; k <= 4; ++k)
            CHECK(marginal_povm(oj, k).bloch.max_abs_diff(apply(o, marginal_povm(j, k).bloch)) < 1e-14);
    }
    Matrix3 shear = Matrix3::Identity();
    shear(0, 1) = 0.5;
    CHECK_THROWS_AS(apply_orthogonal(p, shear), std::invalid_argument);
}

TEST_CASE("validate_joint reports marginal and completeness errors") {
    JointPovm j = build_planar_symmetric_joint({3, 0.6});
    j.effects[0].alpha += 1e-6;
    CHECK_FALSE(validate_joint(j).ok());
    JointPovm k = build_planar_symmetric_joint({3, 0.6});
    k.effects[1].bloch.x += 1.0;  // no longer PSD
    CHECK_FALSE(validate_joint(k).ok());
}
