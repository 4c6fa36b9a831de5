#include <doctest.h>

#include "jm/criteria.hpp"
#include "jm/surgery.hpp"

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace jm;
using jm::testing::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> iota1(int n) {
    std::vector<int> v(n);
    for (int k = 0; k < n; ++k) v[k] = k + 1;
    return v;
}

double max_min_eigenvalue(const JointPovm& j) {
    double worst = 0.0;
    for (const auto& [x, e] : j.effects) worst = std::max(worst, e.min_eigenvalue());
    return worst;
}

// Nonzero effects as a sorted list, for comparisons up to outcome labels.
std::vector<std::array<double, 4>> effect_list(const JointPovm& j) {
    std::vector<std::array<double, 4>> out;
    for (const auto& [x, e] : j.effects)
        if (e.alpha > 1e-14) out.push_back({e.alpha, e.bloch.x, e.bloch.y, e.bloch.z});
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("optimal joint of the planar symmetric family") {
    JointPovm j = build_planar_symmetric_joint({3, 2.0 / 3});
    CHECK(j.nonzero_count() == 6);
    CHECK(validate_joint(j).ok());
    PlanarSymmetricFamily unit{3, 1.0};
    for (const auto& [x, e] : j.effects) {
        CHECK(std::abs(e.min_eigenvalue()) < 1e-15);
        bool on_member = false;
        for (int k = 1; k <= 3; ++k) {
            BlochVector d = e.bloch * (1 / e.bloch.norm());
            on_member = on_member || d.max_abs_diff(unit.direction(k)) < 1e-14 || d.max_abs_diff(-unit.direction(k)) < 1e-14;
        }
        CHECK(on_member);
    }

    // N=4: the direction next to +x (at pi/8) carries outcome (+,+,+,-).
    JointPovm four = build_planar_symmetric_joint({4, 0.6});
    Outcome x = outcome_from_signs({+1, +1, +1, -1});
    CHECK(x == 0b0111u);
    BlochVector d = four.effect(x).bloch;
    CHECK(std::atan2(d.y, d.x) == doctest::Approx(kPi / 8).epsilon(1e-14));

    // N=6: nonzero outcomes are the cyclic runs.
    JointPovm six = build_planar_symmetric_joint({6, 0.5});
    std::set<Outcome> runs, got;
    for (int p = 0; p < 6; ++p) {
        Outcome r = (Outcome{1} << p) - 1;
        runs.insert(r);
        runs.insert(full_mask(6) ^ r);
    }
    for (const auto& [o, e] : six.effects)
        if (e.alpha > 0) got.insert(o);
    CHECK(runs.size() == 12);
    CHECK(got == runs);

    for (int n = 1; n <= 12; ++n) {
        double b = planar_symmetric_bound(n);
        JointPovm at = build_planar_symmetric_joint({n, b});
        CHECK(validate_joint(at).ok());
        CHECK(marginal_error(at, PlanarSymmetricFamily{n, b}.members()) < 1e-12);
        CHECK(max_min_eigenvalue(at) < 1e-9);
        if (b + 1e-9 <= 1.0) CHECK_THROWS_AS(build_planar_symmetric_joint({n, b + 1e-9}), std::domain_error);
    }
}

TEST_CASE("surgery_pair") {
    double b = 1 / (std::sin(kPi / 8) + std::cos(kPi / 8));
    CHECK(b == doctest::Approx(0.76537).epsilon(1e-5));
    JointPovm j = surgery_pair(4, 1, 2, b);
    CHECK(validate_joint(j).ok());
    for (const auto& [x, e] : j.effects) {
        CHECK(std::abs(e.to_matrix().determinant()) < 1e-10);
    }

    // s bisects n_1 and n_k; t is orthogonal to s with t.n_1 > 0.
    for (int k = 2; k <= 6; ++k) {
        double eta = 0.5;
        JointPovm p = surgery_pair(6, 1, k, eta);
        BlochVector s = p.effect(0b11).bloch, t = p.effect(0b01).bloch;
        BlochVector bis = planar((k - 1) * kPi / 12);
        CHECK((s * (1 / s.norm())).max_abs_diff(bis) < 1e-14);
        CHECK(std::abs(s.dot(t)) < 1e-15);
        CHECK(t.dot(planar(0)) > 0);
        CHECK(marginal_error(p, PlanarSymmetricFamily{6, eta}.members({1, k})) < 1e-15);
    }

    // Small eta: effects tend to multiples of the identity.
    JointPovm tiny = surgery_pair(5, 2, 4, 1e-9);
    for (const auto& [x, e] : tiny.effects) CHECK(e.bloch.norm() < 1e-8);

    CHECK_THROWS_AS(surgery_pair(4, 1, 2, b + 1e-9), std::domain_error);
    CHECK_THROWS_AS(surgery_pair(4, 2, 1, 0.5), std::invalid_argument);
}

TEST_CASE("surgery_mtuple") {
    for (int n = 3; n <= 8; ++n)
        for (int a = 1; a <= n; ++a)
            for (int c = a + 1; c <= n; ++c) {
                double eta = 0.9 * planar_subset_bound(n, {a, c});
                JointPovm m = surgery_mtuple(n, {a, c}, eta), p = surgery_pair(n, a, c, eta);
                for (Outcome x = 0; x < 4; ++x) CHECK(m.effect(x).max_abs_diff(p.effect(x)) < 1e-14);
            }

    for (int n = 2; n <= 9; ++n) {
        double eta = planar_symmetric_bound(n);
        JointPovm m = surgery_mtuple(n, iota1(n), eta);
        CHECK(marginal_error(m, PlanarSymmetricFamily{n, eta}.members()) < 1e-12);
    }

    double b = 1 / (3 * std::sin(kPi / 10) + std::sin(kPi / 5));
    JointPovm m = surgery_mtuple(5, {1, 2, 3, 4}, b);
    CHECK(validate_joint(m).ok());
    CHECK(marginal_error(m, PlanarSymmetricFamily{5, b}.members({1, 2, 3, 4})) < 1e-12);
    CHECK(max_min_eigenvalue(m) < 1e-9);
    CHECK(m.nonzero_count() == 8);
}

TEST_CASE("coplanar same-purity joint") {
    for (int n = 2; n <= 8; ++n) {
        std::vector<double> angles;
        for (int k = 1; k < n; ++k) angles.push_back(k * kPi / n);
        double eta = 0.95 * planar_symmetric_bound(n);
        JointPovm c = build_coplanar_same_purity_joint(angles, eta), m = surgery_mtuple(n, iota1(n), eta);
        for (Outcome x = 0; x <= full_mask(n); ++x) CHECK(c.effect(x).max_abs_diff(m.effect(x)) < 1e-14);
    }

    JointPovm pair = build_coplanar_same_purity_joint({2 * kPi / 5}, 0.7);
    JointPovm ref = surgery_pair(5, 1, 3, 0.7);
    for (Outcome x = 0; x < 4; ++x) CHECK(pair.effect(x).max_abs_diff(ref.effect(x)) < 1e-14);

    CHECK(validate_joint(build_coplanar_same_purity_joint({kPi / 3, 2 * kPi / 3}, 2.0 / 3)).ok());
    CHECK_THROWS_AS(build_coplanar_same_purity_joint({kPi / 3, 2 * kPi / 3}, 2.0 / 3 + 1e-6), std::domain_error);

    Rng rng(19);
    std::uniform_real_distribution<double> u(0.0, kPi);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a;
        int n = 2 + int(rng() % 6);
        for (int k = 1; k < n; ++k) a.push_back(u(rng));
        std::sort(a.begin(), a.end());
        double eta = coplanar_same_purity_bound(a);
        JointPovm j = build_coplanar_same_purity_joint(a, eta);
        std::vector<BinaryQubitPovm> target{BinaryQubitPovm::unbiased(eta, planar(0))};
        for (double x : a) target.push_back(BinaryQubitPovm::unbiased(eta, planar(x)));
        CHECK(validate_joint(j).ok());
        CHECK(marginal_error(j, target) < 1e-12);
        CHECK(max_min_eigenvalue(j) < 1e-9);
    }
}

TEST_CASE("general binary joint") {
    // Unbiased coplanar same-purity inputs reproduce the coplanar construction.
    std::vector<double> a{0.5, 1.3, 2.4};
    double eta = coplanar_same_purity_bound(a);
    std::vector<BinaryQubitPovm> ps{BinaryQubitPovm::unbiased(eta, planar(0))};
    for (double x : a) ps.push_back(BinaryQubitPovm::unbiased(eta, planar(x)));
    auto lists_close = [](const auto& l, const auto& r) {
        if (l.size() != r.size()) return false;
        for (size_t i = 0; i < l.size(); ++i)
            for (int c = 0; c < 4; ++c)
                if (std::abs(l[i][c] - r[i][c]) > 1e-12) return false;
        return true;
    };
    CHECK(lists_close(effect_list(build_general_binary_path_joint(ps)),
                      effect_list(build_coplanar_same_purity_joint(a, eta))));

    BinaryQubitPovm single{0.2, {0.3, 0.1, -0.4}};
    JointPovm one = build_general_binary_path_joint({single});
    CHECK(one.effect(1) == single.effect(+1));
    CHECK(one.effect(0).max_abs_diff(single.effect(-1)) < 1e-15);

    std::vector<BinaryQubitPovm> mixed{{0.1, {0.2, 0.1, 0}}, {0.3, {-0.1, 0.2, 0.05}}};
    JointPovm mj = build_general_binary_path_joint(mixed);
    CHECK(validate_joint(mj).ok());
    CHECK(marginal_error(mj, mixed) < 1e-15);
    double alpha_p = mj.effect(0b01).alpha / 2, gamma_p = mj.effect(0b10).alpha / 2;
    CHECK(gamma_p - alpha_p == doctest::Approx((0.3 - 0.1) / 2).epsilon(1e-15));

    CHECK_THROWS_AS(build_general_binary_path_joint({mixed[1], mixed[0]}), std::invalid_argument);
    std::vector<BinaryQubitPovm> far{BinaryQubitPovm::unbiased(0.9, planar(0)), BinaryQubitPovm::unbiased(0.9, planar(1.5))};
    CHECK_THROWS_AS(build_general_binary_path_joint(far), std::domain_error);
}

TEST_CASE("general binary joint maps back to the caller's labels") {
    Rng rng(23);
    int built = 0;
    for (int t = 0; t < 2000 && built < 300; ++t) {
        auto ps = jm::testing::random_povms(rng, 1 + int(rng() % 5));
        for (auto& p : ps) p.bloch = p.bloch * 0.4;
        PathVerdict best = general_binary_best_ordering(ps);
        if (!compatible(best.verdict)) continue;
        ++built;
        GeneralBinaryJoint g = build_general_binary_joint(ps, best.labelling);
        CHECK(validate_joint(g.joint).ok());
        CHECK(marginal_error(g.joint, ps) < 1e-12);
    }
    CHECK(built >= 200);
}
