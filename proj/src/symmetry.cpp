#include "jm/symmetry.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace jm {

namespace {

int mod(int a, int m) { return ((a % m) + m) % m; }

void check_n(int n) {
    if (n < 1) throw std::invalid_argument("symmetry: N must be positive");
}

}  // namespace

std::vector<SymmetryElement> group_elements(int n) {
    check_n(n);
    std::vector<SymmetryElement> out;
    for (int r = 0; r < n; ++r) out.push_back({r, false});
    if (n > 2)
        for (int r = 0; r < n; ++r) out.push_back({r, true});
    return out;
}

SymmetryElement compose(const SymmetryElement& g, const SymmetryElement& h, int n) {
    check_n(n);
    // On line angles (in units of pi/N): rotation m -> m + r, reflection m -> r - m.
    int r = g.reflection ? g.rotation_steps - h.rotation_steps : g.rotation_steps + h.rotation_steps;
    return {mod(r, n), g.reflection != h.reflection};
}

SymmetryElement inverse(const SymmetryElement& g, int n) {
    check_n(n);
    if (g.reflection) return g;
    return {mod(-g.rotation_steps, n), false};
}

Matrix3 to_matrix(const SymmetryElement& g, int n) {
    check_n(n);
    Matrix3 m = rotation_z(g.rotation_steps * std::numbers::pi / n);
    if (g.reflection) m = m * Eigen::Vector3d(1.0, -1.0, 1.0).asDiagonal();
    return m;
}

std::string element_name(const SymmetryElement& g, int n) {
    int r = g.rotation_steps;
    if (!g.reflection) {
        if (r == 0) return "id";
        std::string base = "C" + std::to_string(2 * n);
        return r == 1 ? base : base + "^" + std::to_string(r);
    }
    if (r == 0) return "sx";
    // axis angle r*pi/(2N), reduced
    int num = r, den = 2 * n;
    int gcd = std::gcd(num, den);
    num /= gcd;
    den /= gcd;
    return "s" + (num == 1 ? std::string() : std::to_string(num)) + "pi/" + std::to_string(den);
}

IndexAction act_on_indices(const SymmetryElement& g, const std::vector<int>& subset, int n) {
    check_n(n);
    IndexAction act;
    for (int k : subset) {
        if (k < 1 || k > n) throw std::out_of_range("act_on_indices: index out of range");
        // +1 Bloch vector of E_k sits at angle (k-1)*pi/N; track it in units of pi/N mod 2N.
        int m = g.reflection ? g.rotation_steps - (k - 1) : g.rotation_steps + (k - 1);
        m = mod(m, 2 * n);
        bool flip = m >= n;
        act.image.push_back((flip ? m - n : m) + 1);
        act.flips.push_back(flip);
    }
    return act;
}

std::optional<SymmetryElement> are_equivalent(const std::vector<int>& a, const std::vector<int>& b, int n) {
    if (a.size() != b.size()) throw std::invalid_argument("are_equivalent: cardinalities differ");
    std::vector<int> target = b;
    std::sort(target.begin(), target.end());
    for (const auto& g : group_elements(n)) {
        auto img = act_on_indices(g, a, n).image;
        std::sort(img.begin(), img.end());
        if (img == target) return g;
    }
    return std::nullopt;
}

std::pair<std::vector<int>, JointPovm> transport_joint(const SymmetryElement& g, const std::vector<int>& subset,
                                                       const JointPovm& joint, int n) {
    if (int(subset.size()) != joint.n) throw std::invalid_argument("transport_joint: size mismatch");
    IndexAction act = act_on_indices(g, subset, n);
    JointPovm moved = relabel_joint(apply_orthogonal(joint, to_matrix(g, n)), act.flips);

    std::vector<int> order(subset.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return act.image[i] < act.image[j]; });
    std::vector<int> sorted_image;
    for (int i : order) sorted_image.push_back(act.image[i]);
    return {sorted_image, permute_measurements(moved, order)};
}

}  // namespace jm
