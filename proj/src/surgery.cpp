#include "jm/surgery.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace jm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundSlack = 1e-12;

void check_family(int n, double eta) {
    if (n < 1 || n > kMaxJointN) throw std::invalid_argument("planar symmetric family: N out of range");
    if (!(eta >= 0.0) || eta > 1.0) throw std::invalid_argument("planar symmetric family: eta must lie in [0, 1]");
}

[[noreturn]] void bound_violated(const char* who, double eta, double bound) {
    std::ostringstream os;
    os.precision(17);
    os << who << ": eta " << eta << " exceeds the bound " << bound;
    throw std::domain_error(os.str());
}

// Path construction for unbiased coplanar POVMs of purity eta whose +1 Bloch
// vectors sit at strictly increasing angles theta[0] < ... < theta[M-1] with
// total span below pi. Run p carries the pair (theta[p], theta[p+1]); the
// all-equal outcomes carry the bisector of the first and last direction.
JointPovm path_joint(const std::vector<double>& theta, double eta) {
    int m = int(theta.size());
    JointPovm j;
    j.n = m;
    Outcome full = full_mask(m);
    if (m == 1) {
        BlochVector a = planar(theta[0]) * eta;
        j.effects[1] = {1.0, a};
        j.effects[0] = {1.0, -a};
        return j;
    }
    double run_weight = 0.0;
    for (int p = 0; p + 1 < m; ++p) {
        double w = eta * std::sin((theta[p + 1] - theta[p]) / 2);
        double mid = (theta[p] + theta[p + 1]) / 2;
        BlochVector t{std::sin(mid), -std::cos(mid), 0.0};
        Outcome run = (Outcome{1} << (p + 1)) - 1;
        j.effects[run] = {w, t * w};
        j.effects[full ^ run] = {w, t * -w};
        run_weight += w;
    }
    double span = theta[m - 1] - theta[0];
    double mid = (theta[0] + theta[m - 1]) / 2;
    BlochVector s = planar(mid) * (eta * std::cos(span / 2));
    j.effects[full] = {1.0 - run_weight, s};
    j.effects[0] = {1.0 - run_weight, -s};
    return j;
}

}  // namespace

BlochVector PlanarSymmetricFamily::direction(int k) const {
    if (k < 1 || k > n) throw std::out_of_range("planar symmetric family: member index out of range");
    return planar((k - 1) * kPi / n);
}

BinaryQubitPovm PlanarSymmetricFamily::member(int k) const { return BinaryQubitPovm::unbiased(eta, direction(k)); }

std::vector<BinaryQubitPovm> PlanarSymmetricFamily::members() const {
    std::vector<BinaryQubitPovm> out;
    for (int k = 1; k <= n; ++k) out.push_back(member(k));
    return out;
}

std::vector<BinaryQubitPovm> PlanarSymmetricFamily::members(const std::vector<int>& subset) const {
    std::vector<BinaryQubitPovm> out;
    for (int k : subset) out.push_back(member(k));
    return out;
}

JointPovm build_planar_symmetric_joint(const PlanarSymmetricFamily& fam) {
    check_family(fam.n, fam.eta);
    int n = fam.n;
    double bound = planar_symmetric_bound(n);
    if (fam.eta > bound + kBoundSlack) bound_violated("build_planar_symmetric_joint", fam.eta, bound);

    double mu = fam.eta * n * std::sin(kPi / (2 * n));
    // The 2N directions e bisect successive lines; for odd N they coincide with +-n_k.
    double offset = n % 2 ? 0.0 : kPi / (2 * n);
    JointPovm j;
    j.n = n;
    for (int m = 0; m < 2 * n; ++m) {
        BlochVector e = planar(offset + m * kPi / n);
        Outcome x = 0;
        for (int k = 1; k <= n; ++k)
            if (fam.direction(k).dot(e) > 0.0) x |= Outcome{1} << (k - 1);
        j.effects[x] = {1.0 / n, e * (mu / n)};
    }
    return j;
}

JointPovm surgery_pair(int n, int k1, int k2, double eta) {
    check_family(n, eta);
    if (k1 < 1 || k2 > n) throw std::out_of_range("surgery_pair: index out of range");
    if (k1 >= k2) throw std::invalid_argument("surgery_pair: requires k1 < k2");
    double half = (k2 - k1) * kPi / (2 * n);
    double bound = 1.0 / (std::sin(half) + std::cos(half));
    if (eta > bound + kBoundSlack) bound_violated("surgery_pair", eta, bound);

    double theta = (k1 + k2 - 2) * kPi / (2 * n);
    BlochVector s = planar(theta);
    BlochVector t{std::sin(theta), -std::cos(theta), 0.0};
    double ws = eta * std::sin(half), wc = eta * std::cos(half);
    JointPovm j;
    j.n = 2;
    j.effects[0b11] = {1.0 - ws, s * wc};
    j.effects[0b00] = {1.0 - ws, s * -wc};
    j.effects[0b01] = {ws, t * ws};
    j.effects[0b10] = {ws, t * -ws};
    return j;
}

JointPovm surgery_mtuple(int n, const std::vector<int>& subset, double eta) {
    check_family(n, eta);
    double bound = planar_subset_bound(n, subset);  // validates the subset
    if (eta > bound + kBoundSlack) bound_violated("surgery_mtuple", eta, bound);
    std::vector<double> theta;
    for (int k : subset) theta.push_back((k - 1) * kPi / n);
    return path_joint(theta, eta);
}

JointPovm build_coplanar_same_purity_joint(const std::vector<double>& angles, double eta) {
    if (!(eta >= 0.0) || eta > 1.0) throw std::invalid_argument("coplanar joint: eta must lie in [0, 1]");
    if (int(angles.size()) + 1 > kMaxJointN) throw std::invalid_argument("coplanar joint: too many POVMs");
    double bound = coplanar_same_purity_bound(angles);  // validates the angles
    if (eta > bound + kBoundSlack) bound_violated("build_coplanar_same_purity_joint", eta, bound);
    std::vector<double> theta{0.0};
    theta.insert(theta.end(), angles.begin(), angles.end());
    return path_joint(theta, eta);
}

JointPovm build_general_binary_path_joint(const std::vector<BinaryQubitPovm>& povms) {
    int n = int(povms.size());
    if (n < 1 || n > kMaxJointN) throw std::invalid_argument("general binary joint: N out of range");
    for (int p = 0; p + 1 < n; ++p)
        if (povms[p + 1].bias < povms[p].bias - kTieTol)
            throw std::invalid_argument("general binary joint: biases must be non-decreasing along the input");

    double max_b = 0.0;
    for (const auto& q : povms) max_b = std::max(max_b, std::abs(q.bias));
    double lhs = path_length(povms), rhs = 2.0 * (1.0 - max_b);
    if (lhs > rhs + kBoundSlack) {
        std::ostringstream os;
        os.precision(17);
        os << "general binary joint: path sum " << lhs << " exceeds " << rhs << " (deficit " << lhs - rhs << ")";
        throw std::domain_error(os.str());
    }

    // Operators are c*I + v.sigma; stored as Effect{2c, 2v}.
    Outcome full = full_mask(n);
    double t_sum = 0.0;
    JointPovm j;
    j.n = n;
    for (int p = 0; p + 1 < n; ++p) {
        BlochVector t = (povms[p].bloch - povms[p + 1].bloch) * 0.25;
        double tn = t.norm();
        double gamma = tn + 0.5 * (povms[p + 1].bias - povms[p].bias);
        Outcome run = (Outcome{1} << (p + 1)) - 1;
        j.effects[run] = {2.0 * tn, t * 2.0};
        j.effects[full ^ run] = {2.0 * gamma, t * -2.0};
        t_sum += tn;
    }
    BlochVector s = (povms.front().bloch + povms.back().bloch) * 0.25;
    double beta = 0.5 * (1.0 + povms.front().bias) - t_sum;
    double delta = 0.5 * (1.0 - povms.back().bias) - t_sum;
    j.effects[full] = {2.0 * beta, s * 2.0};
    j.effects[0] += Effect{2.0 * delta, s * -2.0};  // for N = 1 this shares no key with the runs
    return j;
}

GeneralBinaryJoint build_general_binary_joint(const std::vector<BinaryQubitPovm>& povms, const PathLabelling& lab) {
    int n = int(povms.size());
    if (int(lab.flips.size()) != n || int(lab.order.size()) != n)
        throw std::invalid_argument("general binary joint: labelling size mismatch");
    std::vector<BinaryQubitPovm> path;
    std::vector<bool> path_flips;
    std::vector<int> position(n, -1);
    for (int q = 0; q < n; ++q) {
        int k = lab.order[q];
        if (k < 0 || k >= n || position[k] >= 0) throw std::invalid_argument("general binary joint: order is not a permutation");
        position[k] = q;
        path.push_back(relabel_outcomes(povms[k], lab.flips[k]));
        path_flips.push_back(lab.flips[k]);
    }
    JointPovm j = relabel_joint(build_general_binary_path_joint(path), path_flips);
    return {permute_measurements(j, position), lab};
}

GeneralBinaryJoint build_general_binary_joint(const std::vector<BinaryQubitPovm>& povms) {
    return build_general_binary_joint(povms, general_binary_sufficient(povms).labelling);
}

}  // namespace jm
