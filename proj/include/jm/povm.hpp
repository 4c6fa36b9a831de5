#pragma once

// Bloch-parametrized binary qubit POVMs and joint POVMs.
//
// An effect is stored as (alpha, a) and stands for the 2x2 operator
// (alpha*I + a.sigma)/2. Its eigenvalues are (alpha +- |a|)/2, so positivity
// and the bound E <= I reduce to |a| <= alpha and |a| <= 2 - alpha.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace jm {

inline constexpr double kEpsPsd = 1e-12;
inline constexpr double kEpsMarg = 1e-12;
inline constexpr int kMaxJointN = 20;

struct BlochVector {
    double x = 0.0, y = 0.0, z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
    BlochVector cross(const BlochVector& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
    BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
    BlochVector operator-() const { return {-x, -y, -z}; }
    BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
    BlochVector& operator+=(const BlochVector& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    double max_abs_diff(const BlochVector& o) const {
        return std::max({std::abs(x - o.x), std::abs(y - o.y), std::abs(z - o.z)});
    }
    bool operator==(const BlochVector&) const = default;
};

inline BlochVector operator*(double s, const BlochVector& v) { return v * s; }

// Unit vector in the xy plane at angle phi from the x axis.
inline BlochVector planar(double phi) { return {std::cos(phi), std::sin(phi), 0.0}; }

struct Effect {
    double alpha = 0.0;
    BlochVector bloch;

    double min_eigenvalue() const { return 0.5 * (alpha - bloch.norm()); }
    double max_eigenvalue() const { return 0.5 * (alpha + bloch.norm()); }
    bool is_psd(double eps = kEpsPsd) const { return bloch.norm() <= alpha + eps; }
    bool below_identity(double eps = kEpsPsd) const { return bloch.norm() <= 2.0 - alpha + eps; }

    Effect operator+(const Effect& o) const { return {alpha + o.alpha, bloch + o.bloch}; }
    Effect& operator+=(const Effect& o) {
        alpha += o.alpha;
        bloch += o.bloch;
        return *this;
    }
    Effect operator*(double s) const { return {alpha * s, bloch * s}; }
    double max_abs_diff(const Effect& o) const {
        return std::max(std::abs(alpha - o.alpha), bloch.max_abs_diff(o.bloch));
    }
    bool operator==(const Effect&) const = default;

    // Dense 2x2 form, used only by tests that compare against a generic
    // Hermitian eigensolver.
    Eigen::Matrix2cd to_matrix() const;
};

struct BinaryQubitPovm {
    double bias = 0.0;
    BlochVector bloch;

    static BinaryQubitPovm unbiased(double eta, const BlochVector& n) { return {0.0, n * eta}; }

    Effect effect(int outcome) const {
        return outcome > 0 ? Effect{1.0 + bias, bloch} : Effect{1.0 - bias, -bloch};
    }
    double eta() const { return bloch.norm(); }
    bool is_unbiased(double eps = kEpsPsd) const { return std::abs(bias) <= eps; }
    bool operator==(const BinaryQubitPovm&) const = default;
};

struct Violation {
    std::string what;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

// Outcome strings are bit masks: bit k set means measurement k+1 gave +1.
using Outcome = std::uint32_t;

inline int outcome_sign(Outcome x, int k) { return (x >> k) & 1u ? +1 : -1; }
inline Outcome full_mask(int n) { return n >= 32 ? ~Outcome{0} : (Outcome{1} << n) - 1; }
inline Outcome negate(Outcome x, int n) { return ~x & full_mask(n); }

// Builds the mask of a +-1 sequence given in measurement order.
Outcome outcome_from_signs(const std::vector<int>& signs);

struct JointPovm {
    int n = 0;
    std::map<Outcome, Effect> effects;  // absent keys are zero effects

    Effect effect(Outcome x) const;
    void add(Outcome x, const Effect& e);
    Effect total() const;
    int nonzero_count(double eps = 0.0) const;
    bool operator==(const JointPovm&) const = default;
};

ValidationReport validate_povm(const BinaryQubitPovm& p, double eps = kEpsPsd);
ValidationReport validate_joint(const JointPovm& j, double eps_psd = kEpsPsd,
                                double eps_marg = kEpsMarg);

// keep lists 1-based measurement indices in strictly increasing order.
JointPovm marginalize(const JointPovm& j, const std::vector<int>& keep);

// Single-measurement marginal (k is 1-based).
BinaryQubitPovm marginal_povm(const JointPovm& j, int k);

// Largest component error between the single marginals of j and targets.
double marginal_error(const JointPovm& j, const std::vector<BinaryQubitPovm>& targets);

BinaryQubitPovm relabel_outcomes(const BinaryQubitPovm& p, bool swap);
JointPovm relabel_joint(const JointPovm& j, const std::vector<bool>& swaps);

// Reorders measurements: measurement k of the result is measurement
// order[k] (0-based) of the input.
JointPovm permute_measurements(const JointPovm& j, const std::vector<int>& order);

using Matrix3 = Eigen::Matrix3d;

bool is_orthogonal(const Matrix3& o, double tol = 1e-10);
BlochVector apply(const Matrix3& o, const BlochVector& v);
BinaryQubitPovm apply_orthogonal(const BinaryQubitPovm& p, const Matrix3& o);
std::vector<BinaryQubitPovm> apply_orthogonal(const std::vector<BinaryQubitPovm>& ps, const Matrix3& o);
JointPovm apply_orthogonal(const JointPovm& j, const Matrix3& o);

Matrix3 rotation_z(double angle);

}  // namespace jm
