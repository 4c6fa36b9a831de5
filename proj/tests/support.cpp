#include "support.hpp"

#include "jm/criteria.hpp"
#include "jm/surgery.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace jm::testing {

namespace {

constexpr double kPi = std::numbers::pi;

bool odd(int n) { return n % 2 != 0; }

}  // namespace

BlochVector random_unit(Rng& rng) {
    std::normal_distribution<double> g;
    BlochVector v{g(rng), g(rng), g(rng)};
    return v * (1.0 / v.norm());
}

Matrix3 random_orthogonal(Rng& rng) {
    std::normal_distribution<double> g;
    Matrix3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = g(rng);
    Eigen::HouseholderQR<Matrix3> qr(m);
    Matrix3 q = qr.householderQ();
    // Random sign on one column so reflections show up as often as rotations.
    if (std::uniform_int_distribution<int>(0, 1)(rng)) q.col(0) *= -1.0;
    return q;
}

BinaryQubitPovm random_povm(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double eta = u(rng);
    double bias = u(rng) < 0.35 ? 0.0 : (2 * u(rng) - 1) * (1 - eta);
    return {bias, random_unit(rng) * eta};
}

std::vector<BinaryQubitPovm> random_povms(Rng& rng, int n) {
    std::vector<BinaryQubitPovm> out;
    for (int k = 0; k < n; ++k) out.push_back(random_povm(rng));
    return out;
}

double trig_sum_identity_error(int n_lo, int n_hi) {
    double worst = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
        double h = kPi / (2 * n);
        for (int p = 1; p < n; ++p) {
            double sin_sum = 0.0, cos_sum = 0.0;
            if (odd(n)) {
                for (int i = p + (3 - n) / 2; i <= (n + 1) / 2; ++i) {
                    sin_sum += std::sin((i - 1) * kPi / n);
                    cos_sum += std::cos((i - 1) * kPi / n);
                }
            } else {
                for (int i = p + 1 - n / 2; i <= n / 2; ++i) {
                    sin_sum += std::sin((2 * i - 1) * h);
                    cos_sum += std::cos((2 * i - 1) * h);
                }
            }
            double sin_closed = std::sin(p * kPi / n) / (2 * std::sin(h));
            double cos_closed = std::pow(std::cos(p * h), 2) / std::sin(h);
            worst = std::max({worst, std::abs(sin_sum - sin_closed), std::abs(cos_sum - cos_closed)});
        }
    }
    return worst;
}

BlochVector polygon_vertex(int n, int i) {
    return odd(n) ? planar((i - 1) * kPi / n) : planar((2 * i - 1) * kPi / (2 * n));
}

namespace {

BlochVector member(int n, int k) { return planar((k - 1) * kPi / n); }

std::string compare(const std::set<int>& found, int lo, int hi, const std::string& where) {
    std::set<int> expected;
    for (int i = lo; i <= hi; ++i) expected.insert(i);
    if (found == expected) return {};
    std::ostringstream os;
    os << where << ": closed form [" << lo << ", " << hi << "], enumeration {";
    for (int i : found) os << ' ' << i;
    os << " }";
    return os.str();
}

}  // namespace

std::string check_first_k_bounds(int n) {
    for (int k = 1; k <= n; ++k) {
        int p = k - 1;
        std::set<int> found;
        for (int i = -n + 1; i <= n; ++i) {
            BlochVector v = polygon_vertex(n, i);
            bool all_plus = true;
            for (int j = 1; j <= k; ++j) all_plus = all_plus && member(n, j).dot(v) > 0;
            if (all_plus) found.insert(i);
        }
        int lo = int(std::ceil(p + 1 - n / 2.0)), hi = (n + 1) / 2;
        auto err = compare(found, lo, hi, "N=" + std::to_string(n) + " k=" + std::to_string(k));
        if (!err.empty()) return err;
    }
    return {};
}

std::string check_run_bounds(int n) {
    for (int a = 1; a <= n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
            std::set<int> found;
            for (int i = -n + 1; i <= n; ++i) {
                BlochVector v = polygon_vertex(n, i);
                if (member(n, 1).dot(v) > 0 && member(n, a).dot(v) > 0 && member(n, b).dot(v) < 0 &&
                    member(n, n).dot(v) < 0)
                    found.insert(i);
            }
            int lo = odd(n) ? a - (n - 1) / 2 : a - n / 2;
            int hi = odd(n) ? b - (n + 1) / 2 : b - (n + 2) / 2;
            auto err = compare(found, lo, hi,
                               "N=" + std::to_string(n) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
            if (!err.empty()) return err;
        }
    }
    return {};
}

double first_k_joint_sum_error(int n) {
    double eta = planar_symmetric_bound(n);
    JointPovm j = build_planar_symmetric_joint({n, eta});
    double mu = eta * n * std::sin(kPi / (2 * n));
    double h = kPi / (2 * n), worst = 0.0;
    for (int k = 1; k <= n; ++k) {
        int p = k - 1;
        Outcome need = full_mask(k);
        BlochVector sum;
        for (const auto& [x, e] : j.effects)
            if ((x & need) == need) sum += e.bloch * (n / mu);
        // Unit-vector sum of the vertices in the first-k-positive interval.
        BlochVector closed{std::pow(std::cos(p * h), 2) / std::sin(h), std::sin(p * kPi / n) / (2 * std::sin(h)), 0};
        worst = std::max(worst, sum.max_abs_diff(closed));
    }
    return worst;
}

const std::array<const char*, 8> kS4Header = {"id", "C8", "C8^2", "C8^3", "sx", "spi/8", "spi/4", "s3pi/8"};

const std::array<std::array<const char*, 8>, 8> kS4Table = {{
    {"id", "C8", "C8^2", "C8^3", "sx", "spi/8", "spi/4", "s3pi/8"},
    {"C8", "C8^2", "C8^3", "id", "spi/8", "spi/4", "s3pi/8", "sx"},
    {"C8^2", "C8^3", "id", "C8", "spi/4", "s3pi/8", "sx", "spi/8"},
    {"C8^3", "id", "C8", "C8^2", "s3pi/8", "sx", "spi/8", "spi/4"},
    {"sx", "s3pi/8", "spi/4", "spi/8", "id", "C8^3", "C8^2", "C8"},
    {"spi/8", "sx", "s3pi/8", "spi/4", "C8", "id", "C8^3", "C8^2"},
    {"spi/4", "spi/8", "sx", "s3pi/8", "C8^2", "C8", "id", "C8^3"},
    {"s3pi/8", "spi/4", "spi/8", "sx", "C8^3", "C8^2", "C8", "id"},
}};

}  // namespace jm::testing
