#include "jm/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace jm {

namespace {

constexpr double kPi = std::numbers::pi;

Verdict iff(double margin, std::string name) {
    return {margin >= -kTieTol ? Decision::Compatible : Decision::Incompatible, Strength::Iff, margin,
            std::move(name)};
}

Verdict sufficient(double margin, std::string name) {
    return {margin >= -kTieTol ? Decision::Compatible : Decision::Unknown, Strength::SufficientOnly, margin,
            std::move(name)};
}

Verdict necessary(double margin, std::string name) {
    return {margin >= -kTieTol ? Decision::Unknown : Decision::Incompatible, Strength::NecessaryOnly, margin,
            std::move(name)};
}

double sq(double x) { return x * x; }

void require_unit(const BlochVector& n, const char* who) {
    if (std::abs(n.norm() - 1.0) > 1e-9) throw std::invalid_argument(std::string(who) + ": direction is not a unit vector");
}

}  // namespace

std::string to_string(Decision d) {
    switch (d) {
        case Decision::Compatible: return "compatible";
        case Decision::Incompatible: return "incompatible";
        default: return "unknown";
    }
}

std::string to_string(Strength s) {
    switch (s) {
        case Strength::Iff: return "iff";
        case Strength::NecessaryOnly: return "necessary";
        default: return "sufficient";
    }
}

bool compatible(const Verdict& v) { return v.decision == Decision::Compatible; }
bool incompatible(const Verdict& v) { return v.decision == Decision::Incompatible; }

// ---------------------------------------------------------------------------

Verdict pair_general(const BinaryQubitPovm& p1, const BinaryQubitPovm& p2) {
    auto f_and_ratio = [](const BinaryQubitPovm& p) {
        double alpha = 1.0 + p.bias, a = p.bloch.norm();
        double f = 0.5 * (std::sqrt(std::max(0.0, alpha * alpha - a * a)) +
                          std::sqrt(std::max(0.0, sq(2.0 - alpha) - a * a)));
        // F vanishes only for an unbiased projective measurement, where the
        // numerator (alpha-1)^2 is exactly zero; the ratio's limit is 0.
        double ratio = f > 0.0 ? sq(alpha - 1.0) / (f * f) : 0.0;
        return std::pair{f, ratio};
    };
    auto [f1, r1] = f_and_ratio(p1);
    auto [f2, r2] = f_and_ratio(p2);
    double lhs = (1.0 - f1 * f1 - f2 * f2) * (1.0 - r1 - r2);
    double rhs = sq(p1.bloch.dot(p2.bloch) - p1.bias * p2.bias);
    return iff(rhs - lhs, "pair_general");
}

Verdict pair_unbiased(double eta1, const BlochVector& n1, double eta2, const BlochVector& n2) {
    require_unit(n1, "pair_unbiased");
    require_unit(n2, "pair_unbiased");
    BlochVector a1 = n1 * eta1, a2 = n2 * eta2;
    return iff(2.0 - (a1 + a2).norm() - (a1 - a2).norm(), "pair_unbiased");
}

double pair_same_purity_bound(double phi) {
    return 1.0 / (std::abs(std::sin(phi / 2)) + std::abs(std::cos(phi / 2)));
}

// ---------------------------------------------------------------------------

namespace {

double weighted_distance(const std::vector<BlochVector>& p, const std::vector<double>& w, const BlochVector& y) {
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) s += w[i] * (p[i] - y).norm();
    return s;
}

// Intersection of the two diagonals when the four coplanar points are in
// convex position; empty when no pairing of segments crosses.
std::optional<BlochVector> diagonal_intersection(const std::array<BlochVector, 4>& v) {
    const int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    for (const auto& pr : pairings) {
        BlochVector a = v[pr[0]], b = v[pr[1]], c = v[pr[2]], d = v[pr[3]];
        BlochVector d1 = b - a, d2 = d - c, r = c - a;
        double g11 = d1.dot(d1), g12 = -d1.dot(d2), g22 = d2.dot(d2);
        double h1 = d1.dot(r), h2 = -d2.dot(r);
        double det = g11 * g22 - g12 * g12;
        if (std::abs(det) <= 1e-14 * std::max(1.0, g11 * g22)) continue;
        double s = (h1 * g22 - g12 * h2) / det;
        double t = (g11 * h2 - g12 * h1) / det;
        BlochVector p = a + d1 * s, q = c + d2 * t;
        if ((p - q).norm() > 1e-10 * (1.0 + d1.norm() + d2.norm())) continue;
        if (s < -1e-12 || s > 1 + 1e-12 || t < -1e-12 || t > 1 + 1e-12) continue;
        return p;
    }
    return std::nullopt;
}

}  // namespace

FtResult fermat_torricelli(const std::array<BlochVector, 4>& pts, int max_iter) {
    double scale = 1.0;
    for (const auto& p : pts) scale = std::max(scale, p.norm());

    // Merge coincident points into weighted anchors.
    std::vector<BlochVector> p;
    std::vector<double> w;
    for (const auto& q : pts) {
        bool merged = false;
        for (size_t i = 0; i < p.size(); ++i)
            if ((p[i] - q).norm() <= 1e-14 * scale) {
                w[i] += 1.0;
                merged = true;
                break;
            }
        if (!merged) {
            p.push_back(q);
            w.push_back(1.0);
        }
    }

    FtResult res;
    // An anchor is optimal iff the pull of the other points does not exceed its weight.
    for (size_t j = 0; j < p.size(); ++j) {
        BlochVector pull;
        for (size_t i = 0; i < p.size(); ++i)
            if (i != j) {
                BlochVector d = p[i] - p[j];
                pull += d * (w[i] / d.norm());
            }
        if (pull.norm() <= w[j] + 1e-12) {
            res.point = p[j];
            res.distance_sum = weighted_distance(p, w, p[j]);
            res.converged = true;
            res.method = "anchor";
            return res;
        }
    }

    // Weiszfeld from the weighted centroid.
    BlochVector y;
    double wsum = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        y += p[i] * w[i];
        wsum += w[i];
    }
    y = y * (1.0 / wsum);
    double grad = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < max_iter; ++it) {
        BlochVector num, g;
        double den = 0.0;
        bool on_anchor = false;
        for (size_t i = 0; i < p.size(); ++i) {
            BlochVector d = p[i] - y;
            double dn = d.norm();
            if (dn <= 1e-12 * scale) {
                on_anchor = true;
                continue;
            }
            num += p[i] * (w[i] / dn);
            den += w[i] / dn;
            g += d * (w[i] / dn);
        }
        if (on_anchor) {
            // The anchor test above ruled this point out; step off along the descent direction.
            y += g * (1e-8 * scale / std::max(g.norm(), 1e-300));
            continue;
        }
        grad = g.norm();
        if (grad <= 1e-13 * wsum) break;
        BlochVector next = num * (1.0 / den);
        double step = (next - y).norm();
        y = next;
        if (step <= 1e-16 * scale) break;
    }
    res.point = y;
    res.distance_sum = weighted_distance(p, w, y);
    res.iterations = it;
    res.converged = grad <= 1e-6 * wsum;
    res.method = "weiszfeld";

    if (p.size() == 4) {
        BlochVector e1 = pts[1] - pts[0], e2 = pts[2] - pts[0], e3 = pts[3] - pts[0];
        bool coplanar = std::abs(e1.dot(e2.cross(e3))) <= 1e-12 * scale * scale * scale;
        if (coplanar)
            if (auto diag = diagonal_intersection(pts)) {
                double f = weighted_distance(p, w, *diag);
                if (f <= res.distance_sum + 1e-9) {
                    res.point = *diag;
                    res.distance_sum = f;
                    res.converged = true;
                    res.method = "diagonals";
                }
            }
    }
    return res;
}

// ---------------------------------------------------------------------------

Verdict triple_unbiased(const std::array<BlochVector, 3>& a) {
    BlochVector v0 = -(a[0] + a[1] + a[2]);
    std::array<BlochVector, 4> v{v0, a[0] * -2.0 - v0, a[1] * -2.0 - v0, a[2] * -2.0 - v0};
    FtResult ft = fermat_torricelli(v);
    if (!ft.converged) return {Decision::Unknown, Strength::Iff, 4.0 - ft.distance_sum, "triple_unbiased"};
    return iff(4.0 - ft.distance_sum, "triple_unbiased");
}

Verdict triple_unbiased(const std::array<double, 3>& eta, const std::array<BlochVector, 3>& n) {
    for (const auto& v : n) require_unit(v, "triple_unbiased");
    return triple_unbiased(std::array<BlochVector, 3>{n[0] * eta[0], n[1] * eta[1], n[2] * eta[2]});
}

Verdict triple_coplanar_unbiased(const BlochVector& a1, const BlochVector& a2, const BlochVector& a3) {
    double scale = std::max({1e-300, a1.norm(), a2.norm(), a3.norm()});
    if (std::abs(a1.dot(a2.cross(a3))) > 1e-10 * scale * scale * scale)
        throw std::invalid_argument("triple_coplanar_unbiased: vectors are not coplanar");
    if (a1.cross(a3).norm() <= 1e-12 * scale * scale)
        throw std::invalid_argument("triple_coplanar_unbiased: outer vectors are parallel");

    // Solve a2 = lambda*a1 + mu*a3 in the plane of a1 and a3.
    double g11 = a1.dot(a1), g13 = a1.dot(a3), g33 = a3.dot(a3);
    double h1 = a1.dot(a2), h3 = a3.dot(a2);
    double det = g11 * g33 - g13 * g13;
    double lambda = (h1 * g33 - g13 * h3) / det;
    double mu = (g11 * h3 - g13 * h1) / det;
    if ((a1 * lambda + a3 * mu - a2).norm() > 1e-10 * scale)
        throw std::invalid_argument("triple_coplanar_unbiased: middle vector is off the plane");
    if (lambda < -1e-12 || mu < -1e-12)
        throw std::invalid_argument("triple_coplanar_unbiased: a2 does not lie between a1 and a3");

    bool inside = lambda + mu <= 1.0 + 1e-12;
    if (inside) return iff(2.0 - (a1 + a3).norm() - (a3 - a1).norm(), "triple_coplanar_unbiased/convex");

    // The three-segment form takes a1 - a2 + a3 as the FT point. That holds
    // only when the unit vectors from it to the other three points sum to
    // norm <= 1; a2 far out near one of the outer lines breaks it.
    auto unit = [](const BlochVector& v) { return v.norm() > 0 ? v * (1.0 / v.norm()) : v; };
    BlochVector pull = unit(a2 - a1) + unit(a2 - a3) - unit(a1 + a3);
    if (pull.norm() > 1.0 + 1e-12) {
        Verdict v = triple_unbiased({a1, a2, a3});
        v.criterion = "triple_coplanar_unbiased/ft";
        return v;
    }
    return iff(2.0 - (a1 + a3).norm() - (a2 - a1).norm() - (a3 - a2).norm(), "triple_coplanar_unbiased");
}

double triple_same_purity_bound(double phi1, double phi2) {
    return 1.0 / (std::cos((phi1 + phi2) / 2) + std::sin(phi1 / 2) + std::sin(phi2 / 2));
}

// ---------------------------------------------------------------------------

NBounds n_bounds(const std::vector<BlochVector>& n) {
    int N = int(n.size());
    if (N < 1) throw std::invalid_argument("n_bounds: empty set");
    if (N > kMaxJointN) throw std::invalid_argument("n_bounds: N exceeds the enumeration cap");
    // x and -x give the same norm, so fix x_N = +1 and double the sum.
    double max_norm = 0.0, sum = 0.0;
    Outcome half = Outcome{1} << (N - 1);
    for (Outcome x = 0; x < half; ++x) {
        BlochVector s = n[N - 1];
        for (int k = 0; k + 1 < N; ++k) s += (x >> k) & 1u ? n[k] : -n[k];
        double v = s.norm();
        max_norm = std::max(max_norm, v);
        sum += 2.0 * v;
    }
    return {max_norm / N, std::ldexp(1.0, N) / sum};
}

std::pair<Verdict, Verdict> n_necessary_sufficient(double eta, const std::vector<BlochVector>& n) {
    for (const auto& v : n) require_unit(v, "n_necessary_sufficient");
    NBounds b = n_bounds(n);
    return {necessary(b.necessary - eta, "n_necessary"), sufficient(b.sufficient - eta, "n_sufficient")};
}

// ---------------------------------------------------------------------------

double planar_symmetric_bound(int n) {
    if (n < 1) throw std::invalid_argument("planar_symmetric_bound: N must be positive");
    return 1.0 / (n * std::sin(kPi / (2 * n)));
}

Verdict planar_symmetric_nwise(int n, double eta) {
    return iff(planar_symmetric_bound(n) - eta, "planar_symmetric_nwise");
}

static void check_subset(int n, const std::vector<int>& subset) {
    if (subset.empty()) throw std::invalid_argument("empty subset");
    for (size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] < 1 || subset[i] > n) throw std::out_of_range("subset index out of range");
        if (i && subset[i] <= subset[i - 1]) throw std::invalid_argument("subset must be strictly increasing");
    }
}

double planar_subset_bound(int n, const std::vector<int>& subset) {
    check_subset(n, subset);
    double s = 0.0;
    for (size_t p = 0; p + 1 < subset.size(); ++p) s += std::sin((subset[p + 1] - subset[p]) * kPi / (2 * n));
    s += std::cos((subset.back() - subset.front()) * kPi / (2 * n));
    return 1.0 / s;
}

Verdict planar_subset_sufficient(int n, const std::vector<int>& subset, double eta) {
    double margin = planar_subset_bound(n, subset) - eta;
    int m = int(subset.size());
    if (m <= 3 || m == n) return iff(margin, "planar_subset");
    return sufficient(margin, "planar_subset");
}

double coplanar_same_purity_bound(const std::vector<double>& angles) {
    double prev = 0.0, s = 0.0;
    for (double a : angles) {
        if (!(a > prev) || a >= kPi) throw std::invalid_argument("coplanar_same_purity: angles must increase inside (0, pi)");
        s += std::sin((a - prev) / 2);
        prev = a;
    }
    s += std::cos(prev / 2);
    return 1.0 / s;
}

Verdict coplanar_same_purity_sufficient(const std::vector<double>& angles, double eta) {
    return sufficient(coplanar_same_purity_bound(angles) - eta, "coplanar_same_purity");
}

// ---------------------------------------------------------------------------

double path_length(const std::vector<BinaryQubitPovm>& povms) {
    if (povms.empty()) return 0.0;
    double s = (povms.front().bloch + povms.back().bloch).norm();
    for (size_t p = 0; p + 1 < povms.size(); ++p) s += (povms[p].bloch - povms[p + 1].bloch).norm();
    return s;
}

PathVerdict general_binary_with_labelling(const std::vector<BinaryQubitPovm>& povms, const PathLabelling& lab) {
    size_t N = povms.size();
    if (lab.flips.size() != N || lab.order.size() != N)
        throw std::invalid_argument("general_binary: labelling size mismatch");
    std::vector<BinaryQubitPovm> path;
    double max_b = 0.0, prev_b = -kTieTol;
    for (int idx : lab.order) {
        BinaryQubitPovm q = relabel_outcomes(povms.at(idx), lab.flips[idx]);
        if (q.bias < -kTieTol) throw std::invalid_argument("general_binary: labelling leaves a negative bias");
        if (q.bias < prev_b - kTieTol) throw std::invalid_argument("general_binary: biases must not decrease along the path");
        prev_b = q.bias;
        max_b = std::max(max_b, q.bias);
        path.push_back(q);
    }
    return {sufficient(2.0 * (1.0 - max_b) - path_length(path), "general_binary"), lab};
}

PathVerdict general_binary_sufficient(const std::vector<BinaryQubitPovm>& povms) {
    PathLabelling lab;
    for (const auto& p : povms) lab.flips.push_back(p.bias < 0.0);
    lab.order.resize(povms.size());
    std::iota(lab.order.begin(), lab.order.end(), 0);
    std::stable_sort(lab.order.begin(), lab.order.end(),
                     [&](int i, int j) { return std::abs(povms[i].bias) < std::abs(povms[j].bias); });
    return general_binary_with_labelling(povms, lab);
}

PathVerdict general_binary_best_ordering(const std::vector<BinaryQubitPovm>& povms) {
    int N = int(povms.size());
    if (N > 8) throw std::invalid_argument("general_binary_best_ordering: N exceeds 8");
    if (N == 0) return general_binary_sufficient(povms);

    std::vector<double> b(N);
    std::vector<bool> free_sign(N), base_flip(N);
    bool all_unbiased = true;
    for (int k = 0; k < N; ++k) {
        b[k] = std::abs(povms[k].bias);
        free_sign[k] = b[k] <= kTieTol;
        base_flip[k] = povms[k].bias < 0.0;
        all_unbiased = all_unbiased && free_sign[k];
    }
    double max_b = *std::max_element(b.begin(), b.end());

    // signed vectors: index 2k is the normalised a_k, 2k+1 its negation.
    std::vector<BlochVector> v(2 * N);
    for (int k = 0; k < N; ++k) {
        v[2 * k] = base_flip[k] ? -povms[k].bloch : povms[k].bloch;
        v[2 * k + 1] = -v[2 * k];
    }
    std::vector<double> diff(4 * N * N), sum(4 * N * N);
    for (int i = 0; i < 2 * N; ++i)
        for (int j = 0; j < 2 * N; ++j) {
            diff[i * 2 * N + j] = (v[i] - v[j]).norm();
            sum[i * 2 * N + j] = (v[i] + v[j]).norm();
        }

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> path, best_path;
    std::vector<bool> used(N, false);
    std::function<void(double)> dfs = [&](double partial) {
        if (partial >= best) return;
        if (int(path.size()) == N) {
            double total = partial + sum[path.front() * 2 * N + path.back()];
            if (total < best) {
                best = total;
                best_path = path;
            }
            return;
        }
        for (int k = 0; k < N; ++k) {
            if (used[k]) continue;
            if (!path.empty() && b[k] < b[path.back() / 2] - kTieTol) continue;
            // For unbiased sets the closed path is invariant under cyclic
            // shifts with a sign flip, so the first member can be pinned.
            if (all_unbiased && path.empty() && k != 0) continue;
            for (int s = 0; s < (free_sign[k] && !(all_unbiased && path.empty()) ? 2 : 1); ++s) {
                int node = 2 * k + s;
                double add = path.empty() ? 0.0 : diff[path.back() * 2 * N + node];
                used[k] = true;
                path.push_back(node);
                dfs(partial + add);
                path.pop_back();
                used[k] = false;
            }
        }
    };
    dfs(0.0);

    PathLabelling lab;
    lab.flips.assign(N, false);
    for (int node : best_path) {
        int k = node / 2;
        lab.order.push_back(k);
        lab.flips[k] = base_flip[k] != bool(node & 1);
    }
    PathVerdict out{sufficient(2.0 * (1.0 - max_b) - best, "general_binary_best"), lab};
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Angles of the Bloch lines (mod pi) of a coplanar family, or empty when the
// directions are not coplanar.
std::optional<std::vector<double>> line_angles(const std::vector<BlochVector>& n) {
    BlochVector normal;
    double best = 0.0;
    for (size_t i = 0; i < n.size(); ++i)
        for (size_t j = i + 1; j < n.size(); ++j) {
            BlochVector c = n[i].cross(n[j]);
            if (c.norm() > best) {
                best = c.norm();
                normal = c;
            }
        }
    if (best <= 1e-12) return std::vector<double>(n.size(), 0.0);
    normal = normal * (1.0 / best);
    for (const auto& v : n)
        if (std::abs(v.dot(normal)) > 1e-10) return std::nullopt;
    BlochVector u = n[0], w = normal.cross(u);
    std::vector<double> th;
    for (const auto& v : n) {
        double t = std::atan2(v.dot(w), v.dot(u));
        t = std::fmod(t + 2 * kPi, kPi);
        if (t >= kPi - 1e-13) t = 0.0;
        th.push_back(t);
    }
    return th;
}

}  // namespace

Verdict decide_closed_form(const std::vector<BinaryQubitPovm>& input) {
    // Trivial POVMs (zero Bloch vector) are coin flips and compatible with anything.
    std::vector<BinaryQubitPovm> povms;
    for (const auto& p : input)
        if (p.bloch.norm() > 1e-15) povms.push_back(p);
    int N = int(povms.size());
    if (N <= 1) return {Decision::Compatible, Strength::Iff, 0.0, "trivial"};
    if (N == 2) return pair_general(povms[0], povms[1]);

    bool all_unbiased = std::all_of(povms.begin(), povms.end(), [](const auto& p) { return p.is_unbiased(); });
    if (N == 3 && all_unbiased) {
        Verdict v = triple_unbiased({povms[0].bloch, povms[1].bloch, povms[2].bloch});
        if (v.decision != Decision::Unknown) return v;
    }

    // Any incompatible pair or unbiased triple settles the question. Report the
    // most violated one so the margin does not depend on the labelling.
    std::optional<Verdict> worst;
    auto keep = [&](Verdict v, const char* name) {
        if (!incompatible(v) || (worst && worst->margin <= v.margin)) return;
        v.criterion = name;
        worst = v;
    };
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) keep(pair_general(povms[i], povms[j]), "pair_general/contained");
    if (worst) return *worst;
    if (all_unbiased)
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j)
                for (int k = j + 1; k < N; ++k)
                    keep(triple_unbiased({povms[i].bloch, povms[j].bloch, povms[k].bloch}), "triple_unbiased/contained");
    if (worst) return *worst;

    double eta = povms[0].eta();
    bool same_purity = all_unbiased && std::all_of(povms.begin(), povms.end(), [&](const auto& p) {
                           return std::abs(p.eta() - eta) <= 1e-12 * std::max(1.0, eta);
                       });
    if (same_purity) {
        std::vector<BlochVector> n;
        for (const auto& p : povms) n.push_back(p.bloch * (1.0 / p.eta()));
        if (auto th = line_angles(n)) {
            // Identical lines describe the same measurement up to relabelling.
            std::vector<double> lines = *th;
            std::sort(lines.begin(), lines.end());
            std::vector<double> distinct;
            for (double t : lines)
                if (distinct.empty() || t - distinct.back() > 1e-12) distinct.push_back(t);
            if (distinct.size() > 1 && distinct.back() - distinct.front() > kPi - 1e-12) distinct.pop_back();
            int M = int(distinct.size());
            if (M == 1) return {Decision::Compatible, Strength::Iff, 0.0, "identical_lines"};
            std::vector<double> gaps;
            for (int i = 0; i + 1 < M; ++i) gaps.push_back(distinct[i + 1] - distinct[i]);
            gaps.push_back(kPi - distinct.back() + distinct.front());
            bool equiangular = std::all_of(gaps.begin(), gaps.end(),
                                           [&](double g) { return std::abs(g - kPi / M) <= 1e-10; });
            if (equiangular) return planar_symmetric_nwise(M, eta);
            // The coplanar bound depends only on the cyclic gaps between lines.
            double s = 0.0;
            for (double g : gaps) s += std::sin(g / 2);
            Verdict v = sufficient(1.0 / s - eta, "coplanar_same_purity");
            if (compatible(v)) return v;
        }
        if (N <= kMaxJointN) {
            auto [nec, suf] = n_necessary_sufficient(eta, n);
            if (incompatible(nec)) return nec;
            if (compatible(suf)) return suf;
        }
    }

    PathVerdict pv = N <= 8 ? general_binary_best_ordering(povms) : general_binary_sufficient(povms);
    if (compatible(pv.verdict)) return pv.verdict;
    return {Decision::Unknown, Strength::SufficientOnly, pv.verdict.margin, "undecided"};
}

}  // namespace jm
