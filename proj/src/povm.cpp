#include "jm/povm.hpp"

#include <sstream>
#include <stdexcept>

namespace jm {

Eigen::Matrix2cd Effect::to_matrix() const {
    using C = std::complex<double>;
    Eigen::Matrix2cd m;
    m(0, 0) = C(0.5 * (alpha + bloch.z), 0.0);
    m(1, 1) = C(0.5 * (alpha - bloch.z), 0.0);
    m(0, 1) = C(0.5 * bloch.x, -0.5 * bloch.y);
    m(1, 0) = C(0.5 * bloch.x, 0.5 * bloch.y);
    return m;
}

std::string ValidationReport::summary() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i].what << " (" << violations[i].magnitude << ")";
    }
    return os.str();
}

Outcome outcome_from_signs(const std::vector<int>& signs) {
    Outcome x = 0;
    for (size_t k = 0; k < signs.size(); ++k)
        if (signs[k] > 0) x |= Outcome{1} << k;
    return x;
}

Effect JointPovm::effect(Outcome x) const {
    auto it = effects.find(x);
    return it == effects.end() ? Effect{} : it->second;
}

void JointPovm::add(Outcome x, const Effect& e) { effects[x] += e; }

Effect JointPovm::total() const {
    Effect s;
    for (const auto& [x, e] : effects) s += e;
    return s;
}

int JointPovm::nonzero_count(double eps) const {
    int c = 0;
    for (const auto& [x, e] : effects)
        if (e.alpha > eps || e.bloch.norm() > eps) ++c;
    return c;
}

ValidationReport validate_povm(const BinaryQubitPovm& p, double eps) {
    ValidationReport r;
    for (int s : {+1, -1}) {
        Effect e = p.effect(s);
        std::string tag = s > 0 ? "E(+1)" : "E(-1)";
        if (!e.is_psd(eps)) r.violations.push_back({tag + " not PSD", e.bloch.norm() - e.alpha});
        if (!e.below_identity(eps))
            r.violations.push_back({tag + " exceeds identity", e.bloch.norm() - (2.0 - e.alpha)});
    }
    double excess = std::abs(p.bias) - (1.0 - p.bloch.norm());
    if (excess > eps) r.violations.push_back({"|b| > 1 - |a|", excess});
    return r;
}

ValidationReport validate_joint(const JointPovm& j, double eps_psd, double eps_marg) {
    ValidationReport r;
    if (j.n < 1 || j.n > kMaxJointN) {
        r.violations.push_back({"measurement count out of range", double(j.n)});
        return r;
    }
    for (const auto& [x, e] : j.effects) {
        if (x > full_mask(j.n)) r.violations.push_back({"outcome key out of range", double(x)});
        if (!e.is_psd(eps_psd))
            r.violations.push_back({"effect " + std::to_string(x) + " not PSD", -e.min_eigenvalue()});
    }
    Effect t = j.total();
    double err = std::max(std::abs(t.alpha - 2.0), t.bloch.norm());
    if (err > eps_marg) r.violations.push_back({"effects do not sum to identity", err});
    return r;
}

JointPovm marginalize(const JointPovm& j, const std::vector<int>& keep) {
    if (keep.empty()) throw std::invalid_argument("marginalize: empty index set");
    for (size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 1 || keep[i] > j.n) throw std::out_of_range("marginalize: index out of range");
        if (i && keep[i] <= keep[i - 1])
            throw std::invalid_argument("marginalize: indices must be strictly increasing");
    }
    JointPovm out;
    out.n = int(keep.size());
    for (const auto& [x, e] : j.effects) {
        Outcome y = 0;
        for (size_t i = 0; i < keep.size(); ++i)
            if ((x >> (keep[i] - 1)) & 1u) y |= Outcome{1} << i;
        out.add(y, e);
    }
    return out;
}

BinaryQubitPovm marginal_povm(const JointPovm& j, int k) {
    if (k < 1 || k > j.n) throw std::out_of_range("marginal_povm: index out of range");
    Effect plus;
    for (const auto& [x, e] : j.effects)
        if ((x >> (k - 1)) & 1u) plus += e;
    return {plus.alpha - 1.0, plus.bloch};
}

double marginal_error(const JointPovm& j, const std::vector<BinaryQubitPovm>& targets) {
    if (int(targets.size()) != j.n) throw std::invalid_argument("marginal_error: size mismatch");
    double err = 0.0;
    for (int k = 1; k <= j.n; ++k) {
        BinaryQubitPovm m = marginal_povm(j, k);
        err = std::max(err, std::abs(m.bias - targets[k - 1].bias));
        err = std::max(err, m.bloch.max_abs_diff(targets[k - 1].bloch));
    }
    return err;
}

BinaryQubitPovm relabel_outcomes(const BinaryQubitPovm& p, bool swap) {
    return swap ? BinaryQubitPovm{-p.bias, -p.bloch} : p;
}

JointPovm relabel_joint(const JointPovm& j, const std::vector<bool>& swaps) {
    if (int(swaps.size()) != j.n) throw std::invalid_argument("relabel_joint: size mismatch");
    Outcome flip = 0;
    for (int k = 0; k < j.n; ++k)
        if (swaps[k]) flip |= Outcome{1} << k;
    JointPovm out;
    out.n = j.n;
    for (const auto& [x, e] : j.effects) out.effects[x ^ flip] = e;
    return out;
}

JointPovm permute_measurements(const JointPovm& j, const std::vector<int>& order) {
    if (int(order.size()) != j.n) throw std::invalid_argument("permute_measurements: size mismatch");
    JointPovm out;
    out.n = j.n;
    for (const auto& [x, e] : j.effects) {
        Outcome y = 0;
        for (int k = 0; k < j.n; ++k)
            if ((x >> order[k]) & 1u) y |= Outcome{1} << k;
        out.effects[y] = e;
    }
    return out;
}

bool is_orthogonal(const Matrix3& o, double tol) {
    return ((o.transpose() * o - Matrix3::Identity()).cwiseAbs().maxCoeff()) <= tol;
}

BlochVector apply(const Matrix3& o, const BlochVector& v) {
    Eigen::Vector3d w = o * Eigen::Vector3d(v.x, v.y, v.z);
    return {w.x(), w.y(), w.z()};
}

static void require_orthogonal(const Matrix3& o) {
    if (!is_orthogonal(o)) throw std::invalid_argument("apply_orthogonal: matrix is not orthogonal");
}

BinaryQubitPovm apply_orthogonal(const BinaryQubitPovm& p, const Matrix3& o) {
    require_orthogonal(o);
    return {p.bias, apply(o, p.bloch)};
}

std::vector<BinaryQubitPovm> apply_orthogonal(const std::vector<BinaryQubitPovm>& ps, const Matrix3& o) {
    require_orthogonal(o);
    std::vector<BinaryQubitPovm> out;
    out.reserve(ps.size());
    for (const auto& p : ps) out.push_back({p.bias, apply(o, p.bloch)});
    return out;
}

JointPovm apply_orthogonal(const JointPovm& j, const Matrix3& o) {
    require_orthogonal(o);
    JointPovm out;
    out.n = j.n;
    for (const auto& [x, e] : j.effects) out.effects[x] = {e.alpha, apply(o, e.bloch)};
    return out;
}

Matrix3 rotation_z(double angle) {
    Matrix3 r;
    double c = std::cos(angle), s = std::sin(angle);
    r << c, -s, 0, s, c, 0, 0, 0, 1;
    return r;
}

}  // namespace jm
