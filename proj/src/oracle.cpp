#include "jm/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace jm {

std::string to_string(FeasibilityStatus s) {
    switch (s) {
        case FeasibilityStatus::Feasible: return "feasible";
        case FeasibilityStatus::LikelyInfeasible: return "likely_infeasible";
        default: return "inconclusive";
    }
}

Effect project_psd(const Effect& e) {
    double r = e.bloch.norm();
    if (r <= e.alpha) return e;
    if (r <= -e.alpha) return {};
    double top = 0.5 * (e.alpha + r);  // the surviving eigenvalue
    return {top, e.bloch * (top / r)};
}

MarginalSubspace::MarginalSubspace(const std::vector<BinaryQubitPovm>& povms) : n_(int(povms.size())) {
    int m = n_ + 1;
    double size = std::ldexp(1.0, n_);
    // Gram matrix of the constraint rows: the all-ones row and one indicator
    // row per measurement (outcome +1).
    Eigen::MatrixXd g(m, m);
    g(0, 0) = size;
    for (int k = 1; k < m; ++k) {
        g(0, k) = g(k, 0) = size / 2;
        for (int l = 1; l < m; ++l) g(k, l) = k == l ? size / 2 : size / 4;
    }
    gram_.compute(g);
    rhs_.assign(4 * m, 0.0);
    rhs_[0] = 2.0;  // completeness: alpha sums to 2, Bloch parts to 0
    for (int k = 0; k < n_; ++k) {
        rhs_[k + 1] = 1.0 + povms[k].bias;
        rhs_[m + k + 1] = povms[k].bloch.x;
        rhs_[2 * m + k + 1] = povms[k].bloch.y;
        rhs_[3 * m + k + 1] = povms[k].bloch.z;
    }
}

void MarginalSubspace::project(std::vector<double>& g) const {
    int m = n_ + 1;
    Outcome count = Outcome{1} << n_;
    for (int c = 0; c < 4; ++c) {
        Eigen::VectorXd res = Eigen::VectorXd::Zero(m);
        for (Outcome x = 0; x < count; ++x) {
            double v = g[4 * x + c];
            res[0] += v;
            for (int k = 0; k < n_; ++k)
                if ((x >> k) & 1u) res[k + 1] += v;
        }
        for (int i = 0; i < m; ++i) res[i] -= rhs_[c * m + i];
        Eigen::VectorXd lambda = gram_.solve(res);
        for (Outcome x = 0; x < count; ++x) {
            double shift = lambda[0];
            for (int k = 0; k < n_; ++k)
                if ((x >> k) & 1u) shift += lambda[k + 1];
            g[4 * x + c] -= shift;
        }
    }
}

namespace {

JointPovm unpack(const std::vector<double>& g, int n) {
    JointPovm w;
    w.n = n;
    for (Outcome o = 0; o < (Outcome{1} << n); ++o) {
        Effect e{g[4 * o], {g[4 * o + 1], g[4 * o + 2], g[4 * o + 3]}};
        if (e.alpha != 0.0 || e.bloch.norm() != 0.0) w.effects[o] = e;
    }
    return w;
}

}  // namespace

FeasibilityVerdict oracle_decide(const std::vector<BinaryQubitPovm>& povms, const OracleParams& params) {
    int n = int(povms.size());
    if (n < 1) throw std::invalid_argument("oracle: empty POVM set");
    if (n > kMaxOracleN) throw std::invalid_argument("oracle: N exceeds the cap of 12");
    for (const auto& p : povms)
        if (!validate_povm(p).ok()) throw std::invalid_argument("oracle: input is not a valid POVM");

    FeasibilityVerdict out;
    out.params = params;
    if (n == 1) {
        out.status = FeasibilityStatus::Feasible;
        out.witness.n = 1;
        out.witness.effects[1] = povms[0].effect(+1);
        out.witness.effects[0] = povms[0].effect(-1);
        return out;
    }

    MarginalSubspace affine(povms);
    Outcome count = Outcome{1} << n;
    size_t dim = 4 * size_t(count);

    // Start from the maximally mixed joint moved onto the marginal subspace.
    std::vector<double> x(dim, 0.0), y(dim), q(dim, 0.0);
    for (Outcome o = 0; o < count; ++o) x[4 * o] = 2.0 / count;

    std::vector<double> history;
    history.reserve(params.max_iter);
    int it = 0;
    double residual = 0.0;
    for (; it < params.max_iter; ++it) {
        y = x;
        affine.project(y);
        // The affine set needs no correction term; the cone does.
        double r2 = 0.0;
        for (Outcome o = 0; o < count; ++o) {
            double* yo = &y[4 * o];
            double* qo = &q[4 * o];
            Effect in{yo[0] + qo[0], {yo[1] + qo[1], yo[2] + qo[2], yo[3] + qo[3]}};
            Effect p = project_psd(in);
            double px[4] = {p.alpha, p.bloch.x, p.bloch.y, p.bloch.z};
            for (int c = 0; c < 4; ++c) {
                qo[c] = yo[c] + qo[c] - px[c];
                x[4 * o + c] = px[c];
                r2 += (px[c] - yo[c]) * (px[c] - yo[c]);
            }
        }
        residual = std::sqrt(r2);
        history.push_back(residual);
        // The affine iterate has exact marginals; accept it once it is PSD to tolerance.
        if (residual <= params.eps_oracle) {
            JointPovm w = unpack(y, n);
            if (validate_joint(w, params.eps_oracle, params.eps_oracle).ok() &&
                marginal_error(w, povms) <= params.eps_oracle) {
                out.status = FeasibilityStatus::Feasible;
                out.witness = std::move(w);
                out.residual = residual;
                out.iterations = it + 1;
                return out;
            }
        }
        if (residual > params.eps_infeas && it >= params.plateau) {
            double before = history[it - params.plateau];
            if (before - residual < params.plateau_rel * residual) {
                out.status = FeasibilityStatus::LikelyInfeasible;
                out.residual = residual;
                out.iterations = it + 1;
                return out;
            }
        }
    }
    out.residual = residual;
    out.iterations = params.max_iter;
    return out;
}

int SweepReport::mismatches() const {
    int c = 0;
    for (const auto& p : points) c += !p.agree;
    return c;
}

SweepReport agreement_sweep(const std::function<std::vector<BinaryQubitPovm>(double)>& family,
                            const std::function<Decision(double)>& reference, const std::vector<double>& grid,
                            const std::vector<double>& boundaries, double delta, const OracleParams& params) {
    SweepReport rep;
    for (double eta : grid) {
        bool near = false;
        for (double b : boundaries) near = near || std::abs(eta - b) <= delta;
        if (near) {
            ++rep.skipped;
            continue;
        }
        SweepPoint pt;
        pt.eta = eta;
        pt.expected = reference(eta);
        pt.got = oracle_decide(family(eta), params).status;
        pt.agree = (pt.expected == Decision::Compatible && pt.got == FeasibilityStatus::Feasible) ||
                   (pt.expected == Decision::Incompatible && pt.got == FeasibilityStatus::LikelyInfeasible);
        rep.points.push_back(pt);
    }
    return rep;
}

}  // namespace jm
