#pragma once

// Criterion-independent feasibility oracle.
//
// Looks for a joint POVM with Dykstra's alternating projections between the
// product of 2x2 PSD cones (one per outcome string) and the affine subspace
// fixed by completeness and the N single-measurement marginals. A Feasible
// status carries a constructive witness; LikelyInfeasible is numerical
// evidence only.

#include "jm/criteria.hpp"
#include "jm/povm.hpp"

#include <functional>
#include <string>
#include <vector>

namespace jm {

inline constexpr int kMaxOracleN = 12;

struct OracleParams {
    int max_iter = 50000;
    double eps_oracle = 1e-9;  // residual below which the problem counts as feasible
    double eps_infeas = 1e-7;  // residual floor for an infeasibility call
    int plateau = 500;         // window length for the plateau test
    double plateau_rel = 1e-3; // relative residual decrease over the window that counts as stalled
};

enum class FeasibilityStatus { Feasible, LikelyInfeasible, Inconclusive };

std::string to_string(FeasibilityStatus s);

struct FeasibilityVerdict {
    FeasibilityStatus status = FeasibilityStatus::Inconclusive;
    JointPovm witness;  // set when Feasible
    double residual = 0.0;
    int iterations = 0;
    OracleParams params;
};

FeasibilityVerdict oracle_decide(const std::vector<BinaryQubitPovm>& povms, const OracleParams& params = {});

// Orthogonal projections used by the solver, exposed for testing. Effects are
// packed as (alpha, x, y, z) per outcome string, outcome x at offset 4x.
Effect project_psd(const Effect& e);

class MarginalSubspace {
public:
    explicit MarginalSubspace(const std::vector<BinaryQubitPovm>& povms);
    void project(std::vector<double>& g) const;
    int n() const { return n_; }

private:
    int n_;
    std::vector<double> rhs_;  // (N+1) targets per component, component-major
    Eigen::LDLT<Eigen::MatrixXd> gram_;
};

struct SweepPoint {
    double eta = 0.0;
    Decision expected = Decision::Unknown;
    FeasibilityStatus got = FeasibilityStatus::Inconclusive;
    bool agree = false;
};

struct SweepReport {
    std::vector<SweepPoint> points;
    int skipped = 0;  // grid points inside a boundary band
    int mismatches() const;
};

// Evaluates the oracle on family(eta) for each grid value that is farther
// than delta from every boundary, and compares with reference(eta).
SweepReport agreement_sweep(const std::function<std::vector<BinaryQubitPovm>(double)>& family,
                            const std::function<Decision(double)>& reference, const std::vector<double>& grid,
                            const std::vector<double>& boundaries, double delta = 5e-3,
                            const OracleParams& params = {});

}  // namespace jm
