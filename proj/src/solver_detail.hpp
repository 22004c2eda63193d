// Internal canonical form shared by the simplex, active-set and
// branch & bound implementations. Not installed.
#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "tesim/mathprog.hpp"

namespace tesim::detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// minimize c'x (+ 0.5 x'H x when H.size() > 0)
// s.t. A x (rel) b, lb <= x <= ub
struct CanonicalProgram {
    Eigen::MatrixXd A;
    std::vector<Relation> rel;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    Eigen::MatrixXd H;  // empty for LP
    Eigen::VectorXd lb, ub;
    int n() const { return static_cast<int>(c.size()); }
    int m() const { return static_cast<int>(b.size()); }
};

// Builds the canonical minimize-form of p (sense flip folded into c/H).
CanonicalProgram canonicalize(const MathProgram& p);

struct LpOutcome {
    SolveStatus status = SolveStatus::infeasible;
    Eigen::VectorXd x;
    long pivots = 0;
};

// Bounded-variable two-phase dense simplex. Bounds are passed separately so
// branch & bound can tighten them without copying A.
LpOutcome simplex_solve(const CanonicalProgram& cp, const Eigen::VectorXd& lb,
                        const Eigen::VectorXd& ub, double feas_tol, long max_pivots,
                        bool phase1_only = false);

struct QpOutcome {
    SolveStatus status = SolveStatus::infeasible;
    Eigen::VectorXd x;
    long iterations = 0;
};

// Primal active-set method for convex (PSD) QPs; finds a feasible start via
// the simplex phase 1. Zero-curvature descent directions are followed to the
// nearest blocking constraint, so degenerate Hessians are handled.
QpOutcome active_set_solve(const CanonicalProgram& cp, const Eigen::VectorXd& lb,
                           const Eigen::VectorXd& ub, double feas_tol, long max_iters);

}  // namespace tesim::detail
