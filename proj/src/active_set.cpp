// Primal active-set method for convex quadratic programs.
#include <algorithm>
#include <cmath>

#include "solver_detail.hpp"

namespace tesim::detail {

namespace {

struct RangeConstraint {
    Eigen::VectorXd normal;
    double lo = -kInf;
    double hi = kInf;
    bool is_equality() const { return lo == hi; }
};

enum class Side : char { lo, hi, fixed };

struct ActiveEntry {
    int cons = -1;
    Side side = Side::fixed;
};

}  // namespace

QpOutcome active_set_solve(const CanonicalProgram& cp, const Eigen::VectorXd& lb,
                           const Eigen::VectorXd& ub, double feas_tol, long max_iters) {
    const int n = cp.n();
    QpOutcome out;

    // feasible start from simplex phase 1
    LpOutcome start = simplex_solve(cp, lb, ub, feas_tol, 0, /*phase1_only=*/true);
    if (start.status != SolveStatus::optimal) {
        out.status = start.status;
        return out;
    }
    Eigen::VectorXd x = start.x;

    // constraint list: general rows first, then finite variable bounds
    std::vector<RangeConstraint> cons;
    cons.reserve(static_cast<size_t>(cp.m() + n));
    for (int r = 0; r < cp.m(); ++r) {
        RangeConstraint rc;
        rc.normal = cp.A.row(r).transpose();
        switch (cp.rel[static_cast<size_t>(r)]) {
            case Relation::less_equal: rc.hi = cp.b[r]; break;
            case Relation::greater_equal: rc.lo = cp.b[r]; break;
            case Relation::equal: rc.lo = rc.hi = cp.b[r]; break;
        }
        cons.push_back(std::move(rc));
    }
    for (int j = 0; j < n; ++j) {
        double l = std::max(lb[j], cp.lb[j]);
        double u = std::min(ub[j], cp.ub[j]);
        if (!std::isfinite(l) && !std::isfinite(u)) continue;
        RangeConstraint rc;
        rc.normal = Eigen::VectorXd::Unit(n, j);
        rc.lo = std::isfinite(l) ? l : -kInf;
        rc.hi = std::isfinite(u) ? u : kInf;
        cons.push_back(std::move(rc));
    }
    const int nc = static_cast<int>(cons.size());

    std::vector<ActiveEntry> work;
    std::vector<char> in_work(static_cast<size_t>(nc), 0);

    auto working_matrix = [&]() {
        Eigen::MatrixXd Aw(static_cast<int>(work.size()), n);
        for (size_t k = 0; k < work.size(); ++k) Aw.row(static_cast<int>(k)) = cons[static_cast<size_t>(work[k].cons)].normal.transpose();
        return Aw;
    };

    // initial working set: equalities plus active inequality sides, kept
    // linearly independent
    {
        Eigen::MatrixXd Aw(0, n);
        for (int ci = 0; ci < nc; ++ci) {
            const auto& rc = cons[static_cast<size_t>(ci)];
            double v = rc.normal.dot(x);
            Side side;
            if (rc.is_equality()) side = Side::fixed;
            else if (std::isfinite(rc.hi) && std::abs(v - rc.hi) <= 1e-8 * (1.0 + std::abs(rc.hi))) side = Side::hi;
            else if (std::isfinite(rc.lo) && std::abs(v - rc.lo) <= 1e-8 * (1.0 + std::abs(rc.lo))) side = Side::lo;
            else continue;
            if (static_cast<int>(work.size()) >= n) break;
            Eigen::MatrixXd cand(Aw.rows() + 1, n);
            cand.topRows(Aw.rows()) = Aw;
            cand.bottomRows(1) = rc.normal.transpose();
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cand.transpose());
            qr.setThreshold(1e-10);
            if (qr.rank() == cand.rows()) {
                Aw = cand;
                work.push_back({ci, side});
                in_work[static_cast<size_t>(ci)] = 1;
            }
        }
    }

    const Eigen::MatrixXd& H = cp.H;
    if (max_iters <= 0) max_iters = 200 + 40L * (n + nc);

    for (long iter = 0; iter < max_iters; ++iter) {
        out.iterations = iter;
        Eigen::VectorXd g = H * x + cp.c;
        const int k = static_cast<int>(work.size());

        Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
        bool ray = false;
        Eigen::MatrixXd Z;
        if (k == 0) {
            Z = Eigen::MatrixXd::Identity(n, n);
        } else if (k >= n) {
            Z.resize(n, 0);
        } else {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(working_matrix().transpose());
            Eigen::MatrixXd Q = qr.householderQ();
            Z = Q.rightCols(n - k);
        }
        if (Z.cols() > 0) {
            Eigen::MatrixXd Hz = Z.transpose() * H * Z;
            Eigen::VectorXd gz = Z.transpose() * g;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Hz);
            const auto& ev = eig.eigenvalues();
            const auto& V = eig.eigenvectors();
            double emax = std::max(0.0, ev.size() ? ev.maxCoeff() : 0.0);
            double tol_e = std::max(1e-10, 1e-9 * emax);
            double tol_ray = 1e-8 * std::max(1.0, gz.lpNorm<Eigen::Infinity>());
            Eigen::VectorXd pz = Eigen::VectorXd::Zero(Z.cols());
            Eigen::VectorXd rz = Eigen::VectorXd::Zero(Z.cols());
            for (int i = 0; i < ev.size(); ++i) {
                double comp = V.col(i).dot(gz);
                if (ev[i] > tol_e) {
                    pz -= (comp / ev[i]) * V.col(i);
                } else if (std::abs(comp) > tol_ray) {
                    rz -= comp * V.col(i);
                    ray = true;
                }
            }
            p = ray ? Eigen::VectorXd(Z * rz) : Eigen::VectorXd(Z * pz);
        }

        if (!ray && p.lpNorm<Eigen::Infinity>() <= 1e-9 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
            if (k == 0) {
                out.status = SolveStatus::optimal;
                out.x = x;
                return out;
            }
            Eigen::MatrixXd Aw = working_matrix();
            Eigen::VectorXd nu = Aw.transpose().colPivHouseholderQr().solve(g);
            // a'x <= hi active requires nu <= 0; a'x >= lo active requires nu >= 0
            int drop = -1;
            double worst = 1e-8 * (1.0 + g.lpNorm<Eigen::Infinity>());
            for (int w = 0; w < k; ++w) {
                double viol = 0.0;
                if (work[static_cast<size_t>(w)].side == Side::hi) viol = nu[w];
                else if (work[static_cast<size_t>(w)].side == Side::lo) viol = -nu[w];
                else continue;
                if (viol > worst) {
                    worst = viol;
                    drop = w;
                }
            }
            if (drop < 0) {
                out.status = SolveStatus::optimal;
                out.x = x;
                return out;
            }
            in_work[static_cast<size_t>(work[static_cast<size_t>(drop)].cons)] = 0;
            work.erase(work.begin() + drop);
            continue;
        }

        // step length to the nearest blocking constraint
        double alpha = ray ? kInf : 1.0;
        int block = -1;
        Side block_side = Side::lo;
        for (int ci = 0; ci < nc; ++ci) {
            if (in_work[static_cast<size_t>(ci)]) continue;
            const auto& rc = cons[static_cast<size_t>(ci)];
            double s = rc.normal.dot(p);
            if (std::abs(s) <= 1e-11) continue;
            double v = rc.normal.dot(x);
            double a;
            Side side;
            if (s > 0) {
                if (!std::isfinite(rc.hi)) continue;
                a = (rc.hi - v) / s;
                side = Side::hi;
            } else {
                if (!std::isfinite(rc.lo)) continue;
                a = (rc.lo - v) / s;
                side = Side::lo;
            }
            if (a < 0) a = 0;
            if (a < alpha - 1e-12) {
                alpha = a;
                block = ci;
                block_side = side;
            }
        }

        if (!std::isfinite(alpha)) {
            out.status = SolveStatus::unbounded;
            out.x = x;
            return out;
        }
        x += alpha * p;
        if (block >= 0) {
            if (static_cast<int>(work.size()) < n) {
                work.push_back({block, cons[static_cast<size_t>(block)].is_equality() ? Side::fixed : block_side});
                in_work[static_cast<size_t>(block)] = 1;
            }
        }
    }

    out.status = SolveStatus::iteration_limit;
    out.x = x;
    return out;
}

}  // namespace tesim::detail
