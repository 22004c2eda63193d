// Bounded-variable two-phase dense simplex with full tableau updates.
#include <algorithm>
#include <cmath>

#include "solver_detail.hpp"

namespace tesim::detail {

namespace {

enum class VState : char { basic, at_lower, at_upper, free_zero };

struct Tableau {
    // columns: [structural | slacks | artificials]
    Eigen::MatrixXd M0;   // original coefficient matrix, m x N
    Eigen::MatrixXd tab;  // B^-1 * M0
    Eigen::VectorXd b;
    Eigen::VectorXd lo, hi;     // per column bounds
    Eigen::VectorXd val;        // current value per column
    std::vector<int> basis;     // basic column per row
    std::vector<VState> state;  // per column
    int n_struct = 0;
    int n_total = 0;
    int m = 0;

    void refactor() {
        Eigen::MatrixXd B(m, m);
        for (int r = 0; r < m; ++r) B.col(r) = M0.col(basis[r]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        tab = lu.solve(M0);
        // basic values from nonbasic bound values
        Eigen::VectorXd rhs = b;
        for (int j = 0; j < n_total; ++j) {
            if (state[j] == VState::basic) continue;
            if (val[j] != 0.0) rhs -= M0.col(j) * val[j];
        }
        Eigen::VectorXd beta = lu.solve(rhs);
        for (int r = 0; r < m; ++r) val[basis[r]] = beta[r];
    }
};

constexpr double kDjTol = 1e-9;
constexpr double kPivTol = 1e-9;
constexpr double kDegenTol = 1e-11;

// One simplex phase: minimize cost over the current tableau state.
// Returns optimal / unbounded / iteration_limit.
SolveStatus run_phase(Tableau& t, const Eigen::VectorXd& cost, long& pivots, long max_pivots) {
    bool bland = false;
    int degen_run = 0;
    int since_refactor = 0;

    while (true) {
        if (pivots >= max_pivots) return SolveStatus::iteration_limit;

        // reduced costs d = cost - y' tab with y = cost_B
        Eigen::VectorXd cB(t.m);
        for (int r = 0; r < t.m; ++r) cB[r] = cost[t.basis[r]];
        Eigen::RowVectorXd y = cB.transpose() * t.tab;

        int q = -1;
        int dir = 0;
        double best = kDjTol;
        for (int j = 0; j < t.n_total; ++j) {
            if (t.state[j] == VState::basic) continue;
            if (t.lo[j] == t.hi[j]) continue;  // fixed
            double d = cost[j] - y[j];
            int cand_dir = 0;
            if ((t.state[j] == VState::at_lower || t.state[j] == VState::free_zero) && d < -kDjTol)
                cand_dir = +1;
            else if ((t.state[j] == VState::at_upper || t.state[j] == VState::free_zero) && d > kDjTol)
                cand_dir = -1;
            if (cand_dir == 0) continue;
            if (bland) {
                q = j;
                dir = cand_dir;
                break;
            }
            if (std::abs(d) > best) {
                best = std::abs(d);
                q = j;
                dir = cand_dir;
            }
        }
        if (q < 0) return SolveStatus::optimal;

        Eigen::VectorXd w = t.tab.col(q);

        // ratio test: step t_step in variable q along dir
        double t_step = kInf;
        int block_row = -1;
        double own_range = t.hi[q] - t.lo[q];  // may be inf
        if (std::isfinite(own_range)) t_step = own_range;

        for (int r = 0; r < t.m; ++r) {
            double delta = -static_cast<double>(dir) * w[r];  // basic value rate
            if (std::abs(delta) <= kPivTol) continue;
            int i = t.basis[r];
            double ratio;
            if (delta > 0) {
                if (!std::isfinite(t.hi[i])) continue;
                ratio = (t.hi[i] - t.val[i]) / delta;
            } else {
                if (!std::isfinite(t.lo[i])) continue;
                ratio = (t.val[i] - t.lo[i]) / (-delta);
            }
            if (ratio < 0) ratio = 0;  // numerical clamp at degenerate vertices
            if (ratio < t_step - 1e-12) {
                t_step = ratio;
                block_row = r;
            } else if (block_row >= 0 && ratio <= t_step + 1e-12) {
                // tie: prefer the numerically larger pivot, then lower var index
                double cur = std::abs(w[block_row]);
                double alt = std::abs(w[r]);
                if (alt > cur * (1.0 + 1e-9) ||
                    (std::abs(alt - cur) <= 1e-12 * (1.0 + cur) && t.basis[r] < t.basis[block_row])) {
                    block_row = r;
                }
            }
        }

        if (!std::isfinite(t_step)) return SolveStatus::unbounded;

        if (t_step <= kDegenTol) {
            if (++degen_run > 400) bland = true;
        } else {
            degen_run = 0;
        }

        // apply step
        if (t_step > 0) {
            for (int r = 0; r < t.m; ++r) t.val[t.basis[r]] -= dir * w[r] * t_step;
            t.val[q] += dir * t_step;
        }

        if (block_row < 0) {
            // bound flip, no basis change
            t.state[q] = (dir > 0) ? VState::at_upper : VState::at_lower;
            t.val[q] = (dir > 0) ? t.hi[q] : t.lo[q];
            ++pivots;
            continue;
        }

        int leave = t.basis[block_row];
        double delta_leave = -static_cast<double>(dir) * w[block_row];
        if (delta_leave > 0) {
            t.state[leave] = VState::at_upper;
            t.val[leave] = t.hi[leave];
        } else {
            t.state[leave] = VState::at_lower;
            t.val[leave] = t.lo[leave];
        }
        t.state[q] = VState::basic;
        t.basis[block_row] = q;

        double piv = w[block_row];
        t.tab.row(block_row) /= piv;
        for (int r = 0; r < t.m; ++r) {
            if (r == block_row) continue;
            double f = t.tab(r, q);
            if (f != 0.0) t.tab.row(r) -= f * t.tab.row(block_row);
        }
        ++pivots;
        if (++since_refactor >= 300) {
            t.refactor();
            since_refactor = 0;
        }
    }
}

}  // namespace

LpOutcome simplex_solve(const CanonicalProgram& cp, const Eigen::VectorXd& lb,
                        const Eigen::VectorXd& ub, double feas_tol, long max_pivots,
                        bool phase1_only) {
    const int n = cp.n();
    const int m = cp.m();
    LpOutcome out;

    for (int j = 0; j < n; ++j) {
        if (lb[j] > ub[j] + feas_tol) {
            out.status = SolveStatus::infeasible;
            return out;
        }
    }

    Tableau t;
    t.m = m;
    t.n_struct = n;
    t.b = cp.b;

    // slack bounds per relation
    Eigen::VectorXd slo(m), shi(m);
    for (int r = 0; r < m; ++r) {
        switch (cp.rel[static_cast<size_t>(r)]) {
            case Relation::less_equal: slo[r] = 0.0; shi[r] = kInf; break;
            case Relation::greater_equal: slo[r] = -kInf; shi[r] = 0.0; break;
            case Relation::equal: slo[r] = 0.0; shi[r] = 0.0; break;
        }
    }

    // nonbasic start for structural vars
    Eigen::VectorXd sval(n);
    std::vector<VState> sstate(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        double l = std::max(lb[j], cp.lb[j]);
        double u = std::min(ub[j], cp.ub[j]);
        if (std::isfinite(l)) {
            sstate[static_cast<size_t>(j)] = VState::at_lower;
            sval[j] = l;
        } else if (std::isfinite(u)) {
            sstate[static_cast<size_t>(j)] = VState::at_upper;
            sval[j] = u;
        } else {
            sstate[static_cast<size_t>(j)] = VState::free_zero;
            sval[j] = 0.0;
        }
    }

    Eigen::VectorXd rho = cp.b - cp.A * sval;

    // decide artificials
    std::vector<int> art_row;
    std::vector<double> art_sign;
    std::vector<int> basis(static_cast<size_t>(m));
    std::vector<double> slack_start(static_cast<size_t>(m));
    for (int r = 0; r < m; ++r) {
        if (rho[r] >= slo[r] - feas_tol && rho[r] <= shi[r] + feas_tol) {
            basis[static_cast<size_t>(r)] = n + r;  // slack basic
            slack_start[static_cast<size_t>(r)] = std::clamp(rho[r], slo[r], shi[r]);
        } else {
            basis[static_cast<size_t>(r)] = -1;  // artificial, assigned below
            slack_start[static_cast<size_t>(r)] = std::clamp(rho[r], slo[r], shi[r]);
            art_row.push_back(r);
            double resid = rho[r] - slack_start[static_cast<size_t>(r)];
            art_sign.push_back(resid >= 0 ? 1.0 : -1.0);
        }
    }
    const int n_art = static_cast<int>(art_row.size());
    t.n_total = n + m + n_art;

    t.M0.setZero(m, t.n_total);
    t.M0.leftCols(n) = cp.A;
    for (int r = 0; r < m; ++r) t.M0(r, n + r) = 1.0;
    for (int k = 0; k < n_art; ++k) t.M0(art_row[static_cast<size_t>(k)], n + m + k) = art_sign[static_cast<size_t>(k)];

    t.lo.resize(t.n_total);
    t.hi.resize(t.n_total);
    t.val.setZero(t.n_total);
    t.state.assign(static_cast<size_t>(t.n_total), VState::at_lower);
    for (int j = 0; j < n; ++j) {
        t.lo[j] = std::max(lb[j], cp.lb[j]);
        t.hi[j] = std::min(ub[j], cp.ub[j]);
        t.val[j] = sval[j];
        t.state[static_cast<size_t>(j)] = sstate[static_cast<size_t>(j)];
    }
    for (int r = 0; r < m; ++r) {
        t.lo[n + r] = slo[r];
        t.hi[n + r] = shi[r];
        t.val[n + r] = slack_start[static_cast<size_t>(r)];
        t.state[static_cast<size_t>(n + r)] = (slack_start[static_cast<size_t>(r)] <= slo[r]) ? VState::at_lower : VState::at_upper;
        if (!std::isfinite(slo[r]) && slack_start[static_cast<size_t>(r)] >= shi[r])
            t.state[static_cast<size_t>(n + r)] = VState::at_upper;
    }
    for (int k = 0; k < n_art; ++k) {
        int col = n + m + k;
        t.lo[col] = 0.0;
        t.hi[col] = kInf;
        int r = art_row[static_cast<size_t>(k)];
        basis[static_cast<size_t>(r)] = col;
        double resid = rho[r] - slack_start[static_cast<size_t>(r)];
        t.val[col] = std::abs(resid);
        t.state[static_cast<size_t>(col)] = VState::basic;
    }
    for (int r = 0; r < m; ++r) {
        if (basis[static_cast<size_t>(r)] == n + r) {
            t.val[n + r] = rho[r];
            t.state[static_cast<size_t>(n + r)] = VState::basic;
        }
    }
    t.basis = basis;
    t.tab = t.M0;  // basis starts as a permuted identity over slack/artificial cols
    t.refactor();

    if (max_pivots <= 0) max_pivots = 20000 + 50L * (m + t.n_total);
    long pivots = 0;

    if (n_art > 0) {
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(t.n_total);
        for (int k = 0; k < n_art; ++k) c1[n + m + k] = 1.0;
        SolveStatus s1 = run_phase(t, c1, pivots, max_pivots);
        if (s1 == SolveStatus::iteration_limit) {
            out.status = s1;
            out.pivots = pivots;
            return out;
        }
        double infeas = 0.0;
        for (int k = 0; k < n_art; ++k) infeas += t.val[n + m + k];
        if (infeas > std::max(feas_tol, 1e-8)) {
            out.status = SolveStatus::infeasible;
            out.pivots = pivots;
            return out;
        }
        // drive basic artificials out where possible, then freeze all of them
        for (int r = 0; r < m; ++r) {
            int bj = t.basis[static_cast<size_t>(r)];
            if (bj < n + m) continue;
            int piv_col = -1;
            for (int j = 0; j < n + m; ++j) {
                if (t.state[static_cast<size_t>(j)] == VState::basic) continue;
                if (t.lo[j] == t.hi[j]) continue;
                if (std::abs(t.tab(r, j)) > 1e-7) {
                    piv_col = j;
                    break;
                }
            }
            if (piv_col < 0) continue;  // dependent row, keep artificial pinned at 0
            double piv = t.tab(r, piv_col);
            t.state[static_cast<size_t>(bj)] = VState::at_lower;
            t.val[bj] = 0.0;
            t.state[static_cast<size_t>(piv_col)] = VState::basic;
            t.basis[static_cast<size_t>(r)] = piv_col;
            t.tab.row(r) /= piv;
            for (int rr = 0; rr < m; ++rr) {
                if (rr == r) continue;
                double f = t.tab(rr, piv_col);
                if (f != 0.0) t.tab.row(rr) -= f * t.tab.row(r);
            }
            t.refactor();
        }
        for (int k = 0; k < n_art; ++k) {
            t.lo[n + m + k] = 0.0;
            t.hi[n + m + k] = 0.0;
        }
    }

    if (!phase1_only) {
        Eigen::VectorXd c2 = Eigen::VectorXd::Zero(t.n_total);
        c2.head(n) = cp.c;
        SolveStatus s2 = run_phase(t, c2, pivots, max_pivots);
        if (s2 != SolveStatus::optimal) {
            out.status = s2;
            out.pivots = pivots;
            if (s2 == SolveStatus::unbounded) out.x = t.val.head(n);
            return out;
        }
    }

    t.refactor();  // exact basic values for the final basis
    out.status = SolveStatus::optimal;
    out.x = t.val.head(n);
    out.pivots = pivots;
    return out;
}

}  // namespace tesim::detail
