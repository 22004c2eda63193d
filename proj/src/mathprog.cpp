// MathProgram assembly, canonicalization, branch & bound and LP-format dump.
#include "tesim/mathprog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "solver_detail.hpp"

namespace tesim {

using detail::CanonicalProgram;
using detail::kInf;

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::iteration_limit: return "iteration_limit";
    }
    return "?";
}

int MathProgram::add_var(std::string name, double lb, double ub, VarKind kind) {
    if (kind == VarKind::binary) {
        lb = std::max(lb, 0.0);
        ub = std::min(ub, 1.0);
    }
    vars.push_back({std::move(name), lb, ub, kind});
    obj_linear.push_back(0.0);
    return static_cast<int>(vars.size()) - 1;
}

void MathProgram::set_obj(int var, double coeff) { obj_linear.at(static_cast<size_t>(var)) = coeff; }
void MathProgram::add_obj(int var, double coeff) { obj_linear.at(static_cast<size_t>(var)) += coeff; }

void MathProgram::add_quad_obj(int i, int j, double coeff) {
    if (i > j) std::swap(i, j);
    obj_quadratic.push_back({i, j, coeff});
}

int MathProgram::add_constraint(std::vector<LinTerm> row, Relation rel, double rhs, std::string name) {
    for (const auto& term : row)
        if (term.var < 0 || term.var >= num_vars())
            throw std::out_of_range("constraint references undeclared variable");
    constraints.push_back({std::move(row), rel, rhs, std::move(name)});
    return static_cast<int>(constraints.size()) - 1;
}

std::vector<int> MathProgram::binary_indices() const {
    std::vector<int> idx;
    for (int j = 0; j < num_vars(); ++j)
        if (vars[static_cast<size_t>(j)].kind == VarKind::binary) idx.push_back(j);
    return idx;
}

double objective_value(const MathProgram& p, const std::vector<double>& x) {
    double v = p.obj_constant;
    for (int j = 0; j < p.num_vars(); ++j) v += p.obj_linear[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
    for (const auto& q : p.obj_quadratic) v += q.coeff * x[static_cast<size_t>(q.i)] * x[static_cast<size_t>(q.j)];
    return v;
}

double max_constraint_violation(const MathProgram& p, const std::vector<double>& x) {
    double worst = 0.0;
    for (const auto& c : p.constraints) {
        double lhs = 0.0;
        for (const auto& term : c.row) lhs += term.coeff * x[static_cast<size_t>(term.var)];
        double v = 0.0;
        switch (c.rel) {
            case Relation::less_equal: v = lhs - c.rhs; break;
            case Relation::greater_equal: v = c.rhs - lhs; break;
            case Relation::equal: v = std::abs(lhs - c.rhs); break;
        }
        worst = std::max(worst, v);
    }
    for (int j = 0; j < p.num_vars(); ++j) {
        const auto& var = p.vars[static_cast<size_t>(j)];
        worst = std::max(worst, var.lb - x[static_cast<size_t>(j)]);
        worst = std::max(worst, x[static_cast<size_t>(j)] - var.ub);
    }
    return worst;
}

namespace detail {

CanonicalProgram canonicalize(const MathProgram& p) {
    const int n = p.num_vars();
    const int m = static_cast<int>(p.constraints.size());
    CanonicalProgram cp;
    cp.A.setZero(m, n);
    cp.b.resize(m);
    cp.rel.resize(static_cast<size_t>(m));
    cp.c.resize(n);
    cp.lb.resize(n);
    cp.ub.resize(n);
    const double sgn = (p.sense == Sense::minimize) ? 1.0 : -1.0;
    for (int j = 0; j < n; ++j) {
        cp.c[j] = sgn * p.obj_linear[static_cast<size_t>(j)];
        cp.lb[j] = p.vars[static_cast<size_t>(j)].lb;
        cp.ub[j] = p.vars[static_cast<size_t>(j)].ub;
    }
    for (int r = 0; r < m; ++r) {
        const auto& c = p.constraints[static_cast<size_t>(r)];
        for (const auto& term : c.row) cp.A(r, term.var) += term.coeff;
        cp.b[r] = c.rhs;
        cp.rel[static_cast<size_t>(r)] = c.rel;
    }
    if (!p.obj_quadratic.empty()) {
        cp.H.setZero(n, n);
        for (const auto& q : p.obj_quadratic) {
            if (q.i == q.j) {
                cp.H(q.i, q.i) += 2.0 * sgn * q.coeff;
            } else {
                cp.H(q.i, q.j) += sgn * q.coeff;
                cp.H(q.j, q.i) += sgn * q.coeff;
            }
        }
    }
    return cp;
}

}  // namespace detail

namespace {

void check_psd(const CanonicalProgram& cp) {
    if (cp.H.size() == 0) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cp.H, Eigen::EigenvaluesOnly);
    double lo = eig.eigenvalues().minCoeff();
    double hi = std::max(0.0, eig.eigenvalues().maxCoeff());
    if (lo < -1e-8 * std::max(1.0, hi))
        throw std::invalid_argument("quadratic objective is not positive semidefinite");
}

double canonical_objective(const CanonicalProgram& cp, const Eigen::VectorXd& x) {
    double v = cp.c.dot(x);
    if (cp.H.size() > 0) v += 0.5 * x.dot(cp.H * x);
    return v;
}

SolveResult finish(const MathProgram& p, SolveStatus status, const Eigen::VectorXd& x, long nodes) {
    SolveResult r;
    r.status = status;
    r.nodes = nodes;
    if (x.size() == p.num_vars() && (status == SolveStatus::optimal || status == SolveStatus::iteration_limit)) {
        r.values.assign(x.data(), x.data() + x.size());
        r.objective = objective_value(p, r.values);
    }
    return r;
}

struct NodeEval {
    SolveStatus status = SolveStatus::infeasible;
    Eigen::VectorXd x;
    double bound = 0.0;  // canonical (minimize) objective
};

NodeEval evaluate_node(const CanonicalProgram& cp, const Eigen::VectorXd& lb, const Eigen::VectorXd& ub,
                       const SolveOptions& opt) {
    NodeEval ev;
    if (cp.H.size() > 0) {
        auto q = detail::active_set_solve(cp, lb, ub, opt.feas_tol, 0);
        ev.status = q.status;
        ev.x = q.x;
    } else {
        auto l = detail::simplex_solve(cp, lb, ub, opt.feas_tol, opt.max_pivots);
        ev.status = l.status;
        ev.x = l.x;
    }
    if (ev.status == SolveStatus::optimal) ev.bound = canonical_objective(cp, ev.x);
    return ev;
}

}  // namespace

SolveResult solve_continuous(const MathProgram& p, const SolveOptions& opt) {
    CanonicalProgram cp = detail::canonicalize(p);
    check_psd(cp);
    NodeEval ev = evaluate_node(cp, cp.lb, cp.ub, opt);
    return finish(p, ev.status, ev.x, 0);
}

SolveResult solve_mixed(const MathProgram& p, const SolveOptions& opt) {
    const std::vector<int> bins = p.binary_indices();
    if (bins.empty()) return solve_continuous(p, opt);

    CanonicalProgram cp = detail::canonicalize(p);
    check_psd(cp);

    struct Node {
        double bound;
        long seq;
        std::vector<std::pair<int, double>> fixes;
        Eigen::VectorXd x;
    };
    struct NodeWorse {
        bool operator()(const Node& a, const Node& b) const {
            if (a.bound != b.bound) return a.bound > b.bound;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Node, std::vector<Node>, NodeWorse> open;

    long nodes_solved = 0;
    long seq = 0;
    bool have_inc = false;
    bool budget_hit = false;
    bool solver_trouble = false;
    double inc_obj = kInf;  // canonical space
    Eigen::VectorXd inc_x;

    auto gap = [&]() { return std::max(1e-12, opt.rel_gap * std::abs(inc_obj)); };

    Eigen::VectorXd lbw(cp.lb), ubw(cp.ub);
    auto eval_with = [&](const std::vector<std::pair<int, double>>& fixes) {
        lbw = cp.lb;
        ubw = cp.ub;
        for (const auto& [j, v] : fixes) {
            lbw[j] = v;
            ubw[j] = v;
        }
        ++nodes_solved;
        return evaluate_node(cp, lbw, ubw, opt);
    };

    auto try_incumbent = [&](const std::vector<std::pair<int, double>>& base,
                             const Eigen::VectorXd& relaxed) {
        std::vector<std::pair<int, double>> fixes = base;
        std::vector<char> fixed(static_cast<size_t>(cp.n()), 0);
        for (const auto& [j, v] : base) fixed[static_cast<size_t>(j)] = 1;
        for (int b : bins)
            if (!fixed[static_cast<size_t>(b)]) fixes.emplace_back(b, std::round(relaxed[b]));
        NodeEval ev = eval_with(fixes);
        if (ev.status == SolveStatus::optimal && ev.bound < inc_obj - 1e-12) {
            inc_obj = ev.bound;
            inc_x = ev.x;
            have_inc = true;
            return true;
        }
        return false;
    };

    NodeEval root = eval_with({});
    if (root.status == SolveStatus::infeasible || root.status == SolveStatus::unbounded)
        return finish(p, root.status, {}, nodes_solved);
    if (root.status == SolveStatus::iteration_limit) solver_trouble = true;
    if (root.status == SolveStatus::optimal) {
        if (opt.root_rounding) try_incumbent({}, root.x);
        open.push({root.bound, seq++, {}, root.x});
    }

    while (!open.empty()) {
        if (nodes_solved >= opt.node_budget) {
            budget_hit = true;
            break;
        }
        Node node = open.top();
        open.pop();
        if (have_inc && node.bound >= inc_obj - gap()) continue;

        std::vector<char> fixed(static_cast<size_t>(cp.n()), 0);
        for (const auto& [j, v] : node.fixes) fixed[static_cast<size_t>(j)] = 1;

        int branch_var = -1;
        int fallback_var = -1;
        for (int b : bins) {
            if (fixed[static_cast<size_t>(b)] || cp.lb[b] == cp.ub[b]) continue;
            if (fallback_var < 0) fallback_var = b;
            if (std::abs(node.x[b] - std::round(node.x[b])) > opt.int_tol) {
                branch_var = b;
                break;
            }
        }

        if (branch_var < 0) {
            // integral within tolerance: polish by fixing every binary
            if (!try_incumbent(node.fixes, node.x) && fallback_var >= 0) {
                branch_var = fallback_var;  // polish failed, keep partitioning
            } else {
                continue;
            }
        }

        for (double v : {0.0, 1.0}) {
            std::vector<std::pair<int, double>> fixes = node.fixes;
            fixes.emplace_back(branch_var, v);
            NodeEval ev = eval_with(fixes);
            if (ev.status == SolveStatus::iteration_limit) solver_trouble = true;
            if (ev.status != SolveStatus::optimal) continue;
            if (have_inc && ev.bound >= inc_obj - gap()) continue;
            open.push({ev.bound, seq++, std::move(fixes), ev.x});
            if (nodes_solved >= opt.node_budget) {
                budget_hit = true;
                break;
            }
        }
        if (budget_hit) break;
    }

    if (budget_hit || solver_trouble)
        return finish(p, SolveStatus::iteration_limit, have_inc ? inc_x : Eigen::VectorXd(), nodes_solved);
    if (!have_inc) return finish(p, SolveStatus::infeasible, {}, nodes_solved);
    return finish(p, SolveStatus::optimal, inc_x, nodes_solved);
}

namespace {

void write_terms(std::ostream& os, const std::vector<std::pair<std::string, double>>& terms) {
    bool first = true;
    for (const auto& [name, coeff] : terms) {
        if (coeff == 0.0) continue;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", std::abs(coeff));
        os << (coeff < 0 ? (first ? "- " : " - ") : (first ? "" : " + ")) << buf << " " << name;
        first = false;
    }
    if (first) os << "0";
}

}  // namespace

void write_lp(const MathProgram& p, std::ostream& os) {
    auto vname = [&](int j) {
        const auto& v = p.vars[static_cast<size_t>(j)];
        return v.name.empty() ? "x" + std::to_string(j) : v.name;
    };
    os << (p.sense == Sense::minimize ? "Minimize" : "Maximize") << "\n obj: ";
    std::vector<std::pair<std::string, double>> lin;
    for (int j = 0; j < p.num_vars(); ++j)
        if (p.obj_linear[static_cast<size_t>(j)] != 0.0) lin.emplace_back(vname(j), p.obj_linear[static_cast<size_t>(j)]);
    write_terms(os, lin);
    if (p.has_quadratic()) {
        os << " + [ ";
        std::vector<std::pair<std::string, double>> quad;
        for (const auto& q : p.obj_quadratic) {
            std::string nm = (q.i == q.j) ? vname(q.i) + " ^2" : vname(q.i) + " * " + vname(q.j);
            quad.emplace_back(nm, 2.0 * q.coeff);
        }
        write_terms(os, quad);
        os << " ] / 2";
    }
    os << "\nSubject To\n";
    for (size_t r = 0; r < p.constraints.size(); ++r) {
        const auto& c = p.constraints[r];
        os << " " << (c.name.empty() ? "c" + std::to_string(r) : c.name) << ": ";
        std::vector<std::pair<std::string, double>> terms;
        for (const auto& t : c.row) terms.emplace_back(vname(t.var), t.coeff);
        write_terms(os, terms);
        const char* rel = c.rel == Relation::less_equal ? "<=" : (c.rel == Relation::equal ? "=" : ">=");
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", c.rhs);
        os << " " << rel << " " << buf << "\n";
    }
    os << "Bounds\n";
    for (int j = 0; j < p.num_vars(); ++j) {
        const auto& v = p.vars[static_cast<size_t>(j)];
        char lo[64], hi[64];
        std::snprintf(lo, sizeof(lo), "%.17g", v.lb);
        std::snprintf(hi, sizeof(hi), "%.17g", v.ub);
        if (!std::isfinite(v.lb) && !std::isfinite(v.ub)) os << " " << vname(j) << " free\n";
        else if (!std::isfinite(v.lb)) os << " -inf <= " << vname(j) << " <= " << hi << "\n";
        else if (!std::isfinite(v.ub)) os << " " << vname(j) << " >= " << lo << "\n";
        else os << " " << lo << " <= " << vname(j) << " <= " << hi << "\n";
    }
    bool any_bin = false;
    for (const auto& v : p.vars) any_bin = any_bin || v.kind == VarKind::binary;
    if (any_bin) {
        os << "Binaries\n";
        for (int j = 0; j < p.num_vars(); ++j)
            if (p.vars[static_cast<size_t>(j)].kind == VarKind::binary) os << " " << vname(j) << "\n";
    }
    os << "End\n";
}

void write_lp_file(const MathProgram& p, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_lp(p, os);
}

}  // namespace tesim
