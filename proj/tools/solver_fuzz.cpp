// Temporary randomized stress for the solver core:
//  - solve_mixed vs brute-force enumeration over binary assignments
//  - emits random LPs + our solutions for an external cross-check
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "tesim/mathprog.hpp"

using namespace tesim;

static MathProgram random_program(std::mt19937& rng, bool with_quad) {
    std::uniform_int_distribution<int> nb_dist(0, 6), nc_dist(1, 8), nr_dist(1, 10);
    std::uniform_real_distribution<double> coef(-3.0, 3.0), rhs_d(-2.0, 4.0);
    std::uniform_int_distribution<int> rel_d(0, 2), pick(0, 99);

    MathProgram p;
    int nb = nb_dist(rng), nc = nc_dist(rng);
    for (int i = 0; i < nb; ++i) p.add_var("b" + std::to_string(i), 0, 1, VarKind::binary);
    for (int i = 0; i < nc; ++i) {
        double lo = -2.0 + 4.0 * (pick(rng) / 99.0);
        double hi = lo + 4.0 * (pick(rng) / 99.0);
        p.add_var("x" + std::to_string(i), lo, hi);
    }
    for (int j = 0; j < p.num_vars(); ++j) p.set_obj(j, coef(rng));
    if (with_quad) {
        // PSD: diag-dominant positive diagonal on continuous vars
        for (int i = 0; i < nc; ++i) p.add_quad_obj(nb + i, nb + i, 0.5 + std::abs(coef(rng)));
    }
    int nr = nr_dist(rng);
    for (int r = 0; r < nr; ++r) {
        std::vector<LinTerm> row;
        for (int j = 0; j < p.num_vars(); ++j)
            if (pick(rng) < 60) row.push_back({j, coef(rng)});
        if (row.empty()) row.push_back({0, 1.0});
        p.add_constraint(row, static_cast<Relation>(rel_d(rng)), rhs_d(rng));
    }
    if (pick(rng) < 30) p.sense = Sense::maximize;
    return p;
}

// enumeration oracle: fix every binary combination, solve continuous
static SolveResult enumerate_oracle(const MathProgram& p) {
    auto bins = p.binary_indices();
    SolveResult best;
    best.status = SolveStatus::infeasible;
    const double sgn = p.sense == Sense::minimize ? 1.0 : -1.0;
    for (long mask = 0; mask < (1L << bins.size()); ++mask) {
        MathProgram q = p;
        for (size_t k = 0; k < bins.size(); ++k) {
            double v = (mask >> k) & 1 ? 1.0 : 0.0;
            q.vars[static_cast<size_t>(bins[k])].lb = v;
            q.vars[static_cast<size_t>(bins[k])].ub = v;
        }
        auto r = solve_continuous(q);
        if (r.status == SolveStatus::unbounded) return r;
        if (r.status != SolveStatus::optimal) continue;
        if (best.status != SolveStatus::optimal || sgn * r.objective < sgn * best.objective) best = r;
    }
    return best;
}

int main() {
    std::mt19937 rng(42);
    int fails = 0, checked = 0, infeas = 0;
    for (int it = 0; it < 600; ++it) {
        MathProgram p = random_program(rng, it % 3 == 0);
        auto oracle = enumerate_oracle(p);
        auto got = solve_mixed(p);
        if (oracle.status == SolveStatus::unbounded) continue;  // enumeration can't certify MILP bounds cleanly
        if (oracle.status != got.status) {
            if (got.status == SolveStatus::unbounded && oracle.status == SolveStatus::infeasible) continue;
            std::printf("iter %d status mismatch oracle=%s got=%s\n", it, to_string(oracle.status), to_string(got.status));
            ++fails;
            continue;
        }
        if (oracle.status == SolveStatus::infeasible) {
            ++infeas;
            continue;
        }
        double denom = std::max(1.0, std::abs(oracle.objective));
        if (std::abs(oracle.objective - got.objective) / denom > 1e-6) {
            std::printf("iter %d obj mismatch oracle=%.12g got=%.12g\n", it, oracle.objective, got.objective);
            std::ofstream os("/tmp/bad_" + std::to_string(it) + ".lp");
            write_lp(p, os);
            ++fails;
        }
        double viol = max_constraint_violation(p, got.values);
        if (viol > 1e-7) {
            std::printf("iter %d feasibility violation %.3g\n", it, viol);
            ++fails;
        }
        ++checked;
        // determinism: re-solve must match bitwise
        auto again = solve_mixed(p);
        if (again.status != got.status || again.values != got.values) {
            std::printf("iter %d nondeterministic result\n", it);
            ++fails;
        }
    }
    std::printf("checked=%d infeasible=%d fails=%d\n", checked, infeas, fails);

    // dump LPs for external cross-check
    std::mt19937 rng2(7);
    std::ofstream sol("/tmp/lp_solutions.txt");
    for (int it = 0; it < 40; ++it) {
        MathProgram p = random_program(rng2, false);
        for (auto& v : p.vars) v.kind = VarKind::continuous;  // pure LP
        auto r = solve_continuous(p);
        std::ofstream os("/tmp/xcheck_" + std::to_string(it) + ".lp");
        write_lp(p, os);
        sol << it << " " << to_string(r.status) << " " << (r.status == SolveStatus::optimal ? r.objective : 0.0) << "\n";
    }
    return fails ? 1 : 0;
}
