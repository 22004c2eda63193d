// Temporary bring-up harness for the solver core.
#include <cstdio>

#include "tesim/mathprog.hpp"

using namespace tesim;

static int failures = 0;

static void expect_near(const char* what, double got, double want, double tol = 1e-7) {
    if (!(std::abs(got - want) <= tol)) {
        std::printf("FAIL %s: got %.12g want %.12g\n", what, got, want);
        ++failures;
    } else {
        std::printf("ok   %s: %.12g\n", what, got);
    }
}

int main() {
    {
        // min x s.t. x >= 3, x <= 10
        MathProgram p;
        int x = p.add_var("x", -1e30, 1e30);
        p.set_obj(x, 1.0);
        p.add_constraint({{x, 1.0}}, Relation::greater_equal, 3.0);
        p.add_constraint({{x, 1.0}}, Relation::less_equal, 10.0);
        auto r = solve_continuous(p);
        expect_near("lp min x", r.objective, 3.0);
    }
    {
        // min (x-2)^2 over [0,10]
        MathProgram p;
        int x = p.add_var("x", 0.0, 10.0);
        p.add_quad_obj(x, x, 1.0);
        p.set_obj(x, -4.0);
        p.obj_constant = 4.0;
        auto r = solve_continuous(p);
        expect_near("qp obj", r.objective, 0.0);
        expect_near("qp x", r.values[0], 2.0);
    }
    {
        // infeasible: x+y >= 1, x <= 0.2, y <= 0.2
        MathProgram p;
        int x = p.add_var("x", 0.0, 0.2);
        int y = p.add_var("y", 0.0, 0.2);
        p.set_obj(x, 1.0);
        p.set_obj(y, 1.0);
        p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::greater_equal, 1.0);
        auto r = solve_continuous(p);
        std::printf("%s infeasible-case status=%s\n",
                    r.status == SolveStatus::infeasible ? "ok  " : "FAIL", to_string(r.status));
        if (r.status != SolveStatus::infeasible) ++failures;
    }
    {
        // max x1+x2 s.t. x1+x2 <= 1.5, binaries
        MathProgram p;
        int a = p.add_var("a", 0, 1, VarKind::binary);
        int b = p.add_var("b", 0, 1, VarKind::binary);
        p.sense = Sense::maximize;
        p.set_obj(a, 1.0);
        p.set_obj(b, 1.0);
        p.add_constraint({{a, 1.0}, {b, 1.0}}, Relation::less_equal, 1.5);
        auto r = solve_mixed(p);
        expect_near("milp max", r.objective, 1.0);
    }
    {
        // min 2a+b s.t. a+b >= 1, binaries
        MathProgram p;
        int a = p.add_var("a", 0, 1, VarKind::binary);
        int b = p.add_var("b", 0, 1, VarKind::binary);
        p.set_obj(a, 2.0);
        p.set_obj(b, 1.0);
        p.add_constraint({{a, 1.0}, {b, 1.0}}, Relation::greater_equal, 1.0);
        auto r = solve_mixed(p);
        expect_near("milp min obj", r.objective, 1.0);
        expect_near("milp min a", r.values[0], 0.0);
        expect_near("milp min b", r.values[1], 1.0);
    }
    {
        // degenerate-QP: min (x+y-1)^2 + 0.1 y  over box [0,2]^2
        MathProgram p;
        int x = p.add_var("x", 0, 2);
        int y = p.add_var("y", 0, 2);
        p.add_quad_obj(x, x, 1.0);
        p.add_quad_obj(y, y, 1.0);
        p.add_quad_obj(x, y, 2.0);
        p.set_obj(x, -2.0);
        p.add_obj(y, -2.0);
        p.add_obj(y, 0.1);
        p.obj_constant = 1.0;
        auto r = solve_continuous(p);
        expect_near("degen qp obj", r.objective, 0.0, 1e-6);
        expect_near("degen qp y", r.values[1], 0.0, 1e-6);
        expect_near("degen qp x", r.values[0], 1.0, 1e-6);
    }
    std::printf(failures ? "FAILURES: %d\n" : "all ok\n", failures);
    return failures ? 1 : 0;
}
