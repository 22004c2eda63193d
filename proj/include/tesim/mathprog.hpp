// Backend-neutral linear / quadratic / mixed-integer program description and
// the bundled reference solver (dense simplex, active-set QP, branch & bound).
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tesim {

enum class VarKind { continuous, binary };
enum class Relation { less_equal, equal, greater_equal };
enum class Sense { minimize, maximize };

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(SolveStatus s);

struct Variable {
    std::string name;
    double lb = 0.0;
    double ub = 0.0;
    VarKind kind = VarKind::continuous;
};

struct LinTerm {
    int var = 0;
    double coeff = 0.0;
};

struct Constraint {
    std::vector<LinTerm> row;
    Relation rel = Relation::equal;
    double rhs = 0.0;
    std::string name;
};

// Objective contribution coeff * x_i * x_j with i <= j. The assembled Hessian
// must be positive semidefinite.
struct QuadTerm {
    int i = 0;
    int j = 0;
    double coeff = 0.0;
};

struct MathProgram {
    std::vector<Variable> vars;
    std::vector<double> obj_linear;
    std::vector<QuadTerm> obj_quadratic;
    double obj_constant = 0.0;
    Sense sense = Sense::minimize;
    std::vector<Constraint> constraints;

    int add_var(std::string name, double lb, double ub, VarKind kind = VarKind::continuous);
    void set_obj(int var, double coeff);
    void add_obj(int var, double coeff);
    void add_quad_obj(int i, int j, double coeff);
    int add_constraint(std::vector<LinTerm> row, Relation rel, double rhs, std::string name = "");

    bool has_quadratic() const { return !obj_quadratic.empty(); }
    int num_vars() const { return static_cast<int>(vars.size()); }
    std::vector<int> binary_indices() const;
};

struct SolveOptions {
    double feas_tol = 1e-7;      // absolute constraint feasibility
    double int_tol = 1e-6;       // binary integrality
    double rel_gap = 1e-6;       // branch & bound relative optimality gap
    long node_budget = 100000;   // branch & bound node limit
    long max_pivots = 0;         // simplex pivot limit, 0 = automatic
    bool root_rounding = true;   // rounding heuristic at the root node
};

struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<double> values;
    double objective = 0.0;
    long nodes = 0;  // branch & bound nodes solved (0 for pure continuous)
};

// Solves a program without binary variables (binaries fixed by bounds are
// allowed). LP path when no quadratic objective is present.
SolveResult solve_continuous(const MathProgram& p, const SolveOptions& opt = {});

// Branch & bound over the binary variables. Deterministic: branches on the
// lowest-index fractional binary, explores the 0-branch first, selects nodes
// best-first on bound with ties by creation order.
SolveResult solve_mixed(const MathProgram& p, const SolveOptions& opt = {});

// Debug dump in CPLEX LP text format for cross-checking with external tools.
void write_lp(const MathProgram& p, std::ostream& os);
void write_lp_file(const MathProgram& p, const std::string& path);

double objective_value(const MathProgram& p, const std::vector<double>& x);
double max_constraint_violation(const MathProgram& p, const std::vector<double>& x);

}  // namespace tesim
