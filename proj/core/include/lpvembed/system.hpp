#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpvembed/expression.hpp"
#include "lpvembed/types.hpp"

namespace lpv {

/// A matrix function L(alpha): each entry of the (n_x+n_y) x (n_x+n_u) grid
/// is an arithmetic expression over the named variables. Immutable after
/// parsing; evaluation is side-effect-free.
struct SystemDescription {
    int n_x = 0;
    int n_u = 0;
    int n_y = 0;
    std::vector<std::string> variable_names;
    std::vector<Expr> entries;          // row-major rows() x cols(), zero by default
    std::optional<Bounds> alpha_box;    // per-variable admissible intervals

    int rows() const { return n_x + n_y; }
    int cols() const { return n_x + n_u; }
    int n_alpha() const { return static_cast<int>(variable_names.size()); }

    const Expr& entry(int i, int j) const { return entries[static_cast<std::size_t>(i) * cols() + j]; }
    Expr& entry(int i, int j) { return entries[static_cast<std::size_t>(i) * cols() + j]; }
};

/// Parses a system description document. Format, one item per line:
///   dims: <nx> <nu> <ny>
///   vars: <name> <name> ...
///   bounds: <name> <lo> <hi>          (optional, repeatable)
///   L[i,j] = <expression>             (1-based indices; omitted entries are 0)
/// `#` starts a comment. Errors carry line/column positions.
SystemDescription parse_system(std::string_view text);
SystemDescription parse_system_file(const std::string& path);

/// Canonical text form; parse_system(print_system(s)) reproduces s exactly.
std::string print_system(const SystemDescription& sys);

/// Evaluates one entry at the given point (alias of Expr::eval).
double eval_entry(const Expr& expr, std::span<const double> alpha);

/// Warning counters produced during evaluation; violations of the declared
/// alpha box are recorded here instead of raising, since trajectory
/// generators may overshoot the box slightly.
struct EvalDiagnostics {
    long out_of_box = 0;
};

/// Entrywise evaluation of the grid at alpha.
Matrix eval_matrix(const SystemDescription& sys, const Vector& alpha,
                   EvalDiagnostics* diag = nullptr);

/// Role a variable plays during simulation, decoded from its name:
/// x<k> -> state k-1, u<k> -> input k-1, anything else -> Free.
struct VariableRole {
    enum Kind { State, Input, Free } kind = Free;
    int index = -1;
};
VariableRole variable_role(std::string_view name);

/// Assembles the evaluation point from simulation state and input using the
/// variable roles. Throws DimensionError if any variable is Free or its
/// index exceeds the given vectors.
Vector alpha_from_state_input(const SystemDescription& sys, const Vector& x, const Vector& u);

}  // namespace lpv
