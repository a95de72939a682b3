#pragma once

#include "dirichlet/energy_dominance.hpp"
#include "dirichlet/graph_form.hpp"

#include <string>
#include <vector>

namespace dirichlet {

enum class CapacityKind { one, zero };

/// Minimizer of E_1 (or E) over {u : u >= 1 on A}. On a finite space the
/// quasi-everywhere notions reduce to pointwise ones, so the constraint is
/// imposed at every point of A.
struct EquilibriumReport {
    CapacityKind kind = CapacityKind::one;
    double value = 0.0;
    Function potential;
    PointSet set;
    /// KKT multipliers on A, (M u)(x) with M the quadratic form's matrix.
    std::vector<double> multipliers;
    Index resolves = 0;  ///< clip-and-resolve rounds beyond the first solve
    bool kkt_ok = true;
    std::string note;
};

/// cap_1(A). Throws InputError for an empty or out-of-range A.
EquilibriumReport capacity(const GraphForm& form, const PointSet& set);

/// cap_0(A) with E in place of E_1. Throws PreconditionError unless the form is
/// transient (trivial energy kernel).
EquilibriumReport capacity0(const GraphForm& form, const PointSet& set);

/// E(f) = 0 implies f = 0: every connected component carries killing.
bool is_transient(const GraphForm& form);
/// Connected conductance graph.
bool is_irreducible(const GraphForm& form);

/// Connected components of the conductance graph, labelled 0.. in order of the
/// smallest member.
std::vector<Index> components(const GraphForm& form);

/// {x : cap({x}) = 0}: the component of x carries no base measure and no killing.
PointSet zero_capacity_points(const GraphForm& form);

struct MeasureSplit {
    Measure m0;  ///< on positive-capacity points
    Measure m1;  ///< on zero-capacity points
    PointSet null_set;
};

MeasureSplit split_measure(const GraphForm& form, const Measure& m);

struct M0DominanceReport {
    bool m0_dominant = true;
    double gamma_on_null_set = 0.0;  ///< max over basis e of Gamma(1_e)(N)
    MeasureSplit split;
};

/// Throws PreconditionError when m itself is not energy dominant.
M0DominanceReport energy_dominance_of_m0(const GraphForm& form, const Measure& m);

struct QuasiSupportReport {
    bool full = true;
    PointSet missing;  ///< positive-capacity points outside supp(m)
    bool irreducible = false;
    bool transient = false;
};

/// Throws PreconditionError when the form is neither irreducible nor transient.
QuasiSupportReport full_quasi_support_check(const GraphForm& form, const Measure& m);

struct ZeroLevelReport {
    double gamma_nonzero_set = 0.0;  ///< Gamma(u)({u != 0})
    double gamma_zero_set = 0.0;     ///< Gamma(u)({u = 0})
    double jump_zero_set = 0.0;      ///< Gamma_j(u)({u = 0})
    double jump_nonzero_set = 0.0;   ///< Gamma_j(u)({u != 0})
    bool holds = true;
};

/// Throws PreconditionError naming a point where Gamma(u) charges {u != 0}.
ZeroLevelReport zero_level_check(const GraphForm& form, const Function& u);

/// E^m: the form with m added to the killing.
GraphForm augmented_form(const GraphForm& form, const Measure& m);

struct WeakCapacityReport {
    PointSet level_set;  ///< {|u| > eps}
    double lhs = 0.0;    ///< cap_0^m of the level set
    double rhs = 0.0;    ///< eps^-2 E^m(u)
    bool holds = true;
};

/// Throws InputError for eps <= 0 and PreconditionError when E^m is not transient.
WeakCapacityReport weak_cap_inequality_check(const GraphForm& form, const Function& u, double eps,
                                             const Measure& m);

}  // namespace dirichlet
