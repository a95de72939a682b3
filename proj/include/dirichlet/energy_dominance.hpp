#pragma once

#include "dirichlet/graph_form.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dirichlet {

/// For every atom (point or cell), whether some basis energy measure charges it.
/// This is all that the finite-scale dominance and minimality criteria see.
struct EnergyPattern {
    std::vector<bool> charged;

    Index size() const { return charged.size(); }
};

/// Pattern of a graph form, read off the indicator basis Gamma(1_e).
EnergyPattern energy_pattern(const GraphForm& form);

/// Pattern from an explicit list of basis energy measures.
EnergyPattern energy_pattern(std::span<const Measure> basis_measures);

enum class EdmWeights {
    dyadic,  ///< a_n = 2^-n
    uniform  ///< a_n = 1/N; same null sets, usable for long families
};

/// m = sum_n a_n Gamma(f_n) with each f_n rescaled to 0 < E(f_n) <= 1.
/// Without a family the indicator basis is used; zero-energy members are
/// dropped. Throws PreconditionError for a form with no energy at all, and for
/// dyadic weights that would underflow (more than 1000 members).
Measure minimal_edm(const GraphForm& form, std::optional<std::span<const Function>> family = {},
                    EdmWeights weights = EdmWeights::dyadic);

/// Same construction from precomputed basis energy measures (any atom space).
Measure minimal_edm(std::span<const Measure> basis_measures, EdmWeights weights = EdmWeights::dyadic);

struct DominanceReport {
    bool dominant = true;
    PointSet violations;  ///< charged by some Gamma(e) but m-null
};

DominanceReport is_energy_dominant(const EnergyPattern& pattern, const Measure& m);
DominanceReport is_energy_dominant(const GraphForm& form, const Measure& m);

struct MinimalityReport {
    bool minimal = true;
    PointSet excess;  ///< m-positive but charged by no Gamma(e)
};

/// Throws NotEnergyDominant when m is not energy dominant.
MinimalityReport is_minimal_edm(const EnergyPattern& pattern, const Measure& m);
MinimalityReport is_minimal_edm(const GraphForm& form, const Measure& m);

/// Energy density dGamma(f)/dm on {m > 0}. Points outside supp(m) are not part
/// of the vector.
struct DensityVector {
    PointSet points;
    std::vector<double> values;

    /// sum_x density(x) m(x)
    double integrate(const Measure& m) const;
    std::optional<double> at(Index x) const;
};

DensityVector energy_density(const GraphForm& form, const Function& f, const Measure& m);

/// The form seen on L2(X, m): points outside supp(m) removed.
struct QuotientForm {
    PointSet retained;
    GraphForm form;

    Function project(const Function& f) const;
    /// Extends a quotient function by zero on the removed points.
    Function lift(const Function& f, Index original_size) const;
};

/// Requires m energy dominant; otherwise throws WellDefinednessError with a
/// witness pair f, g that agree m-a.e. but have different energies.
QuotientForm change_measure(const GraphForm& form, const Measure& m);

struct DensityTriangleReport {
    double max_violation = 0.0;  ///< max of lhs - rhs over supp(m)
    Index violations = 0;
    bool holds = true;
};

/// |Gamma(f)^1/2 - Gamma(g)^1/2| <= Gamma(f-g)^1/2 pointwise for densities w.r.t. m.
DensityTriangleReport density_triangle_check(const GraphForm& form, const Function& f,
                                             const Function& g, const Measure& m);

/// f -> dGamma(f)/dm for a fixed energy dominant m.
class DensityOperator {
public:
    DensityOperator(GraphForm form, Measure m) : form_(std::move(form)), m_(std::move(m)) {}
    DensityVector operator()(const Function& f) const { return energy_density(form_, f, m_); }

private:
    GraphForm form_;
    Measure m_;
};

struct CarreDuChampReport {
    bool admits = false;
    DominanceReport dominance;
    std::optional<DensityOperator> density;
};

CarreDuChampReport carre_du_champ_check(const GraphForm& form, const Measure& m);

}  // namespace dirichlet
