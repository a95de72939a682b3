#include "dirichlet/capacity.hpp"

#include "dirichlet/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dirichlet {

namespace {

/// Components of the graph restricted to `alive` (others get label n).
std::vector<Index> label_components(const GraphForm& form, const std::vector<bool>& alive) {
    const Index n = form.size();
    std::vector<Index> label(n, n);
    Index next = 0;
    std::vector<Index> stack;
    for (Index s = 0; s < n; ++s) {
        if (!alive[s] || label[s] != n) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const Index x = stack.back();
            stack.pop_back();
            for (Index y : form.neighbors(x))
                if (alive[y] && label[y] == n) {
                    label[y] = next;
                    stack.push_back(y);
                }
        }
        ++next;
    }
    return label;
}

/// Diagonal part of the quadratic form besides the Laplacian.
Eigen::VectorXd extra_diagonal(const GraphForm& form, CapacityKind kind) {
    Eigen::VectorXd d = form.killing();
    if (kind == CapacityKind::one) d += form.base_measure();
    return d;
}

/// Minimizer of u^T M u with u = 1 on `fixed`, the rest free.
Function solve_fixed(const GraphForm& form, const Eigen::VectorXd& diag, const std::vector<bool>& fixed) {
    const Index n = form.size();
    Function u = Function::Zero(static_cast<Eigen::Index>(n));
    std::vector<bool> free(n);
    for (Index x = 0; x < n; ++x) {
        free[x] = !fixed[x];
        if (fixed[x]) u[static_cast<Eigen::Index>(x)] = 1.0;
    }
    // A free component that touches neither the fixed set nor any diagonal
    // mass has a constant null direction; u = 0 there is the minimal choice.
    const std::vector<Index> label = label_components(form, free);
    std::vector<bool> grounded(n, false);
    for (Index x = 0; x < n; ++x) {
        if (!free[x]) continue;
        bool g = diag[static_cast<Eigen::Index>(x)] > 0.0;
        for (Index y : form.neighbors(x)) g = g || fixed[y];
        if (g) grounded[label[x]] = true;
    }
    std::vector<Index> position(n, n);
    Index m = 0;
    for (Index x = 0; x < n; ++x)
        if (free[x] && grounded[label[x]]) position[x] = m++;
    if (m == 0) return u;

    std::vector<Eigen::Triplet<double>> entries;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (Index x = 0; x < n; ++x) {
        const Index px = position[x];
        if (px == n) continue;
        double dd = diag[static_cast<Eigen::Index>(x)] + form.degree(x);
        entries.emplace_back(px, px, dd);
        const auto nb = form.neighbors(x);
        const auto cs = form.row_conductances(x);
        for (Index k = 0; k < nb.size(); ++k) {
            if (fixed[nb[k]])
                rhs[static_cast<Eigen::Index>(px)] += cs[k];
            else if (position[nb[k]] != n)
                entries.emplace_back(px, position[nb[k]], -cs[k]);
        }
    }
    Eigen::SparseMatrix<double> M(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    M.setFromTriplets(entries.begin(), entries.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(M);
    if (ldlt.info() != Eigen::Success) throw InternalError("equilibrium system factorization failed");
    const Eigen::VectorXd v = ldlt.solve(rhs);
    for (Index x = 0; x < n; ++x)
        if (position[x] != n) u[static_cast<Eigen::Index>(x)] = v[static_cast<Eigen::Index>(position[x])];
    return u;
}

/// (M u)(x) for the quadratic form u^T M u.
double apply_row(const GraphForm& form, const Eigen::VectorXd& diag, const Function& u, Index x) {
    const double ux = u[static_cast<Eigen::Index>(x)];
    double s = diag[static_cast<Eigen::Index>(x)] * ux;
    const auto nb = form.neighbors(x);
    const auto cs = form.row_conductances(x);
    for (Index k = 0; k < nb.size(); ++k) s += cs[k] * (ux - u[static_cast<Eigen::Index>(nb[k])]);
    return s;
}

EquilibriumReport equilibrium(const GraphForm& form, const PointSet& set, CapacityKind kind) {
    const Index n = form.size();
    if (set.empty()) throw InputError("capacity of the empty set requested; A must be nonempty");
    for (Index x : set)
        if (x >= n) throw InputError("point " + std::to_string(x) + " outside the form");
    const Eigen::VectorXd diag = extra_diagonal(form, kind);
    const std::vector<bool> in_a = to_mask(n, set);
    std::vector<bool> fixed = in_a;

    EquilibriumReport r;
    r.kind = kind;
    r.set = from_mask(in_a);
    constexpr Index kMaxRounds = 64;
    for (Index round = 0;; ++round) {
        r.potential = solve_fixed(form, diag, fixed);
        // Release the most negative multiplier; clip released points that dip below 1.
        double worst = 0.0;
        Index worst_at = n;
        bool clipped = false;
        for (Index x : r.set) {
            if (!fixed[x]) {
                if (r.potential[static_cast<Eigen::Index>(x)] < 1.0 - 1e-12) {
                    fixed[x] = true;
                    clipped = true;
                }
                continue;
            }
            const double lambda = apply_row(form, diag, r.potential, x);
            const double scale = diag[static_cast<Eigen::Index>(x)] + form.degree(x);
            if (lambda < worst - 1e-12 * std::max(scale, 1.0)) {
                worst = lambda;
                worst_at = x;
            }
        }
        if (clipped) {
            ++r.resolves;
            if (round >= kMaxRounds) throw InternalError("active-set iteration did not settle");
            continue;
        }
        if (worst_at == n) break;
        fixed[worst_at] = false;
        ++r.resolves;
        if (round >= kMaxRounds) throw InternalError("active-set iteration did not settle");
    }

    r.multipliers.reserve(r.set.size());
    for (Index x : r.set) r.multipliers.push_back(fixed[x] ? apply_row(form, diag, r.potential, x) : 0.0);
    double lo = r.potential.minCoeff(), hi = r.potential.maxCoeff();
    r.kkt_ok = lo >= -1e-12 && hi <= 1.0 + 1e-12;
    for (double l : r.multipliers) r.kkt_ok = r.kkt_ok && l >= -1e-10;
    r.value = kind == CapacityKind::one ? energy_1(form, r.potential) : energy(form, r.potential);
    if (!r.kkt_ok) throw InternalError("equilibrium potential fails the KKT or [0,1] check");
    return r;
}

}  // namespace

std::vector<Index> components(const GraphForm& form) {
    return label_components(form, std::vector<bool>(form.size(), true));
}

bool is_transient(const GraphForm& form) {
    const std::vector<Index> label = components(form);
    std::vector<bool> killed(form.size(), false);
    for (Index x = 0; x < form.size(); ++x)
        if (form.killing()[static_cast<Eigen::Index>(x)] > 0.0) killed[label[x]] = true;
    for (Index x = 0; x < form.size(); ++x)
        if (!killed[label[x]]) return false;
    return true;
}

bool is_irreducible(const GraphForm& form) {
    const std::vector<Index> label = components(form);
    return std::all_of(label.begin(), label.end(), [](Index l) { return l == 0; });
}

EquilibriumReport capacity(const GraphForm& form, const PointSet& set) {
    EquilibriumReport r = equilibrium(form, set, CapacityKind::one);
    r.note = "cap_1 with pointwise constraint u >= 1 on A";
    return r;
}

EquilibriumReport capacity0(const GraphForm& form, const PointSet& set) {
    if (!is_transient(form))
        throw PreconditionError("transience required: some connected component carries no killing, so "
                                "constants there have zero energy");
    EquilibriumReport r = equilibrium(form, set, CapacityKind::zero);
    r.note = "cap_0; transience checked as trivial energy kernel";
    return r;
}

PointSet zero_capacity_points(const GraphForm& form) {
    const std::vector<Index> label = components(form);
    std::vector<bool> charged(form.size(), false);
    for (Index x = 0; x < form.size(); ++x) {
        const auto i = static_cast<Eigen::Index>(x);
        if (form.killing()[i] > 0.0 || form.base_measure()[i] > 0.0) charged[label[x]] = true;
    }
    PointSet out;
    for (Index x = 0; x < form.size(); ++x)
        if (!charged[label[x]]) out.push_back(x);
    return out;
}

MeasureSplit split_measure(const GraphForm& form, const Measure& m) {
    if (m.size() != form.size()) throw InputError("measure and form sizes differ");
    MeasureSplit s;
    s.null_set = zero_capacity_points(form);
    std::vector<bool> in_null = to_mask(form.size(), s.null_set);
    std::vector<bool> positive(form.size());
    for (Index x = 0; x < form.size(); ++x) positive[x] = !in_null[x];
    s.m0 = m.restricted_to(positive);
    s.m1 = m.restricted_to(in_null);
    return s;
}

M0DominanceReport energy_dominance_of_m0(const GraphForm& form, const Measure& m) {
    const DominanceReport d = is_energy_dominant(form, m);
    if (!d.dominant)
        throw PreconditionError("m is not energy dominant at point " + std::to_string(d.violations.front()));
    M0DominanceReport r;
    r.split = split_measure(form, m);
    const std::vector<bool> in_null = to_mask(form.size(), r.split.null_set);
    // Gamma(f) charges no zero-capacity point: checked on the indicator basis.
    for (Index e = 0; e < form.size(); ++e) {
        double mass = 0.0;
        for (const auto& [x, g] : indicator_energy_measure(form, e))
            if (in_null[x]) mass += g;
        r.gamma_on_null_set = std::max(r.gamma_on_null_set, mass);
    }
    r.m0_dominant = is_energy_dominant(form, r.split.m0).dominant;
    return r;
}

QuasiSupportReport full_quasi_support_check(const GraphForm& form, const Measure& m) {
    if (m.size() != form.size()) throw InputError("measure and form sizes differ");
    QuasiSupportReport r;
    r.irreducible = is_irreducible(form);
    r.transient = is_transient(form);
    if (!r.irreducible && !r.transient)
        throw PreconditionError("hypothesis violated: form is neither irreducible (connected) nor transient");
    const std::vector<bool> in_null = to_mask(form.size(), zero_capacity_points(form));
    for (Index x = 0; x < form.size(); ++x)
        if (!in_null[x] && !m.charges(x)) r.missing.push_back(x);
    r.full = r.missing.empty();
    return r;
}

ZeroLevelReport zero_level_check(const GraphForm& form, const Function& u) {
    require_dimension(form, u, "u");
    const Measure gamma = energy_measure(form, u);
    ZeroLevelReport r;
    Index witness = form.size();
    for (Index x = 0; x < form.size(); ++x) {
        const auto i = static_cast<Eigen::Index>(x);
        double gj = 0.0;
        const auto nb = form.neighbors(x);
        const auto cs = form.row_conductances(x);
        for (Index k = 0; k < nb.size(); ++k) {
            const double d = u[i] - u[static_cast<Eigen::Index>(nb[k])];
            gj += 0.5 * cs[k] * d * d;
        }
        if (u[i] != 0.0) {
            r.gamma_nonzero_set += gamma[x];
            r.jump_nonzero_set += gj;
            if (gamma[x] > 0.0 && witness == form.size()) witness = x;
        } else {
            r.gamma_zero_set += gamma[x];
            r.jump_zero_set += gj;
        }
    }
    if (witness != form.size())
        throw PreconditionError("hypothesis fails: Gamma(u)({u != 0}) = " + std::to_string(r.gamma_nonzero_set) +
                                " > 0, charged at point " + std::to_string(witness));
    r.holds = r.gamma_zero_set == 0.0 && r.jump_zero_set <= r.jump_nonzero_set;
    return r;
}

GraphForm augmented_form(const GraphForm& form, const Measure& m) {
    if (m.size() != form.size()) throw InputError("measure and form sizes differ");
    return form.with_killing(form.killing() + m.weights());
}

WeakCapacityReport weak_cap_inequality_check(const GraphForm& form, const Function& u, double eps,
                                             const Measure& m) {
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    require_dimension(form, u, "u");
    const GraphForm aug = augmented_form(form, m);
    if (!is_transient(aug))
        throw PreconditionError("augmented form E^m is not transient; m misses a whole component");
    WeakCapacityReport r;
    for (Index x = 0; x < form.size(); ++x)
        if (std::abs(u[static_cast<Eigen::Index>(x)]) > eps) r.level_set.push_back(x);
    r.rhs = energy(aug, u) / (eps * eps);
    r.lhs = r.level_set.empty() ? 0.0 : capacity0(aug, r.level_set).value;
    r.holds = approx_le(r.lhs, r.rhs);
    return r;
}

}  // namespace dirichlet
