#include "dirichlet/energy_dominance.hpp"

#include "dirichlet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace dirichlet {

namespace {

constexpr Index kMaxDyadicMembers = 1000;

double weight_for(Index member, Index count, EdmWeights weights) {
    if (weights == EdmWeights::uniform) return 1.0 / static_cast<double>(count);
    return std::ldexp(1.0, -static_cast<int>(member + 1));
}

void check_dyadic(Index count, EdmWeights weights) {
    if (weights == EdmWeights::dyadic && count > kMaxDyadicMembers)
        throw PreconditionError("dyadic weights 2^-n underflow for " + std::to_string(count) +
                                " family members; use uniform weights");
}

NotEnergyDominant not_dominant(Index x) {
    return NotEnergyDominant(x, "measure is not energy dominant: Gamma charges point " +
                                    std::to_string(x) + " where m vanishes");
}

}  // namespace

EnergyPattern energy_pattern(const GraphForm& form) {
    EnergyPattern p;
    p.charged.assign(form.size(), false);
    for (Index e = 0; e < form.size(); ++e)
        for (const auto& [x, mass] : indicator_energy_measure(form, e))
            if (mass > 0.0) p.charged[x] = true;
    return p;
}

EnergyPattern energy_pattern(std::span<const Measure> basis_measures) {
    EnergyPattern p;
    if (basis_measures.empty()) return p;
    p.charged.assign(basis_measures.front().size(), false);
    for (const Measure& g : basis_measures) {
        if (g.size() != p.size()) throw InputError("basis measures have different lengths");
        for (Index x = 0; x < g.size(); ++x)
            if (g.charges(x)) p.charged[x] = true;
    }
    return p;
}

Measure minimal_edm(const GraphForm& form, std::optional<std::span<const Function>> family,
                    EdmWeights weights) {
    if (!form.has_energy())
        throw PreconditionError("degenerate form, no energy-dominant measure with nonempty support");
    const Index n = form.size();
    Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));

    if (!family) {
        PointSet members;
        for (Index e = 0; e < n; ++e)
            if (form.degree(e) + form.killing()[static_cast<Eigen::Index>(e)] > 0.0) members.push_back(e);
        check_dyadic(members.size(), weights);
        for (Index k = 0; k < members.size(); ++k) {
            const Index e = members[k];
            const double energy_e = form.degree(e) + form.killing()[static_cast<Eigen::Index>(e)];
            const double scale = energy_e > 1.0 ? 1.0 / energy_e : 1.0;  // Gamma is quadratic
            const double a = weight_for(k, members.size(), weights);
            for (const auto& [x, mass] : indicator_energy_measure(form, e))
                m[static_cast<Eigen::Index>(x)] += a * scale * mass;
        }
        Measure result(std::move(m));
        const EnergyPattern pattern = energy_pattern(form);
        for (Index x = 0; x < n; ++x)
            if (result.charges(x) != pattern.charged[x])
                throw InternalError("minimal_edm null set differs from the basis pattern at point " +
                                    std::to_string(x));
        return result;
    }

    std::vector<Measure> gammas;
    for (const Function& f : *family) {
        require_dimension(form, f, "family member");
        const double e = energy(form, f);
        if (!(e > 0.0)) continue;
        const Function g = e > 1.0 ? Function(f / std::sqrt(e)) : f;
        gammas.push_back(energy_measure(form, g));
    }
    if (gammas.empty())
        throw PreconditionError("degenerate family, no member with positive energy");
    return minimal_edm(gammas, weights);
}

Measure minimal_edm(std::span<const Measure> basis_measures, EdmWeights weights) {
    if (basis_measures.empty()) throw PreconditionError("empty basis");
    check_dyadic(basis_measures.size(), weights);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_measures.front().size()));
    for (Index k = 0; k < basis_measures.size(); ++k) {
        if (basis_measures[k].size() != static_cast<Index>(m.size()))
            throw InputError("basis measures have different lengths");
        m += weight_for(k, basis_measures.size(), weights) * basis_measures[k].weights();
    }
    if (!(m.sum() > 0.0))
        throw PreconditionError("degenerate form, no energy-dominant measure with nonempty support");
    return Measure(std::move(m));
}

DominanceReport is_energy_dominant(const EnergyPattern& pattern, const Measure& m) {
    if (m.size() != pattern.size()) throw InputError("measure and space sizes differ");
    DominanceReport r;
    for (Index x = 0; x < m.size(); ++x)
        if (pattern.charged[x] && !m.charges(x)) r.violations.push_back(x);
    r.dominant = r.violations.empty();
    return r;
}

DominanceReport is_energy_dominant(const GraphForm& form, const Measure& m) {
    return is_energy_dominant(energy_pattern(form), m);
}

MinimalityReport is_minimal_edm(const EnergyPattern& pattern, const Measure& m) {
    const DominanceReport d = is_energy_dominant(pattern, m);
    if (!d.dominant) throw not_dominant(d.violations.front());
    MinimalityReport r;
    for (Index x = 0; x < m.size(); ++x)
        if (m.charges(x) && !pattern.charged[x]) r.excess.push_back(x);
    r.minimal = r.excess.empty();
    return r;
}

MinimalityReport is_minimal_edm(const GraphForm& form, const Measure& m) {
    return is_minimal_edm(energy_pattern(form), m);
}

double DensityVector::integrate(const Measure& m) const {
    double s = 0.0;
    for (Index k = 0; k < points.size(); ++k) s += values[k] * m[points[k]];
    return s;
}

std::optional<double> DensityVector::at(Index x) const {
    const auto it = std::lower_bound(points.begin(), points.end(), x);
    if (it == points.end() || *it != x) return std::nullopt;
    return values[static_cast<Index>(it - points.begin())];
}

DensityVector energy_density(const GraphForm& form, const Function& f, const Measure& m) {
    require_dimension(form, f, "f");
    if (m.size() != form.size()) throw InputError("measure and form sizes differ");
    const Measure gamma = energy_measure(form, f);
    DensityVector d;
    for (Index x = 0; x < form.size(); ++x) {
        if (m.charges(x)) {
            d.points.push_back(x);
            d.values.push_back(gamma[x] / m[x]);
        } else if (gamma[x] > 0.0) {
            throw not_dominant(x);
        }
    }
    return d;
}

Function QuotientForm::project(const Function& f) const {
    Function p(static_cast<Eigen::Index>(retained.size()));
    for (Index k = 0; k < retained.size(); ++k)
        p[static_cast<Eigen::Index>(k)] = f[static_cast<Eigen::Index>(retained[k])];
    return p;
}

Function QuotientForm::lift(const Function& f, Index original_size) const {
    Function l = Function::Zero(static_cast<Eigen::Index>(original_size));
    for (Index k = 0; k < retained.size(); ++k)
        l[static_cast<Eigen::Index>(retained[k])] = f[static_cast<Eigen::Index>(k)];
    return l;
}

QuotientForm change_measure(const GraphForm& form, const Measure& m) {
    if (m.size() != form.size()) throw InputError("measure and form sizes differ");
    const Index n = form.size();

    // Structural well-definedness: every m-null point must carry no energy terms.
    for (Index x = 0; x < n; ++x) {
        if (!m.charges(x) && form.is_active(x)) {
            Function f = indicator(n, x);
            Function g = Function::Zero(static_cast<Eigen::Index>(n));
            const double ef = energy(form, f);
            throw WellDefinednessError(std::move(f), std::move(g), ef, 0.0,
                                       "form does not descend to L2(m): f = 1_" + std::to_string(x) +
                                           " and g = 0 agree m-a.e. but E(f) = " + std::to_string(ef) +
                                           " != 0 = E(g)");
        }
    }

    QuotientForm q;
    q.retained = m.support();
    std::vector<Index> position(n, n);
    for (Index k = 0; k < q.retained.size(); ++k) position[q.retained[k]] = k;
    std::vector<Edge> edges;
    for (const Edge& e : form.edges()) edges.push_back({position[e.a], position[e.b], e.weight});
    const auto r = static_cast<Eigen::Index>(q.retained.size());
    Eigen::VectorXd killing(r), measure(r);
    for (Index k = 0; k < q.retained.size(); ++k) {
        killing[static_cast<Eigen::Index>(k)] = form.killing()[static_cast<Eigen::Index>(q.retained[k])];
        measure[static_cast<Eigen::Index>(k)] = m[q.retained[k]];
    }
    q.form = GraphForm::from_edges(q.retained.size(), edges, killing, measure);

    // Sampled cross-check of the structural argument.
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Function f(static_cast<Eigen::Index>(n)), g(static_cast<Eigen::Index>(n));
        for (Index x = 0; x < n; ++x) {
            f[static_cast<Eigen::Index>(x)] = u(rng);
            g[static_cast<Eigen::Index>(x)] = m.charges(x) ? f[static_cast<Eigen::Index>(x)] : u(rng);
        }
        const double ef = energy(form, f);
        const double eg = energy(form, g);
        const double eq = energy(q.form, q.project(f));
        if (!approx_equal(ef, eg) || !approx_equal(ef, eq))
            throw InternalError("sampled well-definedness check failed after structural check passed");
    }
    return q;
}

DensityTriangleReport density_triangle_check(const GraphForm& form, const Function& f,
                                             const Function& g, const Measure& m) {
    require_dimension(form, f, "f");
    require_dimension(form, g, "g");
    const DominanceReport dom = is_energy_dominant(form, m);
    if (!dom.dominant) throw not_dominant(dom.violations.front());
    // Densities share the factor m(x)^-1/2 under the square root, so the
    // inequality is compared on the measures themselves; this avoids blowing up
    // rounding at points of tiny m-mass.
    const Measure gf = energy_measure(form, f);
    const Measure gg = energy_measure(form, g);
    const Measure gd = energy_measure(form, Function(f - g));
    DensityTriangleReport r;
    for (Index x = 0; x < form.size(); ++x) {
        if (!m.charges(x)) continue;
        const double sf = std::sqrt(gf[x]), sg = std::sqrt(gg[x]);
        const double lhs = std::abs(sf - sg);
        const double rhs = std::sqrt(gd[x]);
        const double excess = (lhs - rhs) / std::sqrt(m[x]);
        r.max_violation = std::max(r.max_violation, excess);
        if (lhs - rhs > 1e-9 * (sf + sg) + kAbsFloor) ++r.violations;
    }
    r.holds = r.violations == 0;
    return r;
}

CarreDuChampReport carre_du_champ_check(const GraphForm& form, const Measure& m) {
    CarreDuChampReport r;
    r.dominance = is_energy_dominant(form, m);
    r.admits = r.dominance.dominant;
    if (r.admits) r.density.emplace(form, m);
    return r;
}

}  // namespace dirichlet
