#include "dirichlet/truncation.hpp"

#include "dirichlet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dirichlet {

Function truncate(const Function& f, double alpha) {
    if (!(alpha > 0.0)) throw InputError("truncation level alpha must be positive");
    return f.cwiseMax(-alpha).cwiseMin(alpha);
}

TruncationBoundReport truncation_energy_bound(const GraphForm& form, const Function& f, double alpha) {
    require_dimension(form, f, "f");
    const Function residual = f - truncate(f, alpha);
    TruncationBoundReport r;
    r.lhs = energy(form, residual);
    r.jump_lhs = jump_energy(form, residual);
    r.killing_lhs = killing_energy(form, residual);

    for (Index x = 0; x < form.size(); ++x) {
        const auto xi = static_cast<Eigen::Index>(x);
        const double fx = f[xi];
        if (std::abs(fx) < alpha) continue;
        double gj = 0.0;
        const auto nb = form.neighbors(x);
        const auto cs = form.row_conductances(x);
        for (Index k = 0; k < nb.size(); ++k) {
            const double d = fx - f[static_cast<Eigen::Index>(nb[k])];
            gj += 0.5 * cs[k] * d * d;
        }
        const double gk = form.killing()[xi] * fx * fx;
        r.gamma_mass += gj + 0.5 * gk;
        r.jump_rhs += kTruncationConstant * gj;
        r.killing_rhs += 4.0 * gk;
    }
    r.rhs = kTruncationConstant * r.gamma_mass;
    r.sharp_ratio = r.gamma_mass > 0.0 ? r.lhs / r.gamma_mass : 0.0;
    r.holds = approx_le(r.lhs, r.rhs) && approx_le(r.jump_lhs, r.jump_rhs) &&
              approx_le(r.killing_lhs, r.killing_rhs);
    return r;
}

double l2_norm(const Function& f, const Measure& m) {
    if (static_cast<Index>(f.size()) != m.size()) throw InputError("function and measure sizes differ");
    return std::sqrt((m.weights().array() * f.array().square()).sum());
}

CauchyReport cauchy_check(const GraphForm& form, const FunctionSequence& seq, double tol) {
    CauchyReport r;
    const Index n = seq.size();
    if (n < 2) {
        r.index = 0;
        r.cauchy = false;
        return r;
    }
    // diameter of the tail starting at N, computed backwards
    std::vector<double> diam(n, 0.0);
    for (Index a = n - 1; a-- > 0;) {
        double d = diam[a + 1];
        for (Index b = a + 1; b < n; ++b) d = std::max(d, energy(form, Function(seq.terms[a] - seq.terms[b])));
        diam[a] = d;
    }
    for (Index a = 0; a + 1 < n; ++a) {
        if (diam[a] < tol) {
            r.cauchy = true;
            r.index = a;
            r.diameter = diam[a];
            return r;
        }
    }
    r.index = n - 2;
    r.diameter = diam[n - 2];
    return r;
}

// --- small sets -------------------------------------------------------------

SmallSetProfile::SmallSetProfile(const Measure& gamma, const Measure& m) {
    if (gamma.size() != m.size()) throw InputError("measure sizes differ");
    double free_gamma = 0.0;  // Gamma on m-null points: included in every set
    for (Index x = 0; x < m.size(); ++x) {
        if (gamma[x] <= 0.0) continue;
        if (m.charges(x))
            items_.push_back({m[x], gamma[x]});
        else
            free_gamma += gamma[x];
    }
    std::sort(items_.begin(), items_.end(), [](const Item& a, const Item& b) {
        return a.gamma * b.mass > b.gamma * a.mass;
    });
    if (free_gamma > 0.0) items_.insert(items_.begin(), Item{0.0, free_gamma});

    exact_ = items_.size() <= kExactKnapsackItems;
    if (exact_) {
        const Index k = items_.size();
        std::vector<std::pair<double, double>> all;
        all.reserve(Index{1} << k);
        for (Index mask = 0; mask < (Index{1} << k); ++mask) {
            double mass = 0.0, g = 0.0;
            for (Index i = 0; i < k; ++i)
                if (mask & (Index{1} << i)) {
                    mass += items_[i].mass;
                    g += items_[i].gamma;
                }
            all.emplace_back(mass, g);
        }
        std::sort(all.begin(), all.end());
        double best = 0.0;
        // Pareto frontier only: a subset matters when it beats every lighter one.
        for (const auto& [mass, g] : all) {
            if (!frontier_.empty() && g <= best) continue;
            best = g;
            frontier_.emplace_back(mass, best);
        }
    }
}

SmallSetMass SmallSetProfile::sup_below(double delta) const {
    SmallSetMass r;
    if (exact_) {
        // last subset with mass < delta
        const auto it = std::lower_bound(frontier_.begin(), frontier_.end(), delta,
                                         [](const std::pair<double, double>& e, double d) { return e.first < d; });
        const double v = it == frontier_.begin() ? 0.0 : std::prev(it)->second;
        r.attained = r.upper = v;
        r.exact = true;
        return r;
    }
    double used = 0.0;
    for (const Item& it : items_) {
        if (used + it.mass < delta) {
            used += it.mass;
            r.attained += it.gamma;
        }
    }
    double room = delta;
    for (const Item& it : items_) {
        if (it.mass <= room) {
            room -= it.mass;
            r.upper += it.gamma;
        } else {
            r.upper += it.gamma * (room / it.mass);
            break;
        }
    }
    r.upper = std::max(r.upper, r.attained);
    return r;
}

// --- uniform integrability ----------------------------------------------------

namespace {

void require_dominant(const GraphForm& form, const Measure& m) {
    const DominanceReport d = is_energy_dominant(form, m);
    if (!d.dominant)
        throw NotEnergyDominant(d.violations.front(),
                                "measure is not energy dominant at point " +
                                    std::to_string(d.violations.front()));
}

std::vector<Index> thinned(Index n, Index cap) {
    std::vector<Index> idx;
    if (n <= cap) {
        idx.resize(n);
        std::iota(idx.begin(), idx.end(), Index{0});
        return idx;
    }
    for (Index k = 0; k < cap; ++k) {
        const Index v = static_cast<Index>(std::llround(static_cast<double>(k) * static_cast<double>(n - 1) /
                                                        static_cast<double>(cap - 1)));
        if (idx.empty() || idx.back() != v) idx.push_back(v);
    }
    return idx;
}

std::vector<double> dyadic_grid(const Measure& m) {
    std::vector<double> grid;
    const double total = m.total();
    if (!(total > 0.0)) return grid;
    double smallest = total;
    for (Index x = 0; x < m.size(); ++x)
        if (m.charges(x)) smallest = std::min(smallest, m[x]);
    double delta = total;
    for (int k = 0; k <= 60; ++k) {
        grid.push_back(delta);
        if (delta < smallest) break;  // below every atom: only m-null sets remain
        delta *= 0.5;
    }
    return grid;
}

}  // namespace

UIModulus uniform_integrability_modulus(const GraphForm& form, const FunctionSequence& seq,
                                        const Measure& m, ClosabilityTolerances tol, Index max_table) {
    require_dominant(form, m);
    for (const Function& u : seq.terms) require_dimension(form, u, "sequence term");
    UIModulus r;
    r.cauchy = cauchy_check(form, seq, tol.cauchy);

    std::vector<Measure> gammas;
    gammas.reserve(seq.size());
    for (const Function& u : seq.terms) gammas.push_back(energy_measure(form, u));
    std::vector<SmallSetProfile> profiles;
    profiles.reserve(seq.size());
    for (const Measure& g : gammas) profiles.emplace_back(g, m);

    for (double delta : dyadic_grid(m)) {
        UIModulus::Row row{delta, 0.0, 0.0, true};
        for (const auto& p : profiles) {
            const SmallSetMass s = p.sup_below(delta);
            row.epsilon = std::max(row.epsilon, s.attained);
            row.upper = std::max(row.upper, s.upper);
            row.exact = row.exact && s.exact;
        }
        r.rows.push_back(row);
    }
    // The true modulus is monotone; greedy lower bounds are made so by a running max.
    for (Index k = r.rows.size(); k-- > 1;) {
        r.rows[k - 1].epsilon = std::max(r.rows[k - 1].epsilon, r.rows[k].epsilon);
        r.rows[k - 1].upper = std::max(r.rows[k - 1].upper, r.rows[k].upper);
    }
    for (Index k = 1; k < r.rows.size(); ++k)
        if (r.rows[k].epsilon > r.rows[k - 1].epsilon || r.rows[k].upper > r.rows[k - 1].upper) r.monotone = false;

    double sup_energy = 0.0;
    for (const Function& u : seq.terms) sup_energy = std::max(sup_energy, energy(form, u));

    r.table_indices = thinned(seq.size(), std::max<Index>(max_table, 2));
    const auto t = static_cast<Eigen::Index>(r.table_indices.size());
    r.l1_distance = Eigen::MatrixXd::Zero(t, t);
    r.l1_bound = Eigen::MatrixXd::Zero(t, t);
    for (Eigen::Index a = 0; a < t; ++a) {
        for (Eigen::Index b = a + 1; b < t; ++b) {
            const Measure& ga = gammas[r.table_indices[static_cast<Index>(a)]];
            const Measure& gb = gammas[r.table_indices[static_cast<Index>(b)]];
            double l1 = 0.0, sq = 0.0;
            for (Index x = 0; x < m.size(); ++x) {
                if (!m.charges(x)) continue;
                l1 += std::abs(ga[x] - gb[x]);
                const double d = std::sqrt(ga[x]) - std::sqrt(gb[x]);
                sq += d * d;
            }
            const double bound = 2.0 * std::sqrt(sq) * std::sqrt(sup_energy);
            r.l1_distance(a, b) = r.l1_distance(b, a) = l1;
            r.l1_bound(a, b) = r.l1_bound(b, a) = bound;
            if (!approx_le(l1, bound, 1e-9, 1e-12)) r.bound_holds = false;
        }
    }
    return r;
}

// --- jump tightness -----------------------------------------------------------

JumpTightnessReport jump_tightness(const GraphForm& form, const FunctionSequence& seq, const PointSet& set) {
    const std::vector<bool> in = to_mask(form.size(), set);
    JumpTightnessReport r;
    r.set = set;
    for (const Function& w : seq.terms) {
        require_dimension(form, w, "sequence term");
        double s = 0.0;
        for (const Edge& e : form.edges()) {
            const double d = w[static_cast<Eigen::Index>(e.a)] - w[static_cast<Eigen::Index>(e.b)];
            const double term = 0.5 * e.weight * d * d;  // J = c/2 per orientation
            if (!in[e.b]) s += term;                     // x = a, y = b outside K
            if (!in[e.a]) s += term;                     // x = b, y = a outside K
        }
        r.value = std::max(r.value, s);
    }
    return r;
}

JumpTightnessReport tight_set_search(const GraphForm& form, const FunctionSequence& seq,
                                     const Measure& m, double eps) {
    if (m.size() != form.size()) throw InputError("measure and form sizes differ");
    std::vector<Index> order(form.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return m[a] > m[b]; });
    PointSet set;
    JumpTightnessReport r = jump_tightness(form, seq, set);
    for (Index k = 0; k < order.size() && !(r.value < eps); ++k) {
        set.insert(std::upper_bound(set.begin(), set.end(), order[k]), order[k]);
        r = jump_tightness(form, seq, set);
    }
    return r;
}

// --- subsequence extraction ---------------------------------------------------

std::vector<Index> Subsequence::indices() const {
    std::vector<Index> out;
    for (const Step& s : steps) out.push_back(s.n);
    return out;
}

namespace {

/// m({|u| >= level}) by binary search over |u| sorted in decreasing order.
class LevelSets {
public:
    LevelSets(const Function& u, const Measure& m) {
        std::vector<std::pair<double, double>> v;
        for (Index x = 0; x < m.size(); ++x) v.emplace_back(std::abs(u[static_cast<Eigen::Index>(x)]), m[x]);
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        double acc = 0.0;
        for (const auto& [a, w] : v) {
            acc += w;
            abs_.push_back(a);
            cumulative_.push_back(acc);
        }
    }

    double mass_at_least(double level) const {
        const auto it = std::partition_point(abs_.begin(), abs_.end(), [&](double a) { return a >= level; });
        const auto k = static_cast<Index>(it - abs_.begin());
        return k == 0 ? 0.0 : cumulative_[k - 1];
    }

private:
    std::vector<double> abs_, cumulative_;
};

/// Smallest n such that m(|u_n'| >= 1/k) < 1/k for every n' >= n in the prefix.
std::optional<Index> null_threshold(const std::vector<LevelSets>& sets, Index k) {
    const double level = 1.0 / static_cast<double>(k);
    std::optional<Index> start;
    for (Index n = sets.size(); n-- > 0;) {
        if (sets[n].mass_at_least(level) < level)
            start = n;
        else
            break;
    }
    return start;
}

struct SelectionContext {
    const std::vector<LevelSets>& sets;
    const std::vector<SmallSetProfile>& profiles;

    /// Certified sup of Gamma(u_n)(A), m(A) < 1/k, over the tail n >= start.
    double tail_bound(Index start, Index k) const {
        const double delta = 1.0 / static_cast<double>(k);
        double b = 0.0;
        for (Index n = start; n < profiles.size(); ++n) b = std::max(b, profiles[n].sup_below(delta).upper);
        return b;
    }

    /// (n_k, bound) when n_k exists.
    std::optional<std::pair<Index, double>> evaluate(Index k) const {
        const auto n = null_threshold(sets, k);
        if (!n) return std::nullopt;
        return std::make_pair(*n, tail_bound(*n, k));
    }
};

}  // namespace

Subsequence extract_subsequence(const GraphForm& form, const FunctionSequence& seq, const Measure& m,
                                ClosabilityTolerances tol) {
    if (m.size() != form.size()) throw InputError("measure and form sizes differ");
    for (const Function& u : seq.terms) require_dimension(form, u, "sequence term");
    if (seq.size() < 2) throw PreconditionError("sequence needs at least two terms");
    Subsequence out;
    out.cauchy = cauchy_check(form, seq, tol.cauchy);
    if (!out.cauchy.cauchy)
        throw PreconditionError("sequence is not E-Cauchy within tolerance: tail diameter " +
                                std::to_string(out.cauchy.diameter) + " >= " + std::to_string(tol.cauchy));
    double max_l2 = 0.0;
    for (const Function& u : seq.terms) max_l2 = std::max(max_l2, l2_norm(u, m));
    out.final_l2 = l2_norm(seq.terms.back(), m);
    std::vector<LevelSets> sets;
    sets.reserve(seq.size());
    for (const Function& u : seq.terms) sets.emplace_back(u, m);
    if (out.final_l2 > tol.null * std::max(1.0, max_l2) || !null_threshold(sets, 1))
        throw PreconditionError("sequence is not L2(m)-null: m(|u_n| >= 1/k) does not shrink (final norm " +
                                std::to_string(out.final_l2) + ")");

    std::vector<SmallSetProfile> profiles;
    profiles.reserve(seq.size());
    for (const Function& u : seq.terms) profiles.emplace_back(energy_measure(form, u), m);
    const SelectionContext ctx{sets, profiles};

    constexpr Index kMaxLevel = Index{1} << 52;
    Index k_prev = 1;
    for (Index j = 1;; ++j) {
        const double target = 1.0 / (kTruncationConstant * static_cast<double>(j));
        auto ok = [&](Index k) {
            const auto e = ctx.evaluate(k);
            return e && e->second < target;
        };
        Index lo = std::max(k_prev, j);
        if (!ctx.evaluate(lo)) break;  // prefix exhausted
        Index hi = lo;
        // The two conditions move in opposite directions in k: search upward
        // while n_k still exists.
        while (!ok(hi)) {
            if (hi >= kMaxLevel || !ctx.evaluate(hi * 2)) {
                hi = 0;
                break;
            }
            lo = hi;
            hi *= 2;
        }
        if (hi == 0) break;
        while (lo < hi) {
            const Index mid = lo + (hi - lo) / 2;
            if (ok(mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        const Index k = hi;
        const auto [n, bound] = *ctx.evaluate(k);
        const Function& v = seq.terms[n];
        const double residual = energy(form, Function(v - truncate(v, 1.0 / static_cast<double>(k))));
        const double goal = 1.0 / static_cast<double>(j);
        Subsequence::Step step{j, k, n, bound, residual, goal, residual < goal};
        out.all_ok = out.all_ok && step.ok;
        out.steps.push_back(step);
        k_prev = k;
        if (j >= tol.max_steps) break;
    }
    return out;
}

// --- end-to-end experiment ----------------------------------------------------

ClosabilityReport closability_experiment(const GraphForm& form, const FunctionSequence& seq,
                                         const Measure& m, ClosabilityTolerances tol) {
    if (m.size() != form.size()) throw InputError("measure and form sizes differ");
    ClosabilityReport r;
    double max_energy = 0.0;
    for (const Function& u : seq.terms) {
        require_dimension(form, u, "sequence term");
        r.energies.push_back(energy(form, u));
        r.l2_norms.push_back(l2_norm(u, m));
        max_energy = std::max(max_energy, r.energies.back());
    }
    if (seq.size() == 0) throw InputError("empty sequence");
    auto decays = [&](double last, double scale) { return last <= tol.decay * scale || last <= kAbsFloor; };

    const DominanceReport dom = is_energy_dominant(form, m);
    if (!dom.dominant) {
        const Index x = dom.violations.front();
        r.dominant = false;
        r.witness_f = indicator(form.size(), x);
        r.witness_g = Function::Zero(static_cast<Eigen::Index>(form.size()));
        r.witness_energy_f = energy(form, *r.witness_f);
        r.witness_energy_g = 0.0;
        r.closable = decays(r.energies.back(), max_energy);
        r.diagnosis = "m is not energy dominant: point " + std::to_string(x) +
                      " is m-null but carries energy; f = 1_" + std::to_string(x) +
                      " and g = 0 agree in L2(m) with E(f) = " + std::to_string(r.witness_energy_f) +
                      " != 0. E(u_n) ends at " + std::to_string(r.energies.back());
        if (!r.closable) r.diagnosis += " -> closability fails";
        return r;
    }

    r.subsequence = extract_subsequence(form, seq, m, tol);
    double max_w = 0.0;
    for (const auto& step : r.subsequence->steps) {
        const double level = 1.0 / static_cast<double>(step.k);
        const Function w = truncate(seq.terms[step.n], level);
        r.w_energies.push_back(energy(form, w));
        r.w_sup.push_back(w.size() ? w.cwiseAbs().maxCoeff() : 0.0);
        r.sup_bound_ok = r.sup_bound_ok && r.w_sup.back() <= level;
        max_w = std::max(max_w, r.w_energies.back());
    }
    const bool u_decays = decays(r.energies.back(), max_energy);
    const bool w_decays = r.w_energies.empty() || decays(r.w_energies.back(), std::max(max_w, max_energy));
    r.closable = u_decays && w_decays && r.sup_bound_ok && r.subsequence->all_ok;
    r.diagnosis = r.closable ? "E(u_n) -> 0 and E(w_j) -> 0 within resolution"
                             : "energies do not decay within resolution";
    return r;
}

}  // namespace dirichlet
