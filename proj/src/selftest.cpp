#include "dirichlet/selftest.hpp"

#include "dirichlet/capacity.hpp"
#include "dirichlet/energy_dominance.hpp"
#include "dirichlet/errors.hpp"
#include "dirichlet/fixtures.hpp"
#include "dirichlet/gelfand.hpp"
#include "dirichlet/oracles.hpp"
#include "dirichlet/sierpinski.hpp"
#include "dirichlet/truncation.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>

namespace dirichlet {

namespace {

using fixtures::Rng;

bool close_rel(double a, double b, double rel, double scale) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), scale}) + kAbsFloor;
}

PointSet random_subset(Rng& rng, Index n, bool nonempty = true) {
    PointSet s;
    for (;;) {
        s.clear();
        for (Index x = 0; x < n; ++x)
            if (std::bernoulli_distribution(0.4)(rng)) s.push_back(x);
        if (!nonempty || !s.empty()) return s;
    }
}

PointSet set_union(const PointSet& a, const PointSet& b) {
    PointSet u;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
    return u;
}

// --- 1 --------------------------------------------------------------------------

CriterionResult energy_measure_identity(std::uint64_t seed) {
    Rng rng(seed);
    Index checks = 0, failures = 0;
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const GraphForm form = fixtures::random_form(rng);
        const Eigen::MatrixXd c = form.conductance_table();
        for (int k = 0; k < 10; ++k) {
            const Function f = fixtures::random_function(rng, form.size());
            const Function phi = fixtures::random_function(rng, form.size());
            const Measure gamma = energy_measure(form, f);
            const double lhs = phi.dot(gamma.weights());
            const double a = oracle::energy(c, form.killing(), phi.cwiseProduct(f), f);
            const double b = 0.5 * oracle::energy(c, form.killing(), f.cwiseProduct(f), phi);
            const double scale = std::abs(a) + std::abs(b);
            const double err = std::abs(lhs - (a - b)) / std::max(scale, kAbsFloor);
            worst = std::max(worst, err);
            ++checks;
            if (!close_rel(lhs, a - b, 1e-10, scale)) ++failures;
        }
    }
    return {1, "energy-measure identity", failures == 0,
            fmt::format("{} checks, {} failures, worst relative error {:.3g}", checks, failures, worst)};
}

// --- 2 --------------------------------------------------------------------------

CriterionResult beurling_deny_totals(std::uint64_t seed) {
    Rng rng(seed);
    Index checks = 0, failures = 0;
    for (int t = 0; t < 500; ++t) {
        const GraphForm form = fixtures::random_form(rng);
        const BeurlingDenyTriple bd = beurling_deny(form);
        const Eigen::MatrixXd c = form.conductance_table();
        for (int k = 0; k < 10; ++k) {
            const Function f = fixtures::random_function(rng, form.size());
            const double e = oracle::energy(c, form.killing(), f, f);
            const double split = bd.local_energy(f) + bd.jump_energy(f) + bd.killing_energy(f);
            const double via_gamma = energy_measure(form, f).total() + 0.5 * bd.killing_energy(f);
            checks += 2;
            if (!close_rel(e, split, 1e-10, 0.0)) ++failures;
            if (!close_rel(e, via_gamma, 1e-10, 0.0)) ++failures;
        }
    }
    // A strongly local instance: the level-4 gasket, all energy in the local part.
    const SGLevelForm& sg = sg_level_form(4);
    const BeurlingDenyTriple bd = sg_beurling_deny(sg);
    for (int k = 0; k < 10; ++k) {
        const Function f = fixtures::random_function(rng, sg.vertex_count());
        const double e = sg.energy(f);
        checks += 2;
        if (!close_rel(e, bd.total_energy(f), 1e-10, 0.0)) ++failures;
        if (!close_rel(e, energy(sg.graph(), f), 1e-10, 0.0)) ++failures;
    }
    return {2, "Beurling-Deny totals", failures == 0, fmt::format("{} checks, {} failures", checks, failures)};
}

// --- 3 --------------------------------------------------------------------------

CriterionResult truncation_bound(std::uint64_t seed) {
    Rng rng(seed);
    Index failures = 0, oracle_mismatch = 0;
    double sharpest = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const GraphForm form = fixtures::random_form(rng);
        const Function f = fixtures::random_function(rng, form.size(), 2.0);
        const double alpha = std::uniform_real_distribution<double>(0.05, 2.0)(rng);
        const TruncationBoundReport r = truncation_energy_bound(form, f, alpha);
        // Oracle: both sides from dense sums.
        const Eigen::MatrixXd c = form.conductance_table();
        const Function res = f - f.cwiseMax(-alpha).cwiseMin(alpha);
        const double lhs = oracle::energy(c, form.killing(), res, res);
        const Eigen::VectorXd g = oracle::energy_measure(c, form.killing(), f);
        double mass = 0.0;
        for (Eigen::Index x = 0; x < f.size(); ++x)
            if (std::abs(f[x]) >= alpha) mass += g[x];
        if (!close_rel(lhs, r.lhs, 1e-10, 0.0) || !close_rel(mass, r.gamma_mass, 1e-9, 1e-12)) ++oracle_mismatch;
        if (!r.holds || !(lhs <= kTruncationConstant * mass * (1 + 1e-10) + kAbsFloor)) ++failures;
        sharpest = std::max(sharpest, r.sharp_ratio);
    }
    return {3, "truncation bound c = 8", failures == 0 && oracle_mismatch == 0,
            fmt::format("10000 cases, {} violations, {} oracle mismatches, max observed ratio {:.4g}", failures,
                        oracle_mismatch, sharpest)};
}

// --- 4 --------------------------------------------------------------------------

CriterionResult density_triangle(std::uint64_t seed) {
    Rng rng(seed);
    Index failures = 0;
    for (int t = 0; t < 1000; ++t) {
        const GraphForm form = fixtures::random_form(rng, {10, 10, 0.4, 0.3, 0.1});
        if (!form.has_energy()) continue;
        const Measure m = (t % 2 == 0) ? minimal_edm(form) : Measure(form.base_measure());
        const Function f = fixtures::random_function(rng, form.size());
        const Function g = fixtures::random_function(rng, form.size());
        const DensityTriangleReport r = density_triangle_check(form, f, g, m);
        // Oracle on densities directly.
        const Eigen::MatrixXd c = form.conductance_table();
        const Eigen::VectorXd gf = oracle::energy_measure(c, form.killing(), f);
        const Eigen::VectorXd gg = oracle::energy_measure(c, form.killing(), g);
        const Eigen::VectorXd gd = oracle::energy_measure(c, form.killing(), f - g);
        bool ok = true;
        for (Index x = 0; x < form.size(); ++x) {
            if (!m.charges(x)) continue;
            const auto i = static_cast<Eigen::Index>(x);
            const double df = std::sqrt(std::max(gf[i], 0.0) / m[x]), dg = std::sqrt(std::max(gg[i], 0.0) / m[x]);
            const double dd = std::sqrt(std::max(gd[i], 0.0) / m[x]);
            if (std::abs(df - dg) > dd + 1e-7 * (df + dg) + 1e-12) ok = false;
        }
        if (!r.holds || !ok) ++failures;
    }
    return {4, "density triangle inequality", failures == 0, fmt::format("1000 pairs, {} violations", failures)};
}

// --- 5 --------------------------------------------------------------------------

CriterionResult change_of_measure(std::uint64_t seed) {
    Rng rng(seed);
    Index failures = 0, forms = 0, removed = 0;
    while (forms < 200) {
        const GraphForm form = fixtures::random_form(rng, {3, 12, 0.4, 0.3, 0.25});
        if (!form.has_energy()) continue;
        ++forms;
        const Measure m = minimal_edm(form);
        // Hino minimality oracle: m(x) = 0 exactly at points with no edge and no killing.
        for (Index x = 0; x < form.size(); ++x) {
            const bool active = form.degree(x) > 0.0 || form.killing()[static_cast<Eigen::Index>(x)] > 0.0;
            if (m.charges(x) != active) ++failures;
        }
        QuotientForm q;
        try {
            q = change_measure(form, m);
        } catch (const Error&) {
            ++failures;
            continue;
        }
        removed += form.size() - q.retained.size();
        for (int k = 0; k < 5; ++k) {
            const Function f = fixtures::random_function(rng, form.size());
            Function g = f;
            for (Index x = 0; x < form.size(); ++x)
                if (!m.charges(x)) g[static_cast<Eigen::Index>(x)] = std::uniform_real_distribution<double>(-5, 5)(rng);
            if (energy(form, f) != energy(form, g)) ++failures;
            if (!close_rel(energy(form, f), energy(q.form, q.project(f)), 1e-12, 0.0)) ++failures;
        }
    }
    // Adversarial fixture.
    bool witnessed = false;
    const auto adv = fixtures::adversarial_closability_fixture();
    try {
        (void)change_measure(adv.form, adv.m);
    } catch (const WellDefinednessError& e) {
        witnessed = (e.f() - e.g()).cwiseProduct(adv.m.weights()).cwiseAbs().maxCoeff() == 0.0 &&
                    energy(adv.form, e.f()) != energy(adv.form, e.g());
    }
    const ClosabilityReport cr = closability_experiment(adv.form, adv.seq, adv.m);
    const bool experiment_flags = !cr.dominant && !cr.closable && cr.witness_f.has_value() &&
                                  cr.witness_energy_f != cr.witness_energy_g;
    return {5, "measure change (finite-scale closability)", failures == 0 && witnessed && experiment_flags,
            fmt::format("200 forms, {} null points removed, {} failures; adversarial witness {}, experiment {}",
                        removed, failures, witnessed ? "found" : "MISSING",
                        experiment_flags ? "reports failure" : "DID NOT FLAG")};
}

// --- 6 --------------------------------------------------------------------------

CriterionResult classical_anchor(std::uint64_t) {
    double worst = 0.0;
    std::string energies;
    double last_gap = 0.0;
    bool monotone = true;
    for (Index n : {10, 100, 1000}) {
        const GraphForm form = fixtures::path_graph(n);
        const Function x = fixtures::path_coordinates(n);
        const Measure m(form.base_measure());
        const DensityVector d = energy_density(form, x, m);
        if (n == 1000)
            for (Index k = 0; k < d.points.size(); ++k)
                if (d.points[k] != 0 && d.points[k] != n) worst = std::max(worst, std::abs(d.values[k] - 1.0));
        const double gap = std::abs(energy(form, x) - 1.0);
        if (n > 10 && gap > last_gap + 1e-15) monotone = false;
        last_gap = gap;
        energies += fmt::format("{}E_{}={:.12g}", energies.empty() ? "" : ", ", n, energy(form, x));
    }
    const bool pass = worst <= 1e-6 && last_gap <= 1e-3 && monotone;
    return {6, "classical anchor (path graph)", pass,
            fmt::format("max |density - 1| at interior = {:.3g}; {}", worst, energies)};
}

// --- 7 --------------------------------------------------------------------------

CriterionResult sg_oracle(std::uint64_t seed) {
    const LevelOneCalibration cal = calibrate_level_one();
    const bool calib = std::abs(cal.renormalization - 5.0 / 3.0) <= 1e-12 &&
                       std::abs(cal.adjacent_weight - 0.4) <= 1e-12 && std::abs(cal.opposite_weight - 0.2) <= 1e-12;
    Rng rng(seed);
    double worst = 0.0;
    for (int n = 0; n <= 12; ++n) {
        const SGLevelForm& sg = sg_level_form(n);
        for (int k = 0; k < 3; ++k) {
            const Eigen::Vector3d b = k == 0 ? Eigen::Vector3d(1, 0, 0) : Eigen::Vector3d(fixtures::random_function(rng, 3));
            const double e0 = boundary_energy(b);
            const double en = sg.energy(harmonic_extend(sg, b));
            worst = std::max(worst, std::abs(en - e0) / e0);
        }
    }
    return {7, "gasket oracle agreement", calib && worst <= 1e-9,
            fmt::format("factor {:.15g}, weights {:.15g}/{:.15g}; max |E_n - E_0|/E_0 over n <= 12 = {:.3g}",
                        cal.renormalization, cal.adjacent_weight, cal.opposite_weight, worst)};
}

// --- 8 --------------------------------------------------------------------------

CriterionResult kusuoka_diagnostics(std::uint64_t) {
    const SingularityTrend t = singularity_trend(10);
    bool probability = true;
    for (const auto& r : t.levels)
        probability = probability && std::abs(r.masses.total() - 1.0) <= 1e-12 && r.masses.weights().minCoeff() >= 0.0;
    const double spread8 = t.levels[8].spread;
    const bool pass = probability && t.spread_nondecreasing && spread8 > 1e2 && t.entropy_strictly_decreasing_from_2;
    return {8, "Kusuoka singularity diagnostics", pass,
            fmt::format("probability vectors {}, spread nondecreasing {}, spread(8) = {:.4g}, entropy ratio {:.4f} -> "
                        "{:.4f} strictly decreasing {}",
                        probability, t.spread_nondecreasing, spread8, t.levels[2].entropy_ratio,
                        t.levels[10].entropy_ratio, t.entropy_strictly_decreasing_from_2)};
}

// --- 9 --------------------------------------------------------------------------

CriterionResult capacity_oracle(std::uint64_t seed) {
    Rng rng(seed);
    Index failures = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const GraphForm form = fixtures::random_form(rng, {2, 6, 0.5, 0.3, 0.1});
        const PointSet a = random_subset(rng, form.size());
        const EquilibriumReport r = capacity(form, a);
        const Eigen::MatrixXd M = oracle::form_matrix(form.conductance_table(), form.killing(), form.base_measure());
        const oracle::QpResult qp = oracle::box_qp(M, a);
        const double err = std::abs(r.value - qp.value) / std::max(std::abs(qp.value), kAbsFloor);
        worst = std::max(worst, err);
        if (err > 1e-8 || !r.kkt_ok) ++failures;
    }
    const EquilibriumReport two = capacity(fixtures::two_point_form(), {0});
    const bool exact = two.value == 1.5 && two.potential[0] == 1.0 && two.potential[1] == 0.5;
    return {9, "capacity oracle", failures == 0 && exact,
            fmt::format("100 forms, {} failures, worst relative gap {:.3g}; two-point cap({{0}}) = {:.17g}", failures,
                        worst, two.value)};
}

// --- 10 -------------------------------------------------------------------------

CriterionResult capacity_suite(std::uint64_t seed) {
    Rng rng(seed);
    Index mono = 0, sub = 0, weak = 0, order = 0;
    for (int t = 0; t < 1000; ++t) {
        const GraphForm form = fixtures::random_form(rng, {2, 8, 0.4, 0.5, 0.0});
        const PointSet a = random_subset(rng, form.size());
        const PointSet b = random_subset(rng, form.size());
        const PointSet ab = set_union(a, b);
        const double ca = capacity(form, a).value, cb = capacity(form, b).value, cab = capacity(form, ab).value;
        if (!approx_le(ca, cab) || !approx_le(cb, cab)) ++mono;
        if (!approx_le(cab, ca + cb)) ++sub;
        if (is_transient(form) && !approx_le(capacity0(form, a).value, ca)) ++order;
    }
    for (int t = 0; t < 1000; ++t) {
        const GraphForm form = fixtures::random_form(rng, {2, 8, 0.4, 0.3, 0.0});
        Eigen::VectorXd mw(static_cast<Eigen::Index>(form.size()));
        for (Eigen::Index i = 0; i < mw.size(); ++i) mw[i] = std::uniform_real_distribution<double>(0.05, 2.0)(rng);
        const Function u = fixtures::random_function(rng, form.size(), 2.0);
        const double eps = std::uniform_real_distribution<double>(0.05, 2.0)(rng);
        if (!weak_cap_inequality_check(form, u, eps, Measure(mw)).holds) ++weak;
    }
    // Zero-level zero_level_ok fixtures.
    bool zero_level_ok = true;
    {
        const GraphForm three = fixtures::three_point_inactive_form();
        zero_level_ok = zero_level_ok && zero_level_check(three, Function::Zero(3)).holds;
        const ZeroLevelReport r = zero_level_check(three, indicator(3, Index{2}));
        zero_level_ok = zero_level_ok && r.holds && energy_measure(three, indicator(3, Index{2})).total() == 0.0;
        try {
            (void)zero_level_check(fixtures::two_point_form(), indicator(2, Index{1}));
            zero_level_ok = false;
        } catch (const PreconditionError&) {
        }
    }
    // Null-point fixture: m_1 != 0 and m_0 still dominant.
    const auto np = fixtures::null_point_fixture();
    const M0DominanceReport m0 = energy_dominance_of_m0(np.form, np.m);
    const bool null_point_ok = m0.m0_dominant && m0.split.m1.total() > 0.0 && m0.gamma_on_null_set == 0.0 &&
                           capacity(np.form, {np.null_point}).value == 0.0;
    // Dominant but not minimal, at cell resolution.
    const auto fx = fixtures::non_minimal_fixture();
    const EnergyPattern pattern = energy_pattern(fx.basis);
    const bool dominant = is_energy_dominant(pattern, fx.m).dominant;
    const MinimalityReport mr = is_minimal_edm(pattern, fx.m);
    const bool non_minimal_ok = dominant && !mr.minimal && mr.excess == PointSet{fx.midpoint_atom} &&
                          is_minimal_edm(pattern, fx.m_prime).minimal;
    const bool pass = mono == 0 && sub == 0 && weak == 0 && order == 0 && zero_level_ok && null_point_ok && non_minimal_ok;
    return {10, "capacity and quasi-support suite", pass,
            fmt::format("monotonicity {} / subadditivity {} / cap0 <= cap1 {} / weak capacitary {} failures; "
                        "zero-level fixtures {}; m0 dominance fixture {}; midpoint atom dominant-not-minimal {}",
                        mono, sub, order, weak, zero_level_ok ? "ok" : "FAIL", null_point_ok ? "ok" : "FAIL",
                        non_minimal_ok ? "ok" : "FAIL")};
}

// --- 11 -------------------------------------------------------------------------

CriterionResult gelfand_round_trip(std::uint64_t seed) {
    Rng rng(seed);
    Index compatible = 0, failures = 0, witnesses = 0, incompatible = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const GraphForm form = fixtures::random_form(rng, {4, 10, 0.5, 0.3, 0.4});
        if (!form.has_energy()) {
            --t;
            continue;
        }
        const Index n = form.size();
        // Generators: distinct values on active points, inactive points share one of a few labels.
        std::vector<Function> gens(2, Function(static_cast<Eigen::Index>(n)));
        for (Index x = 0; x < n; ++x) {
            const auto i = static_cast<Eigen::Index>(x);
            if (form.is_active(x)) {
                gens[0][i] = static_cast<double>(x + 1);
                gens[1][i] = std::uniform_real_distribution<double>(-1, 1)(rng);
            } else {
                const int label = std::uniform_int_distribution<int>(0, 1)(rng);
                gens[0][i] = -1.0 - label;
                gens[1][i] = 0.5;
            }
        }
        const AlgebraSpec spec = build_algebra(Measure(form.base_measure()), gens);
        const TransferResult tr = transfer(form, spec);
        ++compatible;
        for (int k = 0; k < 5; ++k) {
            const double a = std::uniform_real_distribution<double>(-2, 2)(rng);
            const double b = std::uniform_real_distribution<double>(-2, 2)(rng);
            const Function f = a * gens[0] + b * gens[1] + gens[0].cwiseProduct(gens[1]);
            const Function fhat = tr.quotient.push(f, spec.mu);
            const double e = energy(form, f), ehat = energy(tr.form, fhat);
            worst = std::max(worst, std::abs(e - ehat) / std::max(std::abs(e), kAbsFloor));
            if (!close_rel(e, ehat, 1e-12, 0.0)) ++failures;
        }
        if (!transferred_carre_check(tr.form, seed + static_cast<std::uint64_t>(t)).passes) ++failures;
        // Idempotence: the pushed generators separate the classes.
        const AlgebraSpec again = build_algebra(tr.quotient.pushed, tr.quotient.pushed_generators);
        if (spectrum(again).size() != tr.quotient.size()) ++failures;

        // Incompatible variant: merge an active point with another point.
        PointSet active;
        for (Index x = 0; x < n; ++x)
            if (form.is_active(x)) active.push_back(x);
        const Index x = active[std::uniform_int_distribution<Index>(0, active.size() - 1)(rng)];
        Index y = std::uniform_int_distribution<Index>(0, n - 2)(rng);
        if (y >= x) ++y;
        std::vector<Function> bad = gens;
        for (Function& g : bad) g[static_cast<Eigen::Index>(y)] = g[static_cast<Eigen::Index>(x)];
        ++incompatible;
        try {
            (void)transfer(form, build_algebra(Measure(form.base_measure()), bad));
        } catch (const WellDefinednessError& e) {
            const SpectrumQuotient q = spectrum(build_algebra(Measure(form.base_measure()), bad));
            const Function pf = q.push(e.f(), Measure(form.base_measure()));
            const Function pg = q.push(e.g(), Measure(form.base_measure()));
            if ((pf - pg).cwiseAbs().maxCoeff() <= 1e-12 && energy(form, e.f()) != energy(form, e.g())) ++witnesses;
        }
    }
    const bool pass = failures == 0 && witnesses == incompatible;
    return {11, "Gelfand round trip", pass,
            fmt::format("{} compatible transfers, {} failures, worst relative energy gap {:.3g}; {}/{} incompatible "
                        "quotients produced a witness",
                        compatible, failures, worst, witnesses, incompatible)};
}

struct Spec {
    std::function<CriterionResult(std::uint64_t)> run;
    double budget_seconds;  // 0 when the criterion states no runtime
};

const Spec& spec_for(int id) {
    static const Spec specs[kCriterionCount] = {
        {energy_measure_identity, 5.0}, {beurling_deny_totals, 0.0}, {truncation_bound, 10.0},
        {density_triangle, 0.0},        {change_of_measure, 0.0},    {classical_anchor, 1.0},
        {sg_oracle, 30.0},              {kusuoka_diagnostics, 0.0},  {capacity_oracle, 0.0},
        {capacity_suite, 0.0},          {gelfand_round_trip, 0.0},
    };
    if (id < 1 || id > kCriterionCount) throw InputError("acceptance criterion id outside 1..11");
    return specs[id - 1];
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
    const Spec& spec = spec_for(id);
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = spec.run(seed);
    } catch (const std::exception& e) {
        r = {id, "criterion " + std::to_string(id), false, std::string("unexpected error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (spec.budget_seconds > 0.0 && r.seconds > spec.budget_seconds) {
        r.pass = false;
        r.detail += fmt::format("; runtime {:.2f} s exceeds {:.0f} s", r.seconds, spec.budget_seconds);
    }
    return r;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, seed));
    return out;
}

std::string format_result(const CriterionResult& r) {
    return fmt::format("{} AC{} {}: {} ({:.2f} s)", r.pass ? "PASS" : "FAIL", r.id, r.name, r.detail, r.seconds);
}

}  // namespace dirichlet
