#include "dirichlet/errors.hpp"
#include "dirichlet/fixtures.hpp"
#include "dirichlet/oracles.hpp"
#include "dirichlet/truncation.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace dirichlet;
using testutil::vec;

namespace {

FunctionSequence repeat(const Function& f, Index count) {
    FunctionSequence s;
    for (Index k = 0; k < count; ++k) {
        s.terms.push_back(f);
        s.labels.push_back("u" + std::to_string(k + 1));
    }
    return s;
}

}  // namespace

TEST_SUITE("truncation-closability") {

TEST_CASE("truncate") {
    testutil::check_close(truncate(vec({0, 2}), 1), vec({0, 1}));
    testutil::check_close(truncate(vec({0.2, -0.3}), 1), vec({0.2, -0.3}));
    testutil::check_close(truncate(vec({-3, 0.5, 3}), 1), vec({-1, 0.5, 1}));
    CHECK_THROWS_AS(truncate(vec({1}), 0.0), InputError);
}

TEST_CASE("truncation bound examples") {
    const TruncationBoundReport r = truncation_energy_bound(fixtures::two_point_form(), vec({0, 2}), 1.0);
    CHECK(r.lhs == 1.0);
    CHECK(r.gamma_mass == 2.0);
    CHECK(r.rhs == 16.0);
    CHECK(r.holds);
    const TruncationBoundReport z = truncation_energy_bound(fixtures::two_point_form(), vec({0.1, 0.2}), 1.0);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
}

TEST_CASE("truncation bound against dense oracle") {
    fixtures::Rng rng(17);
    for (int t = 0; t < 1000; ++t) {
        const GraphForm form = fixtures::random_form(rng);
        const Function f = fixtures::random_function(rng, form.size(), 3.0);
        const double alpha = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
        const TruncationBoundReport r = truncation_energy_bound(form, f, alpha);
        const Function res = f - f.cwiseMax(-alpha).cwiseMin(alpha);
        CHECK(r.lhs == doctest::Approx(oracle::energy(form.conductance_table(), form.killing(), res, res)));
        CHECK(r.lhs <= 8.0 * r.gamma_mass * (1 + 1e-12) + 1e-14);
        CHECK(r.holds);
    }
}

TEST_CASE("uniform integrability modulus") {
    const GraphForm form = fixtures::path_graph(20);
    const Measure m(form.base_measure());
    const Function u = (fixtures::path_coordinates(20).array() * 3.0).sin().matrix();
    SUBCASE("constant sequence equals the single-function modulus") {
        const UIModulus one = uniform_integrability_modulus(form, repeat(u, 1), m);
        const UIModulus many = uniform_integrability_modulus(form, repeat(u, 5), m);
        REQUIRE(one.rows.size() == many.rows.size());
        for (Index k = 0; k < one.rows.size(); ++k) CHECK(one.rows[k].epsilon == many.rows[k].epsilon);
        CHECK(many.l1_distance.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("decaying sequence and the pairwise bound") {
        FunctionSequence s;
        for (int k = 1; k <= 30; ++k) s.terms.push_back(u / k);
        const UIModulus r = uniform_integrability_modulus(form, s, m);
        CHECK(r.bound_holds);
        CHECK(r.monotone);
        // Recompute one pair of the tables directly.
        const Measure g0 = energy_measure(form, s.terms[r.table_indices[0]]);
        const Measure g1 = energy_measure(form, s.terms[r.table_indices[1]]);
        double l1 = 0.0, root = 0.0, sup_e = 0.0;
        for (Index x = 0; x < form.size(); ++x) {
            l1 += std::abs(g0[x] - g1[x]);
            const double d = std::sqrt(g0[x] / m[x]) - std::sqrt(g1[x] / m[x]);
            root += d * d * m[x];
        }
        for (const Function& t : s.terms) sup_e = std::max(sup_e, energy(form, t));
        CHECK(r.l1_distance(0, 1) == doctest::Approx(l1));
        CHECK(r.l1_bound(0, 1) == doctest::Approx(2.0 * std::sqrt(root) * std::sqrt(sup_e)));
        CHECK(l1 <= r.l1_bound(0, 1) * (1 + 1e-12));
    }
}

TEST_CASE("small-set profile matches brute force") {
    fixtures::Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        const Index n = 10;
        Eigen::VectorXd g(10), w(10);
        for (Eigen::Index i = 0; i < 10; ++i) {
            g[i] = std::uniform_real_distribution<double>(0, 1)(rng);
            w[i] = std::uniform_real_distribution<double>(0.05, 1)(rng);
        }
        const SmallSetProfile p{Measure(g), Measure(w)};
        const double delta = std::uniform_real_distribution<double>(0.1, 3)(rng);
        double best = 0.0;
        for (Index mask = 0; mask < (Index{1} << n); ++mask) {
            double mass = 0.0, gamma = 0.0;
            for (Index i = 0; i < n; ++i)
                if (mask & (Index{1} << i)) {
                    mass += w[static_cast<Eigen::Index>(i)];
                    gamma += g[static_cast<Eigen::Index>(i)];
                }
            if (mass < delta) best = std::max(best, gamma);
        }
        const SmallSetMass r = p.sup_below(delta);
        CHECK(r.exact);
        CHECK(r.attained == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("jump tightness") {
    const Edge edges[] = {{0, 1, 1.0}, {1, 2, 3.0}};
    const GraphForm form = GraphForm::from_edges(3, edges, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(3));
    FunctionSequence s;
    s.terms = {vec({1, -1, 2}), vec({0.5, 3, -2})};
    CHECK(jump_tightness(form, s, {0, 1, 2}).value == 0.0);
    const Eigen::MatrixXd c = form.conductance_table();
    for (const PointSet& k : {PointSet{}, PointSet{1}, PointSet{0, 2}}) {
        double expected = 0.0;
        for (const Function& w : s.terms) {
            double sum = 0.0;
            for (Eigen::Index x = 0; x < 3; ++x)
                for (Eigen::Index y = 0; y < 3; ++y)
                    if (std::find(k.begin(), k.end(), static_cast<Index>(y)) == k.end())
                        sum += (w[x] - w[y]) * (w[x] - w[y]) * c(x, y) / 2.0;
            expected = std::max(expected, sum);
        }
        CHECK(jump_tightness(form, s, k).value == doctest::Approx(expected));
    }
    double full = 0.0;
    for (const Function& w : s.terms) full = std::max(full, jump_energy(form, w));
    CHECK(jump_tightness(form, s, {}).value == doctest::Approx(full));
}

TEST_CASE("subsequence extraction") {
    SUBCASE("zero sequence") {
        const GraphForm form = fixtures::path_graph(10);
        const Subsequence s = extract_subsequence(form, repeat(Function::Zero(11), 6), Measure(form.base_measure()));
        CHECK(s.all_ok);
        for (const auto& step : s.steps) {
            CHECK(step.residual == 0.0);
            CHECK(step.ui_bound == 0.0);
        }
    }
    SUBCASE("bump sequence on the path graph") {
        const Index n = 100;
        const GraphForm form = fixtures::path_graph(n);
        const FunctionSequence seq = fixtures::bump_sequence(n, 3000);
        const Measure m(form.base_measure());
        const Subsequence s = extract_subsequence(form, seq, m);
        REQUIRE_FALSE(s.steps.empty());
        CHECK(s.all_ok);
        for (const auto& step : s.steps) {
            const Function& v = seq.terms[step.n];
            const Function r = v - truncate(v, 1.0 / static_cast<double>(step.k));
            CHECK(energy(form, r) == doctest::Approx(step.residual));
            CHECK(energy(form, r) < 1.0 / static_cast<double>(step.j));
        }
    }
    SUBCASE("sequence that is not L2-null") {
        const GraphForm form = fixtures::path_graph(10);
        CHECK_THROWS_AS(extract_subsequence(form, repeat(Function::Ones(11), 6), Measure(form.base_measure())),
                        PreconditionError);
    }
}

TEST_CASE("closability experiment") {
    SUBCASE("geometric scaling") {
        const GraphForm form = fixtures::path_graph(20);
        const Function f = (fixtures::path_coordinates(20).array() * 3.0).sin().matrix();
        FunctionSequence s;
        for (int k = 1; k <= 40; ++k) s.terms.push_back(f * std::pow(2.0, -k));
        const ClosabilityReport r = closability_experiment(form, s, Measure(form.base_measure()));
        CHECK(r.dominant);
        CHECK(r.closable);
        for (int k = 1; k <= 40; ++k)
            CHECK(r.energies[k - 1] == doctest::Approx(std::pow(4.0, -k) * energy(form, f)).epsilon(1e-12));
    }
    SUBCASE("shrinking plateaus") {
        const Index n = 64;
        const GraphForm form = fixtures::path_graph(n);
        const Function x = fixtures::path_coordinates(n);
        FunctionSequence s;
        // Plateau of height 1/k on [1/2 - 1/(4k), 1/2 + 1/(4k)] with linear ramps of width 1/4.
        for (int k = 1; k <= 300; ++k) {
            Function u(static_cast<Eigen::Index>(n + 1));
            for (Eigen::Index i = 0; i <= static_cast<Eigen::Index>(n); ++i) {
                const double d = std::abs(x[i] - 0.5) - 0.25 / k;
                u[i] = std::max(0.0, 1.0 - std::max(d, 0.0) * 4.0) / k;
            }
            s.terms.push_back(u);
        }
        const ClosabilityReport r = closability_experiment(form, s, Measure(form.base_measure()));
        CHECK(r.closable);
        CHECK(r.energies.back() < 1e-2 * r.energies.front());
    }
    SUBCASE("adversarial non-dominant measure") {
        const auto fx = fixtures::adversarial_closability_fixture();
        const ClosabilityReport r = closability_experiment(fx.form, fx.seq, fx.m);
        CHECK_FALSE(r.dominant);
        CHECK_FALSE(r.closable);
        REQUIRE(r.witness_f.has_value());
        testutil::check_close(*r.witness_f, vec({0, 1}));
        CHECK(r.witness_energy_f == 1.0);
        CHECK(r.witness_energy_g == 0.0);
    }
}

}  // TEST_SUITE
