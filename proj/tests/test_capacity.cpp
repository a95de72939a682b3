#include "dirichlet/capacity.hpp"
#include "dirichlet/energy_dominance.hpp"
#include "dirichlet/errors.hpp"
#include "dirichlet/fixtures.hpp"
#include "dirichlet/oracles.hpp"
#include "helpers.hpp"

using namespace dirichlet;
using testutil::vec;

namespace {

GraphForm two_point_killed() {
    const Edge e{0, 1, 1.0};
    return GraphForm::from_edges(2, std::span(&e, 1), vec({1, 1}), Eigen::VectorXd::Ones(2));
}

}  // namespace

TEST_SUITE("capacity-quasi") {

TEST_CASE("two-point capacity is exactly 3/2") {
    const EquilibriumReport r = capacity(fixtures::two_point_form(), {0});
    CHECK(r.value == 1.5);
    CHECK(r.potential[0] == 1.0);
    CHECK(r.potential[1] == 0.5);
    CHECK(r.kkt_ok);
    // Oracle: minimize (1-t)^2 + 1 + t^2 by the dense QP enumeration.
    const GraphForm f = fixtures::two_point_form();
    const oracle::QpResult qp =
        oracle::box_qp(oracle::form_matrix(f.conductance_table(), f.killing(), f.base_measure()), {0});
    CHECK(qp.value == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("capacity examples") {
    fixtures::Rng rng(9);
    for (int t = 0; t < 30; ++t) {
        const GraphForm form = fixtures::random_form(rng, {2, 7, 0.5, 0.3, 0});
        PointSet all(form.size());
        for (Index x = 0; x < form.size(); ++x) all[x] = x;
        const EquilibriumReport r = capacity(form, all);
        CHECK(r.value == doctest::Approx(form.base_measure().sum() + form.killing().sum()));
        CHECK((r.potential.array() - 1.0).abs().maxCoeff() == 0.0);
        for (Index x = 0; x < form.size(); ++x)
            CHECK(capacity(form, {x}).value >= form.base_measure()[static_cast<Eigen::Index>(x)] * (1 - 1e-12));
    }
}

TEST_CASE("capacity against the brute-force QP") {
    fixtures::Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        const GraphForm form = fixtures::random_form(rng, {2, 6, 0.5, 0.3, 0.1});
        PointSet a;
        for (Index x = 0; x < form.size(); ++x)
            if (std::bernoulli_distribution(0.4)(rng)) a.push_back(x);
        if (a.empty()) a.push_back(0);
        const EquilibriumReport r = capacity(form, a);
        const oracle::QpResult qp =
            oracle::box_qp(oracle::form_matrix(form.conductance_table(), form.killing(), form.base_measure()), a);
        CHECK(r.value == doctest::Approx(qp.value).epsilon(1e-8));
        CHECK(r.kkt_ok);
    }
}

TEST_CASE("zero-order capacity") {
    const EquilibriumReport r = capacity0(two_point_killed(), {0});
    CHECK(r.value == doctest::Approx(1.5));
    const GraphForm k = two_point_killed();
    const oracle::QpResult qp =
        oracle::box_qp(oracle::form_matrix(k.conductance_table(), k.killing(), Eigen::VectorXd::Zero(2)), {0});
    CHECK(r.value == doctest::Approx(qp.value));
    CHECK(capacity0(k, {0, 1}).value == doctest::Approx(2.0));
    CHECK_THROWS_AS(capacity0(fixtures::two_point_form(), {0}), PreconditionError);
}

TEST_CASE("graph structure") {
    CHECK(is_irreducible(fixtures::two_point_form()));
    CHECK_FALSE(is_transient(fixtures::two_point_form()));
    CHECK(is_transient(two_point_killed()));
    CHECK_FALSE(is_irreducible(fixtures::three_point_inactive_form()));
    CHECK(zero_capacity_points(fixtures::two_point_form()).empty());
    const auto np = fixtures::null_point_fixture();
    CHECK(zero_capacity_points(np.form) == PointSet{np.null_point});
    CHECK(capacity(np.form, {np.null_point}).value == 0.0);
}

TEST_CASE("measure split") {
    const GraphForm form = fixtures::two_point_form();
    const MeasureSplit s = split_measure(form, Measure(vec({2, 3})));
    CHECK(s.null_set.empty());
    CHECK(s.m1.total() == 0.0);
    CHECK(s.m0[1] == 3.0);
    const MeasureSplit z = split_measure(form, Measure::zeros(2));
    CHECK(z.m0.total() == 0.0);
    CHECK(z.m1.total() == 0.0);
    const auto np = fixtures::null_point_fixture();
    const MeasureSplit n = split_measure(np.form, np.m);
    CHECK(n.m1[np.null_point] == 1.0);
    CHECK(n.m0[np.null_point] == 0.0);
}

TEST_CASE("dominance of m0") {
    const GraphForm form = fixtures::two_point_form();
    const M0DominanceReport r = energy_dominance_of_m0(form, minimal_edm(form));
    CHECK(r.m0_dominant);
    CHECK(r.split.m1.total() == 0.0);
    const auto np = fixtures::null_point_fixture();
    const M0DominanceReport n = energy_dominance_of_m0(np.form, np.m);
    CHECK(n.m0_dominant);
    CHECK(n.split.m1.total() > 0.0);
    CHECK(n.gamma_on_null_set == 0.0);
    CHECK_THROWS_AS(energy_dominance_of_m0(form, Measure(vec({1, 0}))), PreconditionError);
}

TEST_CASE("full quasi support") {
    const GraphForm form = fixtures::two_point_form();
    CHECK(full_quasi_support_check(form, minimal_edm(form)).full);
    const QuasiSupportReport r = full_quasi_support_check(form, Measure(vec({1, 0})));
    CHECK_FALSE(r.full);
    CHECK(r.missing == PointSet{1});
    CHECK_THROWS_AS(full_quasi_support_check(fixtures::three_point_inactive_form(), Measure(vec({1, 1, 1}))),
                    PreconditionError);
}

TEST_CASE("zero level lemma") {
    const GraphForm three = fixtures::three_point_inactive_form();
    CHECK(zero_level_check(three, Function::Zero(3)).holds);
    const ZeroLevelReport r = zero_level_check(three, indicator(3, Index{2}));
    CHECK(r.holds);
    CHECK(r.gamma_zero_set == 0.0);
    CHECK(energy_measure(three, indicator(3, Index{2})).total() == 0.0);
    CHECK_THROWS_AS(zero_level_check(fixtures::two_point_form(), indicator(2, Index{1})), PreconditionError);
}

TEST_CASE("weak capacitary inequality") {
    const GraphForm form = fixtures::two_point_form();
    const WeakCapacityReport z = weak_cap_inequality_check(form, vec({0, 0}), 0.5, Measure(vec({1, 1})));
    CHECK(z.lhs == 0.0);
    CHECK(z.holds);
    const WeakCapacityReport r = weak_cap_inequality_check(form, vec({0, 1}), 0.5, Measure(vec({1, 1})));
    CHECK(r.level_set == PointSet{1});
    CHECK(r.rhs == doctest::Approx(8.0));
    // cap_0 of {1} for E + m: minimize t^2 + 1 + (1 - t)^2, i.e. 3/2.
    CHECK(r.lhs == doctest::Approx(1.5));
    CHECK(r.holds);
    fixtures::Rng rng(12);
    for (int t = 0; t < 1000; ++t) {
        const GraphForm f = fixtures::random_form(rng, {2, 8, 0.4, 0.3, 0});
        Eigen::VectorXd w(static_cast<Eigen::Index>(f.size()));
        for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = std::uniform_real_distribution<double>(0.05, 2)(rng);
        const double eps = std::uniform_real_distribution<double>(0.05, 2)(rng);
        CHECK(weak_cap_inequality_check(f, fixtures::random_function(rng, f.size(), 2.0), eps, Measure(w)).holds);
    }
}

TEST_CASE("augmented form") {
    const GraphForm a = augmented_form(fixtures::two_point_form(), Measure(vec({1, 2})));
    CHECK(a.killing()[0] == 1.0);
    CHECK(a.killing()[1] == 2.0);
    CHECK(energy(a, vec({0, 1})) == 3.0);
}

}  // TEST_SUITE
