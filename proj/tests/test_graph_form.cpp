#include "dirichlet/errors.hpp"
#include "dirichlet/fixtures.hpp"
#include "dirichlet/graph_form.hpp"
#include "dirichlet/oracles.hpp"
#include "helpers.hpp"

using namespace dirichlet;
using testutil::vec;

TEST_SUITE("graph-form-core") {

TEST_CASE("two-point form energy") {
    const GraphForm form = fixtures::two_point_form();
    CHECK(energy(form, vec({0, 1})) == 1.0);
    CHECK(energy(form, vec({0, 0})) == 0.0);
}

TEST_CASE("killing-only form") {
    const GraphForm form = fixtures::killing_only_form();
    CHECK(energy(form, vec({3})) == 18.0);
    CHECK(energy_measure(form, vec({3}))[0] == 9.0);
}

TEST_CASE("asymmetric table is rejected") {
    Eigen::MatrixXd c(2, 2);
    c << 0, 1, 2, 0;
    CHECK_THROWS_AS(GraphForm::from_table(c, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2)), InputError);
}

TEST_CASE("invalid entries are rejected") {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
    c(0, 1) = c(1, 0) = -1;
    CHECK_THROWS_AS(GraphForm::from_table(c, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2)), InputError);
    CHECK_THROWS_AS(GraphForm::from_table(Eigen::MatrixXd::Zero(2, 2), vec({-1, 0}), Eigen::VectorXd::Ones(2)),
                    InputError);
    CHECK_THROWS_AS(GraphForm::from_table(Eigen::MatrixXd::Zero(2, 2), vec({0, 0}), vec({1, 0})), InputError);
    CHECK_THROWS_AS(energy(fixtures::two_point_form(), vec({1, 2, 3})), InputError);
}

TEST_CASE("energy measure examples") {
    const GraphForm form = fixtures::two_point_form();
    testutil::check_close(energy_measure(form, vec({0, 1})).weights(), vec({0.5, 0.5}));
    CHECK(energy_measure(form, vec({0, 0})).total() == 0.0);
}

TEST_CASE("mutual energy measure") {
    const GraphForm form = fixtures::two_point_form();
    testutil::check_close(mutual_energy_measure(form, vec({0, 1}), vec({1, 0})), vec({-0.5, -0.5}));
    CHECK(mutual_energy_measure(form, vec({0, 1}), vec({0, 0})).cwiseAbs().maxCoeff() == 0.0);
    fixtures::Rng rng(3);
    const GraphForm r = fixtures::random_form(rng, {8, 8, 0.5, 0.3, 0});
    const Function f = fixtures::random_function(rng, 8);
    testutil::check_close(mutual_energy_measure(r, f, f), energy_measure(r, f).weights(), 1e-12);
}

TEST_CASE("energy measure matches the dense oracle") {
    fixtures::Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const GraphForm form = fixtures::random_form(rng);
        const Function f = fixtures::random_function(rng, form.size());
        const Eigen::VectorXd ref = oracle::energy_measure(form.conductance_table(), form.killing(), f);
        const Measure g = energy_measure(form, f);
        for (Index x = 0; x < form.size(); ++x)
            CHECK(g[x] == doctest::Approx(ref[static_cast<Eigen::Index>(x)]).epsilon(1e-10));
        CHECK(energy(form, f) ==
              doctest::Approx(oracle::energy(form.conductance_table(), form.killing(), f, f)).epsilon(1e-12));
    }
}

TEST_CASE("Beurling-Deny triple") {
    SUBCASE("two points") {
        const BeurlingDenyTriple bd = beurling_deny(fixtures::two_point_form());
        CHECK(bd.jump_at(0, 1) == 0.5);
        CHECK(bd.jump_at(1, 0) == 0.5);
        CHECK(bd.killing.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("killing only") {
        const BeurlingDenyTriple bd = beurling_deny(fixtures::killing_only_form());
        CHECK(bd.jump_kernel.empty());
        CHECK(bd.killing[0] == 2.0);
    }
    SUBCASE("mixed") {
        const Edge e{0, 1, 3.0};
        const GraphForm form = GraphForm::from_edges(2, std::span(&e, 1), vec({1, 0}), Eigen::VectorXd::Ones(2));
        const BeurlingDenyTriple bd = beurling_deny(form);
        CHECK(bd.jump_at(0, 1) == 1.5);
        CHECK(bd.killing[0] == 1.0);
        CHECK(bd.killing[1] == 0.0);
        const Function f = vec({2, -1});
        CHECK(bd.total_energy(f) == doctest::Approx(energy(form, f)));
        CHECK(bd.local_energy(f) == 0.0);
    }
}

TEST_CASE("contraction check") {
    const GraphForm form = fixtures::two_point_form();
    const ContractionReport r = contraction_check(form, vec({-1, 2}));
    CHECK(r.holds);
    CHECK(r.rows.front().alpha == 0.0);
    CHECK(r.rows.front().energy_before == 9.0);
    CHECK(r.rows.front().energy_after == 1.0);
    const ContractionReport inside = contraction_check(form, vec({0.2, 0.7}));
    CHECK(inside.rows.front().energy_after == inside.rows.front().energy_before);
    const ContractionReport flat = contraction_check(form, vec({4, 4}));
    CHECK(flat.rows.front().energy_before == 0.0);
    CHECK(flat.rows.front().energy_after == 0.0);
}

TEST_CASE("algebra bound") {
    const GraphForm form = fixtures::two_point_form();
    const AlgebraBoundReport one = algebra_bound_check(form, vec({0, 3}), vec({1, 1}));
    CHECK(one.lhs == doctest::Approx(3.0));
    CHECK(one.rhs >= one.lhs);
    CHECK(algebra_bound_check(form, vec({0, 0}), vec({0, 0})).holds);
    fixtures::Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const GraphForm r = fixtures::random_form(rng, {8, 8, 0.5, 0.3, 0});
        CHECK(algebra_bound_check(r, fixtures::random_function(rng, 8), fixtures::random_function(rng, 8)).holds);
    }
}

}  // TEST_SUITE
