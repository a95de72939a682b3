#include "dirichlet/energy_dominance.hpp"
#include "dirichlet/errors.hpp"
#include "dirichlet/fixtures.hpp"
#include "dirichlet/oracles.hpp"
#include "helpers.hpp"

using namespace dirichlet;
using testutil::vec;

TEST_SUITE("energy-dominance") {

TEST_CASE("minimal_edm examples") {
    const Measure two = minimal_edm(fixtures::two_point_form());
    CHECK(two[0] > 0.0);
    CHECK(two[1] > 0.0);
    const Measure three = minimal_edm(fixtures::three_point_inactive_form());
    CHECK(three[0] > 0.0);
    CHECK(three[2] == 0.0);
    CHECK(minimal_edm(fixtures::killing_only_form())[0] > 0.0);
    CHECK_THROWS_AS(minimal_edm(GraphForm::from_edges(2, {}, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2))),
                    PreconditionError);
}

TEST_CASE("minimal_edm charges exactly the active points") {
    fixtures::Rng rng(21);
    for (int t = 0; t < 100; ++t) {
        const GraphForm form = fixtures::random_form(rng, {2, 12, 0.4, 0.3, 0.3});
        if (!form.has_energy()) continue;
        const Measure m = minimal_edm(form);
        // Oracle: a point is charged by some Gamma(1_e) iff it has an edge or killing.
        const Eigen::MatrixXd c = form.conductance_table();
        for (Index x = 0; x < form.size(); ++x) {
            bool charged = false;
            for (Index e = 0; e < form.size(); ++e)
                charged = charged || oracle::energy_measure(c, form.killing(), indicator(form.size(), e))
                                         [static_cast<Eigen::Index>(x)] > 0.0;
            CHECK(m.charges(x) == charged);
        }
        CHECK(is_energy_dominant(form, m).dominant);
        CHECK(is_minimal_edm(form, m).minimal);
    }
}

TEST_CASE("uniform weights give the same null sets") {
    const GraphForm form = fixtures::three_point_inactive_form();
    const Measure a = minimal_edm(form), b = minimal_edm(form, {}, EdmWeights::uniform);
    for (Index x = 0; x < 3; ++x) CHECK(a.charges(x) == b.charges(x));
}

TEST_CASE("energy dominance") {
    const GraphForm form = fixtures::two_point_form();
    const DominanceReport r = is_energy_dominant(form, Measure(vec({1, 0})));
    CHECK_FALSE(r.dominant);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations.front() == 1);
    CHECK(is_energy_dominant(form, Measure(form.base_measure())).dominant);
}

TEST_CASE("minimality") {
    const GraphForm form = fixtures::three_point_inactive_form();
    const Measure m = minimal_edm(form) + Measure::dirac(3, 2);
    const MinimalityReport r = is_minimal_edm(form, m);
    CHECK_FALSE(r.minimal);
    CHECK(r.excess == PointSet{2});
    CHECK_THROWS_AS(is_minimal_edm(fixtures::two_point_form(), Measure(vec({1, 0}))), NotEnergyDominant);
}

TEST_CASE("midpoint atom: dominant but not minimal") {
    const auto fx = fixtures::non_minimal_fixture();
    const EnergyPattern p = energy_pattern(fx.basis);
    CHECK(is_energy_dominant(p, fx.m).dominant);
    const MinimalityReport r = is_minimal_edm(p, fx.m);
    CHECK_FALSE(r.minimal);
    CHECK(r.excess == PointSet{fx.midpoint_atom});
    CHECK(is_minimal_edm(p, fx.m_prime).minimal);
}

TEST_CASE("energy density") {
    const GraphForm form = fixtures::two_point_form();
    const DensityVector d = energy_density(form, vec({0, 1}), Measure(vec({0.5, 0.5})));
    testutil::check_close(Eigen::Map<const Eigen::VectorXd>(d.values.data(), 2), vec({1, 1}));
    const DensityVector z = energy_density(form, vec({0, 0}), Measure(vec({0.5, 0.5})));
    CHECK(z.values[0] == 0.0);
    CHECK(z.values[1] == 0.0);
}

TEST_CASE("classical anchor: path graph density") {
    const Index n = 1000;
    const GraphForm form = fixtures::path_graph(n);
    const DensityVector d = energy_density(form, fixtures::path_coordinates(n), Measure(form.base_measure()));
    for (Index k = 0; k < d.points.size(); ++k)
        if (d.points[k] != 0 && d.points[k] != n) CHECK(d.values[k] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(energy(form, fixtures::path_coordinates(n)) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("change of measure") {
    SUBCASE("inactive point is removed") {
        const GraphForm form = fixtures::three_point_inactive_form();
        const QuotientForm q = change_measure(form, minimal_edm(form));
        CHECK(q.retained == PointSet{0, 1});
        CHECK(energy(form, vec({1, 2, 3})) == energy(form, vec({1, 2, -40})));
        CHECK(energy(q.form, q.project(vec({1, 2, 3}))) == energy(form, vec({1, 2, 3})));
    }
    SUBCASE("full support keeps the form") {
        const GraphForm form = fixtures::two_point_form();
        const QuotientForm q = change_measure(form, Measure(vec({1, 1})));
        CHECK(q.retained.size() == 2);
        CHECK(energy(q.form, vec({0, 1})) == 1.0);
    }
    SUBCASE("non-dominant measure gives a witness") {
        const GraphForm form = fixtures::two_point_form();
        try {
            (void)change_measure(form, Measure(vec({1, 0})));
            FAIL("expected WellDefinednessError");
        } catch (const WellDefinednessError& e) {
            testutil::check_close(e.f(), vec({0, 1}));
            CHECK(e.energy_f() == 1.0);
            CHECK(e.energy_g() == 0.0);
        }
    }
}

TEST_CASE("density triangle inequality") {
    const GraphForm form = fixtures::two_point_form();
    const Measure m(vec({1, 1}));
    CHECK(density_triangle_check(form, vec({0, 1}), vec({0, 1}), m).holds);
    CHECK(density_triangle_check(form, vec({0, 1}), vec({0, 0}), m).holds);
    fixtures::Rng rng(8);
    for (int t = 0; t < 1000; ++t) {
        const GraphForm r = fixtures::random_form(rng, {10, 10, 0.4, 0.3, 0});
        CHECK(density_triangle_check(r, fixtures::random_function(rng, 10), fixtures::random_function(rng, 10),
                                     Measure(r.base_measure()))
                  .holds);
    }
}

TEST_CASE("carre du champ") {
    const GraphForm form = fixtures::two_point_form();
    CHECK(carre_du_champ_check(form, Measure(form.base_measure())).admits);
    CHECK_FALSE(carre_du_champ_check(form, Measure(vec({1, 0}))).admits);
    const CarreDuChampReport r = carre_du_champ_check(form, minimal_edm(form));
    CHECK(r.admits);
    CHECK(r.density.has_value());
}

}  // TEST_SUITE
