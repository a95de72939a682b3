#include "dirichlet/errors.hpp"
#include "dirichlet/fixtures.hpp"
#include "dirichlet/gelfand.hpp"
#include "helpers.hpp"

using namespace dirichlet;
using testutil::vec;

TEST_SUITE("gelfand-transfer") {

TEST_CASE("build_algebra") {
    const Measure mu(vec({1, 1, 1}));
    const AlgebraSpec basis = build_algebra(mu, {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})});
    CHECK(spectrum(basis).size() == 3);
    CHECK(spectrum(build_algebra(mu, {vec({1, 1, 1})})).size() == 1);
    try {
        (void)build_algebra(mu, {vec({1, 2, 0})});
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("point 2") != std::string::npos);
    }
}

TEST_CASE("spectrum") {
    SUBCASE("separating generators") {
        const Measure mu(vec({1, 2, 3}));
        const SpectrumQuotient q = spectrum(build_algebra(mu, {vec({1, 2, 3})}));
        CHECK(q.size() == 3);
        testutil::check_close(q.pushed.weights(), mu.weights());
    }
    SUBCASE("constant generator") {
        const SpectrumQuotient q = spectrum(build_algebra(Measure(vec({1, 1, 1})), {vec({1, 1, 1})}));
        CHECK(q.size() == 1);
        CHECK(q.pushed[0] == 3.0);
    }
    SUBCASE("shared level pair") {
        const SpectrumQuotient q =
            spectrum(build_algebra(Measure(vec({1, 1, 1, 1})), {vec({1, 2, 1, 3}), vec({5, 6, 5, 6})}));
        CHECK(q.size() == 3);
        CHECK(q.classes[0] == PointSet{0, 2});
        CHECK(q.embedding[2] == 0);
        CHECK(q.pushforward_error <= 1e-12);
    }
}

TEST_CASE("transfer") {
    SUBCASE("separating generators reproduce the form") {
        fixtures::Rng rng(6);
        const GraphForm form = fixtures::random_form(rng, {5, 5, 0.6, 0.4, 0});
        const TransferResult t = transfer(form, build_algebra(Measure(form.base_measure()), {vec({1, 2, 3, 4, 5})}));
        CHECK(t.form.conductance_table() == form.conductance_table());
        CHECK(t.form.killing() == form.killing());
        const Function f = fixtures::random_function(rng, 5);
        CHECK(energy(t.form, t.quotient.push(f, Measure(form.base_measure()))) == energy(form, f));
    }
    SUBCASE("inactive duplicates merge cleanly") {
        // 0 - 1 joined; 2 and 3 inactive and identified.
        const Edge e{0, 1, 2.0};
        const GraphForm form = GraphForm::from_edges(4, std::span(&e, 1), vec({0.5, 0, 0, 0}), vec({1, 1, 2, 3}));
        const AlgebraSpec spec = build_algebra(Measure(form.base_measure()), {vec({1, 2, 7, 7})});
        const TransferResult t = transfer(form, spec);
        CHECK(t.quotient.size() == 3);
        CHECK(t.quotient.pushed[2] == 5.0);
        const Function f = vec({0.3, -1.2, 4, 9});
        CHECK(energy(t.form, t.quotient.push(f, spec.mu)) == energy(form, f));
    }
    SUBCASE("merging across a conductance gives a witness") {
        const GraphForm form = fixtures::two_point_form();
        const AlgebraSpec spec = build_algebra(Measure(form.base_measure()), {vec({1, 1})});
        try {
            (void)transfer(form, spec);
            FAIL("expected WellDefinednessError");
        } catch (const WellDefinednessError& e) {
            const SpectrumQuotient q = spectrum(spec);
            CHECK(q.push(e.f(), spec.mu)[0] == doctest::Approx(q.push(e.g(), spec.mu)[0]));
            CHECK(e.energy_f() > 0.0);
            CHECK(e.energy_g() == 0.0);
        }
    }
}

TEST_CASE("transferred carre du champ") {
    SUBCASE("valid transfer") {
        fixtures::Rng rng(14);
        const GraphForm form = fixtures::random_form(rng, {6, 6, 0.6, 0.4, 0});
        const TransferResult t =
            transfer(form, build_algebra(Measure(form.base_measure()), {vec({1, 2, 3, 4, 5, 6})}));
        CHECK(transferred_carre_check(t.form).passes);
    }
    SUBCASE("inactive classes are removed by the quotient") {
        const GraphForm three = fixtures::three_point_inactive_form();
        const TransferResult t = transfer(three, build_algebra(Measure(three.base_measure()), {vec({1, 2, 3})}));
        const TransferredCarreReport r = transferred_carre_check(t.form);
        CHECK(r.passes);
        CHECK(r.m[2] == 0.0);
        CHECK(r.reduced.retained == PointSet{0, 1});
        CHECK(r.carre.admits);
    }
    SUBCASE("zero-energy form") {
        const GraphForm empty = GraphForm::from_edges(2, {}, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2));
        CHECK_THROWS_AS(transferred_carre_check(empty), PreconditionError);
    }
}

}  // TEST_SUITE
