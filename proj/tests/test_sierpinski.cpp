#include "dirichlet/errors.hpp"
#include "dirichlet/fixtures.hpp"
#include "dirichlet/sierpinski.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace dirichlet;
using testutil::vec;

TEST_SUITE("fractal-sg") {

TEST_CASE("level forms") {
    CHECK(sg_level_form(0).vertex_count() == 3);
    CHECK(sg_level_form(0).conductance() == 1.0);
    CHECK(sg_level_form(1).vertex_count() == 6);
    CHECK(sg_level_form(1).conductance() == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(sg_level_form(2).vertex_count() == 15);
    for (int n = 0; n <= 8; ++n) {
        CHECK(sg_level_form(n).vertex_count() == sg_vertex_count(n));
        CHECK(sg_level_form(n).base_measure().sum() == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(sg_level_form(kMaxSgLevel + 1), InputError);
}

TEST_CASE("cell words") {
    CHECK(CellWord::from_rank(2, 5).str() == "12");
    CHECK(CellWord::from_rank(3, 26).rank() == 26);
    CHECK(CellWord::from_rank(0, 0).str().empty());
    const SGLevelForm& sg = sg_level_form(3);
    CHECK(sg.ancestor(26, 1) == 2);
    CHECK(sg.ancestor(13, 2) == 4);
}

TEST_CASE("level-one calibration oracle") {
    const LevelOneCalibration c = calibrate_level_one();
    CHECK(std::abs(c.renormalization - 5.0 / 3.0) <= 1e-12);
    CHECK(std::abs(c.adjacent_weight - 0.4) <= 1e-12);
    CHECK(std::abs(c.opposite_weight - 0.2) <= 1e-12);
    testutil::check_close(c.midpoints_for_unit_corner, vec({0.4, 0.4, 0.2}), 1e-12);
}

TEST_CASE("harmonic extension") {
    const SGLevelForm& one = sg_level_form(1);
    const Function h = harmonic_extend(one, Eigen::Vector3d(1, 0, 0));
    CHECK(h[3] == doctest::Approx(0.4));
    CHECK(h[4] == doctest::Approx(0.4));
    CHECK(h[5] == doctest::Approx(0.2));
    CHECK(one.energy(h) == doctest::Approx(2.0));
    CHECK(boundary_energy(Eigen::Vector3d(1, 0, 0)) == 2.0);
    const Function c = harmonic_extend(sg_level_form(4), Eigen::Vector3d(1, 1, 1));
    CHECK((c.array() - 1.0).abs().maxCoeff() == 0.0);
    CHECK(sg_level_form(4).energy(c) == 0.0);
    for (int n = 0; n <= 12; ++n) {
        const SGLevelForm& sg = sg_level_form(n);
        CHECK(sg.energy(harmonic_extend(sg, Eigen::Vector3d(1, 0, 0))) == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("restriction compatibility") {
    fixtures::Rng rng(2);
    const SGLevelForm& coarse = sg_level_form(2);
    const SGLevelForm& fine = sg_level_form(3);
    const Function f = fixtures::random_function(rng, fine.vertex_count());
    // Vertices of V_2 keep their indices inside V_3.
    CHECK(fine.energy(f) >= coarse.energy(f.head(static_cast<Eigen::Index>(coarse.vertex_count()))));
}

TEST_CASE("cell energy measures") {
    const SGLevelForm& sg = sg_level_form(5);
    const Function h = harmonic_extend(sg, Eigen::Vector3d(1, 0, 0));
    const Measure l1 = cell_energy_measure(sg, h, 1);
    CHECK(l1.size() == 3);
    CHECK(l1.total() == doctest::Approx(2.0));
    CHECK(cell_energy_measure(sg, Function::Constant(static_cast<Eigen::Index>(sg.vertex_count()), 3.0), 2).total() ==
          0.0);
    for (int l = 0; l < 5; ++l) {
        const Measure a = cell_energy_measure(sg, h, l), b = cell_energy_measure(sg, h, l + 1);
        for (Index w = 0; w < a.size(); ++w)
            CHECK(a[w] == doctest::Approx(b[3 * w] + b[3 * w + 1] + b[3 * w + 2]));
    }
    const BeurlingDenyTriple bd = sg_beurling_deny(sg);
    CHECK(bd.jump_kernel.empty());
    CHECK(bd.local_energy(h) == doctest::Approx(2.0));
}

TEST_CASE("Kusuoka measure") {
    CHECK(kusuoka_measure(4, 0).total() == doctest::Approx(1.0));
    CHECK(kusuoka_measure(4, 0).size() == 1);
    const Measure m1 = kusuoka_measure(6, 1);
    CHECK(m1.total() == doctest::Approx(1.0));
    // The orthonormal pair makes m basis invariant and dihedrally symmetric, so level-1 masses are equal.
    for (Index w = 0; w < 3; ++w) CHECK(m1[w] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // Harmonic functions have finite cell densities.
    const SGLevelForm& sg = sg_level_form(6);
    const Measure m4 = kusuoka_measure(6, 4);
    const Function h = harmonic_extend(sg, Eigen::Vector3d(0.3, -1.2, 2.0));
    const Measure g = cell_energy_measure(sg, h, 4);
    for (Index w = 0; w < m4.size(); ++w) {
        REQUIRE(m4[w] > 0.0);
        CHECK(std::isfinite(g[w] / m4[w]));
    }
}

TEST_CASE("singularity diagnostics") {
    const SingularityReport r0 = singularity_diagnostic(0);
    CHECK(r0.spread == 1.0);
    CHECK(r0.entropy_ratio == 1.0);
    CHECK(singularity_diagnostic(8).spread > 100.0);
    const SingularityTrend t = singularity_trend(10);
    CHECK(t.spread_nondecreasing);
    CHECK(t.entropy_strictly_decreasing_from_2);
}

TEST_CASE("local truncation equality") {
    const int n = 6;
    const SGLevelForm& sg = sg_level_form(n);
    const Function h = harmonic_extend(sg, Eigen::Vector3d(1, 0, 0));
    SUBCASE("alpha above the maximum") {
        const LocalTruncationReport r = local_truncation_equality(sg, h, 2.0, n);
        CHECK(r.lhs == 0.0);
        CHECK(r.inside_mass == 0.0);
    }
    SUBCASE("harmonic function, alpha = 1/2") {
        const LocalTruncationReport r = local_truncation_equality(sg, h, 0.5, n);
        CHECK(r.bounded);
        CHECK(r.defect <= r.straddle_mass * (1 + 1e-12));
    }
    SUBCASE("plateau without straddling cells") {
        // Lifted above alpha everywhere: every cell lies in {f >= alpha}.
        const Function f = (h.array() + 1.5).matrix();
        const LocalTruncationReport r = local_truncation_equality(sg, f, 1.0, n);
        CHECK(r.straddling_cells == 0);
        CHECK(r.inside_cells == sg.cell_count());
        CHECK(r.exact);
        CHECK(r.lhs == doctest::Approx(2.0));
    }
}

TEST_CASE("locality and product rule") {
    const SGLevelForm& coarse = sg_level_form(4);
    Function f = Function::Zero(static_cast<Eigen::Index>(coarse.vertex_count()));
    for (Index w = 0; w < coarse.cell_count(); ++w)
        if (coarse.ancestor(w, 1) == 2)
            for (Index v : coarse.cells()[w]) f[static_cast<Eigen::Index>(v)] = 1.0;
    CHECK(sg_locality_check(coarse, f, 1));
    double last = 1e300;
    for (int n : {3, 5, 7}) {
        const SGLevelForm& sg = sg_level_form(n);
        const Function a = harmonic_extend(sg, Eigen::Vector3d(1, 0, 0));
        const Function b = harmonic_extend(sg, Eigen::Vector3d(0, 1, 0.5));
        const Function c = harmonic_extend(sg, Eigen::Vector3d(0.2, 0, 1));
        const ProductRuleReport r = sg_product_rule_defect(sg, a, b, c);
        CHECK(r.defect < last);
        last = r.defect;
    }
}

}  // TEST_SUITE
