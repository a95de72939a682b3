#include "dirichlet/errors.hpp"
#include "dirichlet/expression.hpp"
#include "dirichlet/io.hpp"
#include "helpers.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace dirichlet;
using testutil::vec;

TEST_SUITE("io") {

TEST_CASE("expressions") {
    const Variables v{0.5, 2, 10, 3};
    CHECK(Expression::parse("1 + 2 * 3")(v) == 7.0);
    CHECK(Expression::parse("2 ^ 3 ^ 2")(v) == 512.0);
    CHECK(Expression::parse("-x^2")(v) == -0.25);
    CHECK(Expression::parse("sin(pi*x)/n")(v) == doctest::Approx(1.0 / 3.0));
    CHECK(Expression::parse("max(i, N) - min(1, 2) + pow(2, 2)")(v) == 13.0);
    CHECK(Expression::parse("abs(-2) + floor(2.7) + sqrt(4) + exp(0) + log(e)")(v) == doctest::Approx(8.0));
    CHECK_THROWS_AS(Expression::parse("1 +"), InputError);
    CHECK_THROWS_AS(Expression::parse("foo(1)"), InputError);
    CHECK_THROWS_AS(Expression::parse("y"), InputError);
}

TEST_CASE("form specification round trip") {
    std::istringstream in(R"(# comment
point a 0.0
point b 0.5
edge a b 2   # trailing comment
killing b 1.5
measure a 0.25
edge b c 1
)");
    const LoadedForm lf = parse_form_spec(in);
    CHECK(lf.form.size() == 3);
    CHECK(lf.labels == std::vector<std::string>{"a", "b", "c"});
    CHECK(lf.index_of("c") == 2);
    CHECK(lf.form.conductance(0, 1) == 2.0);
    CHECK(lf.form.killing()[1] == 1.5);
    CHECK(lf.form.base_measure()[0] == 0.25);
    CHECK(lf.form.base_measure()[2] == 1.0);
    CHECK(lf.coordinates[1] == 0.5);

    std::ostringstream out;
    write_form_spec(out, lf.form, lf.labels);
    std::istringstream again(out.str());
    const LoadedForm back = parse_form_spec(again);
    CHECK(back.form.conductance_table() == lf.form.conductance_table());
    CHECK(back.form.killing() == lf.form.killing());
    CHECK(back.form.base_measure() == lf.form.base_measure());
}

TEST_CASE("form specification errors") {
    for (const char* bad : {"edge a b -1\n", "edge a a 1\n", "bogus a\n", "edge a b 1\nedge b a 2\n",
                            "killing a x\n", "measure a -1\n"}) {
        std::istringstream in(bad);
        CHECK_THROWS_AS(parse_form_spec(in), InputError);
    }
}

TEST_CASE("point values and sequences") {
    std::istringstream spec("point a 0\npoint b 0.5\npoint c 1\nedge a b 1\nedge b c 1\n");
    const LoadedForm lf = parse_form_spec(spec);
    std::istringstream csv("point,value\nc,2\na,1\n");
    testutil::check_close(read_point_values(csv, lf, 0.0), vec({1, 0, 2}));
    std::istringstream unknown("z,1\n");
    CHECK_THROWS_AS(read_point_values(unknown, lf, 0.0), InputError);
    const FunctionSequence s = make_sequence(Expression::parse("x / n"), 3, lf);
    REQUIRE(s.size() == 3);
    testutil::check_close(s.terms[1], vec({0, 0.25, 0.5}));
    CHECK(parse_point_list("a,2", lf) == PointSet{0, 2});
    CHECK_THROWS_AS(parse_point_list("q", lf), InputError);
}

TEST_CASE("digests and number format") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fmt_num(1.0 / 3.0) == "0.333333333333333");
    CHECK(fmt_num(1.5) == "1.5");
}

}  // TEST_SUITE
