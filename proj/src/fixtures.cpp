#include "dirichlet/fixtures.hpp"

#include "dirichlet/energy_dominance.hpp"
#include "dirichlet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dirichlet::fixtures {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Eigen::VectorXd random_measure(Rng& rng, Index n) {
    Eigen::VectorXd mu(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < mu.size(); ++i) mu[i] = uniform(rng, 0.1, 2.0);
    return mu;
}

}  // namespace

GraphForm random_form(Rng& rng, const RandomFormOptions& o) {
    const Index n = std::uniform_int_distribution<Index>(o.min_points, o.max_points)(rng);
    std::vector<bool> inactive(n);
    for (Index x = 0; x < n; ++x) inactive[x] = coin(rng, o.inactive_probability);
    std::vector<Edge> edges;
    for (Index a = 0; a < n; ++a)
        for (Index b = a + 1; b < n; ++b)
            if (!inactive[a] && !inactive[b] && coin(rng, o.edge_probability))
                edges.push_back({a, b, uniform(rng, 0.0, 2.0) + 1e-3});
    Eigen::VectorXd killing = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Index x = 0; x < n; ++x)
        if (!inactive[x] && coin(rng, o.killing_probability)) killing[static_cast<Eigen::Index>(x)] = uniform(rng, 0.0, 1.0) + 1e-3;
    return GraphForm::from_edges(n, edges, killing, random_measure(rng, n));
}

GraphForm random_connected_form(Rng& rng, Index points, double edge_probability, double killing_probability) {
    std::vector<Index> order(points);
    for (Index i = 0; i < points; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points), static_cast<Eigen::Index>(points));
    for (Index k = 0; k + 1 < points; ++k) {
        const auto a = static_cast<Eigen::Index>(order[k]), b = static_cast<Eigen::Index>(order[k + 1]);
        c(a, b) = c(b, a) = uniform(rng, 0.0, 2.0) + 1e-3;
    }
    for (Eigen::Index a = 0; a < c.rows(); ++a)
        for (Eigen::Index b = a + 1; b < c.rows(); ++b)
            if (c(a, b) == 0.0 && coin(rng, edge_probability)) c(a, b) = c(b, a) = uniform(rng, 0.0, 2.0) + 1e-3;
    Eigen::VectorXd killing = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(points));
    for (Eigen::Index x = 0; x < killing.size(); ++x)
        if (coin(rng, killing_probability)) killing[x] = uniform(rng, 0.0, 1.0) + 1e-3;
    return GraphForm::from_table(c, killing, random_measure(rng, points));
}

Function random_function(Rng& rng, Index n, double scale) {
    Function f(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = uniform(rng, -scale, scale);
    return f;
}

GraphForm two_point_form() {
    const Edge e{0, 1, 1.0};
    return GraphForm::from_edges(2, std::span(&e, 1), Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2));
}

GraphForm killing_only_form() {
    return GraphForm::from_edges(1, {}, Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Ones(1));
}

GraphForm three_point_inactive_form() {
    const Edge e{0, 1, 1.0};
    return GraphForm::from_edges(3, std::span(&e, 1), Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(3));
}

GraphForm path_graph(Index n) {
    if (n < 1) throw InputError("path graph needs at least one interval");
    const double h = 1.0 / static_cast<double>(n);
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i) edges.push_back({i, i + 1, 1.0 / h});
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n + 1), h);
    mu[0] = mu[static_cast<Eigen::Index>(n)] = h / 2.0;
    return GraphForm::from_edges(n + 1, edges, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1)), mu);
}

Function path_coordinates(Index n) {
    return Function::LinSpaced(static_cast<Eigen::Index>(n + 1), 0.0, 1.0);
}

NonMinimalFixture non_minimal_fixture() {
    NonMinimalFixture fx;
    const Index v = fx.vertices;
    const double h = 1.0 / static_cast<double>(fx.cells);
    std::vector<Edge> edges;
    for (Index i = 0; i + 1 < v; ++i) edges.push_back({i, i + 1, 1.0 / h});
    Eigen::VectorXd killing = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(v));
    killing[0] = killing[static_cast<Eigen::Index>(v - 1)] = 1.0 / h;
    fx.form = GraphForm::from_edges(v, edges, killing, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(v), h));

    const Index atoms = fx.cells + fx.vertices;
    for (Index p = 0; p < v; ++p) fx.basis.push_back(non_minimal_cell_measure(fx, indicator(v, p)));
    Eigen::VectorXd mp = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(atoms));
    mp.head(static_cast<Eigen::Index>(fx.cells)).setConstant(h);
    fx.m_prime = Measure(mp);
    // Interior vertex k (1-based) sits at x = k h; x = 1/2 is k = 500, form point 499.
    fx.midpoint_atom = fx.cells + (fx.cells / 2 - 1);
    fx.m = fx.m_prime + Measure::dirac(atoms, fx.midpoint_atom);
    return fx;
}

Measure non_minimal_cell_measure(const NonMinimalFixture& fx, const Function& f) {
    require_dimension(fx.form, f, "f");
    const double c = static_cast<double>(fx.cells);  // conductance 1/h
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fx.cells + fx.vertices));
    // Cell j joins interior vertices j and j+1 (1-based); vertices 0 and 1000 are the boundary, value 0.
    auto value = [&](Index k) { return k == 0 || k == fx.cells ? 0.0 : f[static_cast<Eigen::Index>(k - 1)]; };
    for (Index j = 0; j < fx.cells; ++j) {
        const double d = value(j) - value(j + 1);
        g[static_cast<Eigen::Index>(j)] = c * d * d;
    }
    return Measure(std::move(g));
}

NullPointFixture null_point_fixture() {
    NullPointFixture fx;
    const Edge edges[] = {{0, 1, 1.0}, {1, 2, 2.0}};
    Eigen::VectorXd killing = Eigen::VectorXd::Zero(4);
    killing[0] = 1.0;
    Eigen::VectorXd mu = Eigen::VectorXd::Ones(4);
    mu[3] = 0.0;
    GraphForm::Options options;
    options.allow_null_measure = true;
    fx.form = GraphForm::from_edges(4, edges, killing, mu, options);
    fx.m = minimal_edm(fx.form) + Measure::dirac(4, fx.null_point);
    return fx;
}

AdversarialFixture adversarial_closability_fixture(Index count) {
    AdversarialFixture fx;
    fx.form = two_point_form();
    fx.m = Measure::dirac(2, 0);
    for (Index n = 1; n <= count; ++n) {
        fx.seq.terms.push_back(indicator(2, Index{1}));
        fx.seq.labels.push_back("u" + std::to_string(n));
    }
    return fx;
}

FunctionSequence bump_sequence(Index n, Index count) {
    const Function x = path_coordinates(n);
    const Function bump = (std::numbers::pi * x.array()).sin().matrix();
    FunctionSequence seq;
    for (Index k = 1; k <= count; ++k) {
        seq.terms.push_back(bump / static_cast<double>(k));
        seq.labels.push_back("u" + std::to_string(k));
    }
    return seq;
}

}  // namespace dirichlet::fixtures
