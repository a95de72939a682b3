#pragma once

#include "dirichlet/graph_form.hpp"
#include "dirichlet/truncation.hpp"

#include <random>
#include <vector>

namespace dirichlet::fixtures {

using Rng = std::mt19937_64;

struct RandomFormOptions {
    Index min_points = 2;
    Index max_points = 12;
    double edge_probability = 0.4;
    double killing_probability = 0.3;
    /// Probability that a point is left isolated without killing.
    double inactive_probability = 0.0;
};

/// Conductances in (0, 2], killing in (0, 1], base measure in [0.1, 2].
GraphForm random_form(Rng& rng, const RandomFormOptions& options = {});

/// Connected random form (a random spanning path plus extra edges).
GraphForm random_connected_form(Rng& rng, Index points, double edge_probability = 0.4,
                                double killing_probability = 0.3);

Function random_function(Rng& rng, Index n, double scale = 1.0);

/// c(0,1) = 1, kappa = 0, mu = (1,1).
GraphForm two_point_form();
/// One point, kappa(0) = 2, mu = 1.
GraphForm killing_only_form();
/// Edge 0-1 of conductance 1; point 2 isolated with no killing.
GraphForm three_point_inactive_form();

/// Discretized (0,1): x_i = i/n, i = 0..n, conductance n between neighbours,
/// trapezoid weights h/2, h, ..., h, h/2 (discrete Lebesgue measure).
GraphForm path_graph(Index n);
Function path_coordinates(Index n);

/**
 * Unit interval with Dirichlet boundary: 999 interior vertices, h = 1/1000,
 * conductance 1/h between neighbours and killing 1/h at both end vertices
 * (the two boundary edges).
 *
 * Energy measures of this strongly local form live on cells, so dominance and
 * minimality are read on the atom space cells + vertices: atoms 0..999 are
 * the cells (cell 0 and cell 999 are the boundary edges), atoms 1000..1998 the
 * vertices. m' is Lebesgue measure on cells, m = m' + unit mass at the vertex x = 1/2.
 */
struct NonMinimalFixture {
    GraphForm form;
    Index cells = 1000;
    Index vertices = 999;
    Index midpoint_atom = 0;
    std::vector<Measure> basis;  ///< cell-resolution Gamma(1_v) for every vertex v
    Measure m_prime;
    Measure m;
};

NonMinimalFixture non_minimal_fixture();

/// Cell-resolution energy measure of f on the fixture's atom space.
Measure non_minimal_cell_measure(const NonMinimalFixture& fx, const Function& f);

/// Path 0-1-2 with kappa(0) = 1 plus an isolated point 3 with mu(3) = 0 and no
/// killing, so cap({3}) = 0. The measure is minimal_edm plus unit mass at 3.
struct NullPointFixture {
    GraphForm form;
    Measure m;
    Index null_point = 3;
};

NullPointFixture null_point_fixture();

/// Two-point form, m = (1, 0) and u_n = 1_1 for n = 1..count.
struct AdversarialFixture {
    GraphForm form;
    Measure m;
    FunctionSequence seq;
};

AdversarialFixture adversarial_closability_fixture(Index count = 20);

/// Path graph with n intervals; u_k = sin(pi x) / k for k = 1..count.
FunctionSequence bump_sequence(Index n, Index count);

}  // namespace dirichlet::fixtures
