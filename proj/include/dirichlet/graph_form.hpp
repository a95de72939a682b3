#pragma once

#include "dirichlet/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace dirichlet {

/// Unordered pair of points with a positive weight.
struct Edge {
    Index a = 0;
    Index b = 0;
    double weight = 0.0;
};

/**
 * @brief Finite symmetric Dirichlet form with jump and killing parts.
 *
 * Energy convention:
 *   E(f) = 1/2 sum_{x,y} c(x,y) (f(x) - f(y))^2 + sum_x kappa(x) f(x)^2,
 * so the jump kernel of the Beurling-Deny decomposition is J = c/2.
 *
 * Conductances are stored in compressed rows (both directions), which keeps
 * level-14 gasket graphs in memory. Instances are immutable after construction.
 */
struct GraphFormOptions {
    /// Allows mu(x) = 0. Only used by capacity fixtures that need
    /// zero-capacity points.
    bool allow_null_measure = false;
};

class GraphForm {
public:
    using Options = GraphFormOptions;

    GraphForm() = default;

    /// Dense symmetric table; rejects asymmetric, negative or diagonal entries.
    static GraphForm from_table(const Eigen::MatrixXd& conductance, const Eigen::VectorXd& killing,
                                const Eigen::VectorXd& base_measure, Options options = {});

    /// Undirected edge list; each unordered pair may appear once.
    static GraphForm from_edges(Index points, std::span<const Edge> edges,
                                const Eigen::VectorXd& killing, const Eigen::VectorXd& base_measure,
                                Options options = {});

    Index size() const { return static_cast<Index>(killing_.size()); }

    std::span<const Index> neighbors(Index x) const;
    std::span<const double> row_conductances(Index x) const;
    /// Each undirected edge once, a < b.
    std::span<const Edge> edges() const { return edges_; }

    double conductance(Index x, Index y) const;
    double degree(Index x) const { return degree_[x]; }
    const Eigen::VectorXd& killing() const { return killing_; }
    const Eigen::VectorXd& base_measure() const { return measure_; }

    /// A point is active when it has an edge or positive killing.
    bool is_active(Index x) const { return degree_[x] > 0.0 || killing_[static_cast<Eigen::Index>(x)] > 0.0; }
    bool has_energy() const;

    Eigen::MatrixXd conductance_table() const;

    /// Same conductances and killing, new base measure.
    GraphForm with_base_measure(const Eigen::VectorXd& base_measure, Options options = {}) const;
    /// Same conductances and base measure, new killing.
    GraphForm with_killing(const Eigen::VectorXd& killing) const;

private:
    void build_rows();
    void check_measure(Options options) const;

    std::vector<Edge> edges_;
    std::vector<Index> row_start_;
    std::vector<Index> col_;
    std::vector<double> val_;
    std::vector<double> degree_;
    Eigen::VectorXd killing_;
    Eigen::VectorXd measure_;
};

// --- energies ---------------------------------------------------------------

double energy(const GraphForm& form, const Function& f, const Function& g);
double energy(const GraphForm& form, const Function& f);
/// E_1(f) = E(f) + sum_x mu(x) f(x)^2.
double energy_1(const GraphForm& form, const Function& f);

/// E(f, g) for f given sparsely; only edges touching the support of f contribute.
double energy_sparse(const GraphForm& form, std::span<const Index> support,
                     std::span<const double> values, const Function& g);

double jump_energy(const GraphForm& form, const Function& f);
double killing_energy(const GraphForm& form, const Function& f);

// --- energy measures --------------------------------------------------------

/// L_f(phi) = E(phi f, f) - 1/2 E(f^2, phi).
double energy_functional(const GraphForm& form, const Function& f, const Function& phi);

/// Gamma(f)(x) = sum_y J(x,y)(f(x)-f(y))^2 + 1/2 kappa(x) f(x)^2.
Measure energy_measure_closed_form(const GraphForm& form, const Function& f);

/// Gamma(f)(x) = L_f(1_x), evaluated locally around each x.
Eigen::VectorXd energy_measure_functional(const GraphForm& form, const Function& f);

/// Energy measure; computed by both routes above and cross-checked
/// (InternalError on disagreement).
Measure energy_measure(const GraphForm& form, const Function& f);

/// Gamma(f, g) = 1/4 (Gamma(f+g) - Gamma(f-g)).
SignedMeasure mutual_energy_measure(const GraphForm& form, const Function& f, const Function& g);

/// Gamma(1_e) as sparse (point, mass) pairs; supported on e and its neighbours.
std::vector<std::pair<Index, double>> indicator_energy_measure(const GraphForm& form, Index e);

// --- Beurling-Deny ----------------------------------------------------------

struct BeurlingDenyTriple {
    /// Strongly local part Gamma_c(f); zero for pure graph forms, cell-valued
    /// for gasket forms.
    std::function<Measure(const Function&)> local_part;
    /// J(a,b) = J(b,a) = weight, one entry per unordered pair.
    std::vector<Edge> jump_kernel;
    Eigen::VectorXd killing;

    double local_energy(const Function& f) const;
    /// E_j(f) = sum_{x,y} (f(x)-f(y))^2 J(x,y).
    double jump_energy(const Function& f) const;
    /// E_k(f) = sum_x f(x)^2 kappa(x).
    double killing_energy(const Function& f) const;
    double total_energy(const Function& f) const;
    double jump_at(Index x, Index y) const;
};

BeurlingDenyTriple beurling_deny(const GraphForm& form);

// --- Markov property and algebra bound ---------------------------------------

/// (0 v y) ^ 1 pointwise.
Function unit_contraction(const Function& f);

struct ContractionReport {
    struct Row {
        double alpha;  ///< 0 for the unit contraction
        double energy_before;
        double energy_after;
        bool holds;
    };
    std::vector<Row> rows;
    bool holds = true;
};

/// Checks E(Tf) <= E(f) for the unit contraction and each T_alpha. When
/// `alphas` is empty, uses fractions {1/8,1/4,1/2,1} of max|f| (and 1 for f = 0).
ContractionReport contraction_check(const GraphForm& form, const Function& f,
                                    std::span<const double> alphas = {});

struct AlgebraBoundReport {
    double lhs;  ///< E(fg)^{1/2}
    double rhs;  ///< E(f)^{1/2} max|g| + E(g)^{1/2} max|f|
    bool holds;
};

AlgebraBoundReport algebra_bound_check(const GraphForm& form, const Function& f, const Function& g);

void require_dimension(const GraphForm& form, const Function& f, const char* what);

}  // namespace dirichlet
