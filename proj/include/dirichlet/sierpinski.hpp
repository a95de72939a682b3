#pragma once

#include "dirichlet/graph_form.hpp"

#include <array>
#include <string>
#include <vector>

namespace dirichlet {

/// Address of a gasket cell: a word over {0,1,2}; its length is the level.
class CellWord {
public:
    CellWord() = default;
    explicit CellWord(std::vector<int> letters);
    /// Word of the level-`level` cell with lexicographic rank `rank`.
    static CellWord from_rank(int level, Index rank);

    int level() const { return static_cast<int>(letters_.size()); }
    Index rank() const;
    std::string str() const;  ///< "" for the root cell

private:
    std::vector<int> letters_;
};

inline constexpr int kMaxSgLevel = 14;

/**
 * @brief Level-n graph approximation of the Sierpinski gasket.
 *
 * Vertices 0, 1, 2 are the corners. Refining cell (a, b, c) creates the
 * midpoints m01, m02, m12 and the children (a, m01, m02), (m01, b, m12),
 * (m02, m12, c), so children of cell w have ranks 3w, 3w+1, 3w+2 and level-n
 * cells are stored in lexicographic word order. Cells share vertices but never
 * edges, so every edge has exactly one owning cell.
 */
class SGLevelForm {
public:
    explicit SGLevelForm(int level);

    int level() const { return level_; }
    Index vertex_count() const { return vertex_count_; }
    Index cell_count() const { return cells_.size(); }
    const std::vector<std::array<Index, 3>>& cells() const { return cells_; }
    /// For vertex v >= 3: (a, b, c) with v the midpoint of a-b and c opposite.
    const std::array<Index, 3>& midpoint_parents(Index v) const { return parents_[v - 3]; }
    /// (5/3)^n.
    double conductance() const { return conductance_; }
    /// Self-similar measure: each level-n cell gives 3^-n / 3 to each vertex.
    const Eigen::VectorXd& base_measure() const { return measure_; }

    /// Level-l cell containing level-n cell `cell`.
    Index ancestor(Index cell, int l) const;

    /// E_n(f) summed cell by cell.
    double energy(const Function& f) const;

    /// The level-n graph as a GraphForm (built on request; large at high levels).
    GraphForm graph() const;

private:
    int level_;
    Index vertex_count_ = 3;
    double conductance_ = 1.0;
    std::vector<std::array<Index, 3>> cells_;
    std::vector<std::array<Index, 3>> parents_;
    Eigen::VectorXd measure_;
};

/// (3^{n+1} + 3) / 2.
Index sg_vertex_count(int level);

/// Memoized level-n gasket; throws InputError outside 0..14.
const SGLevelForm& sg_level_form(int level);

/// Values recovered by minimizing the level-1 energy directly.
struct LevelOneCalibration {
    double renormalization;  ///< E_0(b) / min E_1 at unit conductances
    double adjacent_weight;  ///< midpoint weight of each adjacent corner
    double opposite_weight;  ///< midpoint weight of the opposite corner
    Eigen::Vector3d midpoints_for_unit_corner;  ///< boundary (1,0,0): m01, m02, m12
};

/// Brute-force oracle: the level-1 network assembled independently and solved
/// densely.
LevelOneCalibration calibrate_level_one();

/// Harmonic extension of corner values to V_n by the (2a+2b+c)/5 rule.
Function harmonic_extend(const SGLevelForm& sg, const Eigen::Vector3d& boundary);

/// E_0 of corner data: sum over the three edges of the squared difference.
double boundary_energy(const Eigen::Vector3d& boundary);

/// Mutual cell measure Gamma_c(f,g)(w) at level l <= n.
Eigen::VectorXd cell_energy_measure(const SGLevelForm& sg, const Function& f, const Function& g, int l);
Measure cell_energy_measure(const SGLevelForm& sg, const Function& f, int l);

/// Strongly local Beurling-Deny triple of the level-n gasket: local part is the
/// level-n cell energy measure, no jumps, no killing.
BeurlingDenyTriple sg_beurling_deny(const SGLevelForm& sg);

/// Energy-orthonormal harmonic pair of corner data: (1,0,-1) and (1,-2,1),
/// each divided by the square root of its computed E_0.
std::array<Eigen::Vector3d, 2> orthonormal_harmonic_boundaries();

/// m = 1/2 (Gamma(h1) + Gamma(h2)) over level-l cells, computed at depth n >= l.
Measure kusuoka_measure(int n, int l);

struct SingularityReport {
    int level = 0;
    double min_log_ratio = 0.0;  ///< min over cells of log(m(w) 3^l)
    double max_log_ratio = 0.0;
    double spread = 1.0;         ///< max / min cell mass
    double entropy_ratio = 1.0;  ///< H_l / (l log 3); 1 at l = 0
    std::vector<double> histogram_edges;
    std::vector<Index> histogram;
    std::vector<double> log_ratios;  ///< per cell
    Measure masses;
};

/// Diagnostic for one level, l <= 12.
SingularityReport singularity_diagnostic(int l, Index bins = 20);

struct SingularityTrend {
    std::vector<SingularityReport> levels;  ///< l = 0..max_level
    bool spread_nondecreasing = true;
    bool entropy_strictly_decreasing_from_2 = true;
};

SingularityTrend singularity_trend(int max_level, Index bins = 20);

struct LocalTruncationReport {
    double lhs = 0.0;           ///< E_n(f - T_alpha f)
    double inside_mass = 0.0;   ///< Gamma(f) of cells inside {f >= alpha} or inside {f <= -alpha}
    double straddle_mass = 0.0; ///< Gamma(f) of cells that are neither inside nor below alpha
    double defect = 0.0;        ///< lhs - inside_mass
    Index inside_cells = 0;
    Index straddling_cells = 0;
    bool bounded = true;        ///< 0 <= defect <= straddle_mass
    bool exact = true;          ///< defect = 0
};

LocalTruncationReport local_truncation_equality(const SGLevelForm& sg, const Function& f, double alpha, int l);

struct ProductRuleReport {
    int level = 0;
    double defect = 0.0;  ///< sum_w |G(fg,h) - f(w) G(g,h) - g(w) G(f,h)| / sum_w (|f(w) G(g,h)| + |g(w) G(f,h)|)
};

/// Product rule of the local part at cell resolution, with f, g evaluated at
/// cell barycentres; the defect is a discretization artifact and shrinks with n.
ProductRuleReport sg_product_rule_defect(const SGLevelForm& sg, const Function& f, const Function& g,
                                         const Function& h);

/// Locality: Gamma_c(f)(w) = 0 on every level-l cell where f is constant.
bool sg_locality_check(const SGLevelForm& sg, const Function& f, int l);

}  // namespace dirichlet
