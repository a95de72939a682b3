#pragma once

#include "dirichlet/energy_dominance.hpp"
#include "dirichlet/graph_form.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dirichlet {

/// T_alpha: clips f to [-alpha, alpha]. Throws InputError for alpha <= 0.
Function truncate(const Function& f, double alpha);

/// Constant in E(f - T_alpha f) <= c Gamma(f)({|f| >= alpha}): jump part
/// contributes 8 Gamma_j, killing part 4 Gamma_k = 8 (1/2 Gamma_k), local part 1.
inline constexpr double kTruncationConstant = 8.0;

struct TruncationBoundReport {
    double lhs = 0.0;         ///< E(f - T_alpha f)
    double gamma_mass = 0.0;  ///< Gamma(f)({|f| >= alpha})
    double rhs = 0.0;         ///< 8 * gamma_mass
    double sharp_ratio = 0.0; ///< lhs / gamma_mass (0 when both vanish)
    double jump_lhs = 0.0;    ///< E_j(f - T_alpha f)
    double jump_rhs = 0.0;    ///< 8 Gamma_j(f)({|f| >= alpha})
    double killing_lhs = 0.0; ///< E_k(f - T_alpha f)
    double killing_rhs = 0.0; ///< 4 Gamma_k(f)({|f| >= alpha})
    bool holds = true;
};

TruncationBoundReport truncation_energy_bound(const GraphForm& form, const Function& f, double alpha);

struct FunctionSequence {
    std::vector<Function> terms;
    std::vector<std::string> labels;

    Index size() const { return terms.size(); }
};

/// Thresholds shared by the closability diagnostics.
struct ClosabilityTolerances {
    double cauchy = 1e-6;  ///< E(u_n - u_m) < cauchy for all n, m >= N
    double null = 1e-2;    ///< ||u_last||_{L2(m)} <= null * max(1, max_n ||u_n||_{L2(m)})
    double decay = 1e-2;   ///< final energy <= decay * max energy counts as "tends to 0"
    Index max_steps = 64;  ///< subsequence steps j produced at most
};

struct CauchyReport {
    bool cauchy = false;
    Index index = 0;        ///< smallest N (0-based) whose tail has diameter < tol
    double diameter = 0.0;  ///< sup_{n,m >= N} E(u_n - u_m)
};

/// Requires a tail of at least two terms.
CauchyReport cauchy_check(const GraphForm& form, const FunctionSequence& seq, double tol);

double l2_norm(const Function& f, const Measure& m);

/**
 * sup over a set family {A : m(A) < delta} of Gamma(A).
 *
 * The exact supremum is a 0/1 knapsack. It is enumerated when at most
 * kExactKnapsackItems points carry m-mass; otherwise `attained` is a greedy
 * set (density order, skipping items that overflow) and `upper` the
 * fractional relaxation.
 */
struct SmallSetMass {
    double attained = 0.0;
    double upper = 0.0;
    bool exact = false;
};

inline constexpr Index kExactKnapsackItems = 14;

class SmallSetProfile {
public:
    SmallSetProfile(const Measure& gamma, const Measure& m);
    SmallSetMass sup_below(double delta) const;

private:
    struct Item {
        double mass;
        double gamma;
    };
    std::vector<Item> items_;  // sorted by density, descending
    std::vector<std::pair<double, double>> frontier_;  // exact: (mass, best gamma) prefix maxima
    bool exact_ = false;
};

struct UIModulus {
    struct Row {
        double delta;
        double epsilon;  ///< sup_n sup_{m(A) < delta} Gamma(u_n)(A), attained
        double upper;    ///< certified upper bound (equals epsilon when exact)
        bool exact;
    };
    std::vector<Row> rows;  ///< delta = m(X) 2^-k, decreasing
    /// Sequence indices used for the pairwise tables (all, or an even thinning).
    std::vector<Index> table_indices;
    /// int |Gamma(u_a) - Gamma(u_b)| dm for a, b in table_indices.
    Eigen::MatrixXd l1_distance;
    /// 2 (int |Gamma(u_a)^1/2 - Gamma(u_b)^1/2|^2 dm)^1/2 sup_n E(u_n)^1/2.
    Eigen::MatrixXd l1_bound;
    bool bound_holds = true;
    CauchyReport cauchy;
    bool monotone = true;
};

/// Throws NotEnergyDominant when m is not energy dominant.
UIModulus uniform_integrability_modulus(const GraphForm& form, const FunctionSequence& seq,
                                        const Measure& m, ClosabilityTolerances tol = {},
                                        Index max_table = 200);

struct JumpTightnessReport {
    double value = 0.0;  ///< sup_n sum_x sum_{y not in K} (w_n(x) - w_n(y))^2 J(x,y)
    PointSet set;
};

JumpTightnessReport jump_tightness(const GraphForm& form, const FunctionSequence& seq, const PointSet& set);

/// Adds points in order of decreasing m-mass until the tightness value drops below eps.
JumpTightnessReport tight_set_search(const GraphForm& form, const FunctionSequence& seq,
                                     const Measure& m, double eps);

struct Subsequence {
    struct Step {
        Index j;          ///< 1-based
        Index k;          ///< truncation level 1/k
        Index n;          ///< 0-based index into the original sequence
        double ui_bound;  ///< certified sup of Gamma(u_n')(A) over m(A) < 1/k, n' >= n
        double residual;  ///< E(v_j - T_{1/k} v_j)
        double target;    ///< 1/j
        bool ok;
    };
    std::vector<Step> steps;
    CauchyReport cauchy;
    double final_l2 = 0.0;
    bool all_ok = true;

    std::vector<Index> indices() const;
};

/// Two-threshold selection: k_j from uniform integrability, n_{k_j} from
/// m(|u_n| >= 1/k) < 1/k. Stops when the finite prefix cannot support the next
/// step. Throws PreconditionError naming the violated hypothesis.
Subsequence extract_subsequence(const GraphForm& form, const FunctionSequence& seq, const Measure& m,
                                ClosabilityTolerances tol = {});

struct ClosabilityReport {
    bool dominant = true;
    bool closable = true;  ///< E(u_n) -> 0 and E(w_j) -> 0 within resolution
    std::string diagnosis;

    /// Witness when m is not energy dominant: f and g agree m-a.e., E(f) != E(g).
    std::optional<Function> witness_f, witness_g;
    double witness_energy_f = 0.0, witness_energy_g = 0.0;

    std::vector<double> energies;  ///< E(u_n)
    std::vector<double> l2_norms;  ///< ||u_n||_{L2(m)}
    std::optional<Subsequence> subsequence;
    std::vector<double> w_energies;  ///< E(w_j), w_j = T_{1/k_j} v_j
    std::vector<double> w_sup;       ///< sup|w_j|
    bool sup_bound_ok = true;
};

ClosabilityReport closability_experiment(const GraphForm& form, const FunctionSequence& seq,
                                         const Measure& m, ClosabilityTolerances tol = {});

}  // namespace dirichlet
