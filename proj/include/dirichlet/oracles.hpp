#pragma once

#include "dirichlet/graph_form.hpp"

#include <vector>

// Brute-force reference computations. They share no code path with the
// production routines: everything goes through dense tables and explicit sums.
namespace dirichlet::oracle {

/// 1/2 sum_{x,y} c(x,y)(f(x)-f(y))(g(x)-g(y)) + sum_x kappa(x) f(x) g(x).
double energy(const Eigen::MatrixXd& c, const Eigen::VectorXd& kappa, const Function& f, const Function& g);

/// Gamma(f)(x) = E(1_x f, f) - 1/2 E(f^2, 1_x) through the dense energy.
Eigen::VectorXd energy_measure(const Eigen::MatrixXd& c, const Eigen::VectorXd& kappa, const Function& f);

/// min u^T M u subject to u >= 1 on A, by enumerating which constraints are
/// tight and solving each equality-constrained problem densely.
struct QpResult {
    double value;
    Function u;
};
QpResult box_qp(const Eigen::MatrixXd& M, const std::vector<Index>& set);

/// Quadratic form matrix of E (plus diag(extra)).
Eigen::MatrixXd form_matrix(const Eigen::MatrixXd& c, const Eigen::VectorXd& kappa, const Eigen::VectorXd& extra);

}  // namespace dirichlet::oracle
