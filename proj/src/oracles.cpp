#include "dirichlet/oracles.hpp"

#include "dirichlet/errors.hpp"

#include <limits>

namespace dirichlet::oracle {

double energy(const Eigen::MatrixXd& c, const Eigen::VectorXd& kappa, const Function& f, const Function& g) {
    double s = 0.0;
    for (Eigen::Index x = 0; x < c.rows(); ++x)
        for (Eigen::Index y = 0; y < c.cols(); ++y) s += 0.5 * c(x, y) * (f[x] - f[y]) * (g[x] - g[y]);
    for (Eigen::Index x = 0; x < kappa.size(); ++x) s += kappa[x] * f[x] * g[x];
    return s;
}

Eigen::VectorXd energy_measure(const Eigen::MatrixXd& c, const Eigen::VectorXd& kappa, const Function& f) {
    const Eigen::Index n = f.size();
    const Function f2 = f.cwiseProduct(f);
    Eigen::VectorXd out(n);
    for (Eigen::Index x = 0; x < n; ++x) {
        Function e = Function::Zero(n);
        e[x] = 1.0;
        out[x] = energy(c, kappa, e.cwiseProduct(f), f) - 0.5 * energy(c, kappa, f2, e);
    }
    return out;
}

Eigen::MatrixXd form_matrix(const Eigen::MatrixXd& c, const Eigen::VectorXd& kappa, const Eigen::VectorXd& extra) {
    Eigen::MatrixXd M = -c;
    for (Eigen::Index x = 0; x < c.rows(); ++x) M(x, x) = c.row(x).sum() + kappa[x] + extra[x];
    return M;
}

QpResult box_qp(const Eigen::MatrixXd& M, const std::vector<Index>& set) {
    const Eigen::Index n = M.rows();
    const Index k = set.size();
    if (k > 20) throw InputError("oracle: too many constraints to enumerate");
    QpResult best{std::numeric_limits<double>::infinity(), Function()};
    for (Index mask = 1; mask < (Index{1} << k); ++mask) {
        std::vector<bool> tight(static_cast<Index>(n), false);
        for (Index i = 0; i < k; ++i)
            if (mask & (Index{1} << i)) tight[set[i]] = true;
        std::vector<Eigen::Index> freev;
        for (Eigen::Index x = 0; x < n; ++x)
            if (!tight[static_cast<Index>(x)]) freev.push_back(x);
        Function u = Function::Zero(n);
        for (Eigen::Index x = 0; x < n; ++x)
            if (tight[static_cast<Index>(x)]) u[x] = 1.0;
        if (!freev.empty()) {
            const auto m = static_cast<Eigen::Index>(freev.size());
            Eigen::MatrixXd A(m, m);
            Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                for (Eigen::Index j = 0; j < m; ++j) A(i, j) = M(freev[i], freev[j]);
                for (Eigen::Index x = 0; x < n; ++x)
                    if (tight[static_cast<Index>(x)]) b[i] -= M(freev[i], x);
            }
            // Minimum-norm solution covers singular blocks (ungrounded components).
            const Eigen::VectorXd v = A.completeOrthogonalDecomposition().solve(b);
            for (Eigen::Index i = 0; i < m; ++i) u[freev[i]] = v[i];
        }
        bool feasible = true;
        for (Index x : set) feasible = feasible && u[static_cast<Eigen::Index>(x)] >= 1.0 - 1e-9;
        if (!feasible) continue;
        const double value = u.dot(M * u);
        if (value < best.value) best = {value, u};
    }
    return best;
}

}  // namespace dirichlet::oracle
