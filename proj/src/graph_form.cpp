#include "dirichlet/graph_form.hpp"

#include "dirichlet/errors.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

namespace dirichlet {

namespace {

std::string idx(Index i) { return std::to_string(i); }

void check_vector(const Eigen::VectorXd& v, Index n, const char* name) {
    if (static_cast<Index>(v.size()) != n)
        throw InputError(std::string(name) + " has " + idx(static_cast<Index>(v.size())) +
                         " entries, expected " + idx(n));
}

}  // namespace

void require_dimension(const GraphForm& form, const Function& f, const char* what) {
    if (static_cast<Index>(f.size()) != form.size())
        throw InputError(std::string("dimension mismatch: ") + what + " has " +
                         idx(static_cast<Index>(f.size())) + " entries, form has " + idx(form.size()) +
                         " points");
}

GraphForm GraphForm::from_table(const Eigen::MatrixXd& conductance, const Eigen::VectorXd& killing,
                                const Eigen::VectorXd& base_measure, Options options) {
    if (conductance.rows() != conductance.cols())
        throw InputError("conductance table must be square");
    const Index n = static_cast<Index>(conductance.rows());
    std::vector<Edge> edges;
    for (Index x = 0; x < n; ++x) {
        const auto xi = static_cast<Eigen::Index>(x);
        if (conductance(xi, xi) != 0.0)
            throw InputError("nonzero diagonal conductance at point " + idx(x));
        for (Index y = x + 1; y < n; ++y) {
            const auto yi = static_cast<Eigen::Index>(y);
            const double cxy = conductance(xi, yi);
            const double cyx = conductance(yi, xi);
            if (!std::isfinite(cxy) || cxy < 0.0)
                throw InputError("negative conductance at (" + idx(x) + "," + idx(y) + ")");
            if (!std::isfinite(cyx) || cyx < 0.0)
                throw InputError("negative conductance at (" + idx(y) + "," + idx(x) + ")");
            if (cxy != cyx)
                throw InputError("asymmetric conductance at (" + idx(x) + "," + idx(y) + ")");
            if (cxy > 0.0) edges.push_back({x, y, cxy});
        }
    }
    return from_edges(n, edges, killing, base_measure, options);
}

GraphForm GraphForm::from_edges(Index points, std::span<const Edge> edges,
                                const Eigen::VectorXd& killing, const Eigen::VectorXd& base_measure,
                                Options options) {
    check_vector(killing, points, "killing");
    check_vector(base_measure, points, "base measure");
    GraphForm form;
    form.edges_.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.a >= points || e.b >= points)
            throw InputError("edge (" + idx(e.a) + "," + idx(e.b) + ") out of range");
        if (e.a == e.b) throw InputError("self loop at point " + idx(e.a));
        if (!std::isfinite(e.weight) || e.weight < 0.0)
            throw InputError("negative conductance at (" + idx(e.a) + "," + idx(e.b) + ")");
        if (e.weight == 0.0) continue;
        form.edges_.push_back({std::min(e.a, e.b), std::max(e.a, e.b), e.weight});
    }
    std::sort(form.edges_.begin(), form.edges_.end(), [](const Edge& l, const Edge& r) {
        return l.a != r.a ? l.a < r.a : l.b < r.b;
    });
    for (std::size_t i = 1; i < form.edges_.size(); ++i) {
        if (form.edges_[i].a == form.edges_[i - 1].a && form.edges_[i].b == form.edges_[i - 1].b)
            throw InputError("duplicate edge (" + idx(form.edges_[i].a) + "," + idx(form.edges_[i].b) + ")");
    }
    for (Index x = 0; x < points; ++x) {
        const double k = killing[static_cast<Eigen::Index>(x)];
        if (!std::isfinite(k) || k < 0.0) throw InputError("negative killing at point " + idx(x));
    }
    form.killing_ = killing;
    form.measure_ = base_measure;
    form.check_measure(options);
    form.build_rows();
    return form;
}

void GraphForm::check_measure(Options options) const {
    for (Eigen::Index x = 0; x < measure_.size(); ++x) {
        const double mu = measure_[x];
        if (!std::isfinite(mu) || mu < 0.0 || (mu == 0.0 && !options.allow_null_measure))
            throw InputError("nonpositive base measure at point " + idx(static_cast<Index>(x)));
    }
}

void GraphForm::build_rows() {
    const Index n = static_cast<Index>(killing_.size());
    std::vector<Index> count(n + 1, 0);
    for (const Edge& e : edges_) {
        ++count[e.a + 1];
        ++count[e.b + 1];
    }
    row_start_.assign(n + 1, 0);
    for (Index x = 0; x < n; ++x) row_start_[x + 1] = row_start_[x] + count[x + 1];
    col_.assign(row_start_[n], 0);
    val_.assign(row_start_[n], 0.0);
    std::vector<Index> fill(row_start_.begin(), row_start_.end() - 1);
    // edges_ is sorted by (a, b): lower neighbours land first, in order, then
    // upper ones, so every row is sorted by column.
    for (const Edge& e : edges_) {
        col_[fill[e.b]] = e.a;
        val_[fill[e.b]++] = e.weight;
    }
    for (const Edge& e : edges_) {
        col_[fill[e.a]] = e.b;
        val_[fill[e.a]++] = e.weight;
    }
    degree_.assign(n, 0.0);
    for (Index x = 0; x < n; ++x)
        for (Index k = row_start_[x]; k < row_start_[x + 1]; ++k) degree_[x] += val_[k];
}

std::span<const Index> GraphForm::neighbors(Index x) const {
    return {col_.data() + row_start_[x], row_start_[x + 1] - row_start_[x]};
}

std::span<const double> GraphForm::row_conductances(Index x) const {
    return {val_.data() + row_start_[x], row_start_[x + 1] - row_start_[x]};
}

double GraphForm::conductance(Index x, Index y) const {
    const auto nb = neighbors(x);
    const auto it = std::lower_bound(nb.begin(), nb.end(), y);
    if (it == nb.end() || *it != y) return 0.0;
    return row_conductances(x)[static_cast<Index>(it - nb.begin())];
}

bool GraphForm::has_energy() const {
    return !edges_.empty() || (killing_.size() > 0 && killing_.maxCoeff() > 0.0);
}

Eigen::MatrixXd GraphForm::conductance_table() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : edges_) {
        c(static_cast<Eigen::Index>(e.a), static_cast<Eigen::Index>(e.b)) = e.weight;
        c(static_cast<Eigen::Index>(e.b), static_cast<Eigen::Index>(e.a)) = e.weight;
    }
    return c;
}

GraphForm GraphForm::with_base_measure(const Eigen::VectorXd& base_measure, Options options) const {
    check_vector(base_measure, size(), "base measure");
    GraphForm copy = *this;
    copy.measure_ = base_measure;
    copy.check_measure(options);
    return copy;
}

GraphForm GraphForm::with_killing(const Eigen::VectorXd& killing) const {
    check_vector(killing, size(), "killing");
    for (Eigen::Index x = 0; x < killing.size(); ++x)
        if (!std::isfinite(killing[x]) || killing[x] < 0.0)
            throw InputError("negative killing at point " + idx(static_cast<Index>(x)));
    GraphForm copy = *this;
    copy.killing_ = killing;
    return copy;
}

// --- energies ---------------------------------------------------------------

double jump_energy(const GraphForm& form, const Function& f) {
    require_dimension(form, f, "f");
    double s = 0.0;
    for (const Edge& e : form.edges()) {
        const double d = f[static_cast<Eigen::Index>(e.a)] - f[static_cast<Eigen::Index>(e.b)];
        s += e.weight * d * d;
    }
    return s;
}

double killing_energy(const GraphForm& form, const Function& f) {
    require_dimension(form, f, "f");
    return (form.killing().array() * f.array().square()).sum();
}

double energy(const GraphForm& form, const Function& f, const Function& g) {
    require_dimension(form, f, "f");
    require_dimension(form, g, "g");
    double s = 0.0;
    for (const Edge& e : form.edges()) {
        const auto a = static_cast<Eigen::Index>(e.a);
        const auto b = static_cast<Eigen::Index>(e.b);
        s += e.weight * (f[a] - f[b]) * (g[a] - g[b]);
    }
    return s + (form.killing().array() * f.array() * g.array()).sum();
}

double energy(const GraphForm& form, const Function& f) { return energy(form, f, f); }

double energy_1(const GraphForm& form, const Function& f) {
    return energy(form, f) + (form.base_measure().array() * f.array().square()).sum();
}

double energy_sparse(const GraphForm& form, std::span<const Index> support,
                     std::span<const double> values, const Function& g) {
    require_dimension(form, g, "g");
    auto value_at = [&](Index y) -> double {
        for (Index k = 0; k < support.size(); ++k)
            if (support[k] == y) return values[k];
        return 0.0;
    };
    auto in_support = [&](Index y) {
        return std::find(support.begin(), support.end(), y) != support.end();
    };
    double s = 0.0;
    for (Index k = 0; k < support.size(); ++k) {
        const Index x = support[k];
        const double ux = values[k];
        const auto gx = g[static_cast<Eigen::Index>(x)];
        const auto nb = form.neighbors(x);
        const auto cs = form.row_conductances(x);
        for (Index j = 0; j < nb.size(); ++j) {
            const Index y = nb[j];
            if (in_support(y)) {
                if (y < x) continue;  // counted from the other end
                s += cs[j] * (ux - value_at(y)) * (gx - g[static_cast<Eigen::Index>(y)]);
            } else {
                s += cs[j] * ux * (gx - g[static_cast<Eigen::Index>(y)]);
            }
        }
        s += form.killing()[static_cast<Eigen::Index>(x)] * ux * gx;
    }
    return s;
}

// --- energy measures --------------------------------------------------------

double energy_functional(const GraphForm& form, const Function& f, const Function& phi) {
    require_dimension(form, f, "f");
    require_dimension(form, phi, "phi");
    const Function phif = phi.cwiseProduct(f);
    const Function f2 = f.cwiseProduct(f);
    return energy(form, phif, f) - 0.5 * energy(form, f2, phi);
}

Measure energy_measure_closed_form(const GraphForm& form, const Function& f) {
    require_dimension(form, f, "f");
    Eigen::VectorXd w(f.size());
    for (Index x = 0; x < form.size(); ++x) {
        const double fx = f[static_cast<Eigen::Index>(x)];
        double s = 0.0;
        const auto nb = form.neighbors(x);
        const auto cs = form.row_conductances(x);
        for (Index j = 0; j < nb.size(); ++j) {
            const double d = fx - f[static_cast<Eigen::Index>(nb[j])];
            s += 0.5 * cs[j] * d * d;
        }
        w[static_cast<Eigen::Index>(x)] = s + 0.5 * form.killing()[static_cast<Eigen::Index>(x)] * fx * fx;
    }
    return Measure(std::move(w));
}

Eigen::VectorXd energy_measure_functional(const GraphForm& form, const Function& f) {
    require_dimension(form, f, "f");
    const Function f2 = f.cwiseProduct(f);
    Eigen::VectorXd w(f.size());
    for (Index x = 0; x < form.size(); ++x) {
        const Index support[1] = {x};
        const double fx[1] = {f[static_cast<Eigen::Index>(x)]};
        const double one[1] = {1.0};
        // E(1_x f, f) - 1/2 E(1_x, f^2)
        w[static_cast<Eigen::Index>(x)] =
            energy_sparse(form, support, fx, f) - 0.5 * energy_sparse(form, support, one, f2);
    }
    return w;
}

Measure energy_measure(const GraphForm& form, const Function& f) {
    Measure closed = energy_measure_closed_form(form, f);
    const Eigen::VectorXd functional = energy_measure_functional(form, f);
    for (Index x = 0; x < form.size(); ++x) {
        const auto xi = static_cast<Eigen::Index>(x);
        const double fx = f[xi];
        // Cancellation in the functional route is bounded by the size of the
        // terms it subtracts.
        double scale = form.killing()[xi] * fx * fx;
        const auto nb = form.neighbors(x);
        const auto cs = form.row_conductances(x);
        for (Index j = 0; j < nb.size(); ++j) {
            const double fy = f[static_cast<Eigen::Index>(nb[j])];
            scale += cs[j] * (fx * fx + fy * fy);
        }
        const double a = closed[x];
        const double b = functional[xi];
        const double tol = kRelTol * std::max(std::abs(a), std::abs(b)) + 64.0 * DBL_EPSILON * scale + kAbsFloor;
        if (std::abs(a - b) > tol)
            throw InternalError("energy measure routes disagree at point " + idx(x) + ": closed form " +
                                std::to_string(a) + " vs functional " + std::to_string(b));
    }
    return closed;
}

SignedMeasure mutual_energy_measure(const GraphForm& form, const Function& f, const Function& g) {
    require_dimension(form, f, "f");
    require_dimension(form, g, "g");
    const Function sum = f + g;
    const Function diff = f - g;
    return 0.25 * (energy_measure(form, sum).weights() - energy_measure(form, diff).weights());
}

std::vector<std::pair<Index, double>> indicator_energy_measure(const GraphForm& form, Index e) {
    std::vector<std::pair<Index, double>> out;
    const auto nb = form.neighbors(e);
    const auto cs = form.row_conductances(e);
    const double at_e = 0.5 * form.degree(e) + 0.5 * form.killing()[static_cast<Eigen::Index>(e)];
    bool placed = false;
    for (Index j = 0; j < nb.size(); ++j) {
        if (!placed && nb[j] > e) {
            out.emplace_back(e, at_e);
            placed = true;
        }
        out.emplace_back(nb[j], 0.5 * cs[j]);
    }
    if (!placed) out.emplace_back(e, at_e);
    return out;
}

// --- Beurling-Deny ----------------------------------------------------------

double BeurlingDenyTriple::local_energy(const Function& f) const {
    return local_part ? local_part(f).total() : 0.0;
}

double BeurlingDenyTriple::jump_energy(const Function& f) const {
    double s = 0.0;
    for (const Edge& e : jump_kernel) {
        const double d = f[static_cast<Eigen::Index>(e.a)] - f[static_cast<Eigen::Index>(e.b)];
        s += 2.0 * e.weight * d * d;  // both orientations
    }
    return s;
}

double BeurlingDenyTriple::killing_energy(const Function& f) const {
    return (killing.array() * f.array().square()).sum();
}

double BeurlingDenyTriple::total_energy(const Function& f) const {
    return local_energy(f) + jump_energy(f) + killing_energy(f);
}

double BeurlingDenyTriple::jump_at(Index x, Index y) const {
    const Index a = std::min(x, y), b = std::max(x, y);
    for (const Edge& e : jump_kernel)
        if (e.a == a && e.b == b) return e.weight;
    return 0.0;
}

BeurlingDenyTriple beurling_deny(const GraphForm& form) {
    BeurlingDenyTriple t;
    const Index n = form.size();
    t.local_part = [n](const Function&) { return Measure::zeros(n); };
    t.jump_kernel.reserve(form.edges().size());
    for (const Edge& e : form.edges()) t.jump_kernel.push_back({e.a, e.b, 0.5 * e.weight});
    t.killing = form.killing();
    return t;
}

// --- Markov property and algebra bound ---------------------------------------

Function unit_contraction(const Function& f) { return f.cwiseMax(0.0).cwiseMin(1.0); }

ContractionReport contraction_check(const GraphForm& form, const Function& f,
                                    std::span<const double> alphas) {
    require_dimension(form, f, "f");
    ContractionReport report;
    const double before = energy(form, f);
    auto add = [&](double alpha, const Function& tf) {
        const double after = energy(form, tf);
        const bool ok = approx_le(after, before);
        report.rows.push_back({alpha, before, after, ok});
        report.holds = report.holds && ok;
    };
    add(0.0, unit_contraction(f));
    std::vector<double> grid(alphas.begin(), alphas.end());
    if (grid.empty()) {
        const double top = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
        if (top > 0.0)
            grid = {top / 8.0, top / 4.0, top / 2.0, top};
        else
            grid = {1.0};
    }
    for (double alpha : grid) {
        if (!(alpha > 0.0)) throw InputError("truncation level must be positive");
        add(alpha, f.cwiseMax(-alpha).cwiseMin(alpha));
    }
    return report;
}

AlgebraBoundReport algebra_bound_check(const GraphForm& form, const Function& f, const Function& g) {
    require_dimension(form, f, "f");
    require_dimension(form, g, "g");
    const Function fg = f.cwiseProduct(g);
    const double sup_f = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    const double sup_g = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
    const double lhs = std::sqrt(std::max(0.0, energy(form, fg)));
    const double rhs = std::sqrt(std::max(0.0, energy(form, f))) * sup_g +
                       std::sqrt(std::max(0.0, energy(form, g))) * sup_f;
    return {lhs, rhs, approx_le(lhs, rhs)};
}

}  // namespace dirichlet
