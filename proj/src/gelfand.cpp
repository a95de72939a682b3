#include "dirichlet/gelfand.hpp"

#include "dirichlet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <tuple>

namespace dirichlet {

AlgebraSpec build_algebra(Measure mu, std::vector<Function> generators) {
    if (generators.empty()) throw InputError("generator family is empty");
    for (const Function& g : generators)
        if (static_cast<Index>(g.size()) != mu.size()) throw InputError("generator length differs from carrier size");
    for (Index x = 0; x < mu.size(); ++x) {
        const bool seen = std::any_of(generators.begin(), generators.end(),
                                      [&](const Function& g) { return g[static_cast<Eigen::Index>(x)] != 0.0; });
        if (!seen) throw InputError("generators vanish at point " + std::to_string(x));
    }
    return {std::move(mu), std::move(generators)};
}

Function SpectrumQuotient::push(const Function& f, const Measure& mu) const {
    Function out(static_cast<Eigen::Index>(classes.size()));
    for (Index c = 0; c < classes.size(); ++c) {
        if (classes[c].size() == 1) {
            out[static_cast<Eigen::Index>(c)] = f[static_cast<Eigen::Index>(classes[c].front())];
            continue;
        }
        double num = 0.0, den = 0.0;
        for (Index x : classes[c]) {
            num += mu[x] * f[static_cast<Eigen::Index>(x)];
            den += mu[x];
        }
        // A mu-null class carries no conditional expectation; take the first member.
        out[static_cast<Eigen::Index>(c)] = den > 0.0 ? num / den : f[static_cast<Eigen::Index>(classes[c].front())];
    }
    return out;
}

Function SpectrumQuotient::pull(const Function& fhat) const {
    Function out(static_cast<Eigen::Index>(embedding.size()));
    for (Index x = 0; x < embedding.size(); ++x)
        out[static_cast<Eigen::Index>(x)] = fhat[static_cast<Eigen::Index>(embedding[x])];
    return out;
}

SpectrumQuotient spectrum(const AlgebraSpec& spec) {
    const Index n = spec.size();
    SpectrumQuotient q;
    q.embedding.resize(n);
    std::map<std::vector<double>, Index> seen;
    for (Index x = 0; x < n; ++x) {
        std::vector<double> key;
        key.reserve(spec.generators.size());
        for (const Function& g : spec.generators) key.push_back(g[static_cast<Eigen::Index>(x)]);
        const auto [it, inserted] = seen.emplace(std::move(key), q.classes.size());
        if (inserted) q.classes.emplace_back();
        q.classes[it->second].push_back(x);
        q.embedding[x] = it->second;
    }
    Eigen::VectorXd pushed = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q.classes.size()));
    for (Index x = 0; x < n; ++x) pushed[static_cast<Eigen::Index>(q.embedding[x])] += spec.mu[x];
    q.pushed = Measure(std::move(pushed));
    for (const Function& g : spec.generators) {
        Function gh(static_cast<Eigen::Index>(q.classes.size()));
        for (Index c = 0; c < q.classes.size(); ++c)
            gh[static_cast<Eigen::Index>(c)] = g[static_cast<Eigen::Index>(q.classes[c].front())];
        const double lhs = spec.mu.weights().dot(g);
        const double rhs = q.pushed.weights().dot(gh);
        q.pushforward_error = std::max(q.pushforward_error, std::abs(lhs - rhs));
        if (!approx_equal(lhs, rhs, 1e-12, 1e-12))
            throw InternalError("pushforward identity fails for a generator");
        q.pushed_generators.push_back(std::move(gh));
    }
    return q;
}

TransferResult transfer(const GraphForm& form, const AlgebraSpec& spec) {
    if (spec.size() != form.size()) throw InputError("algebra carrier and form sizes differ");
    TransferResult t;
    t.quotient = spectrum(spec);
    const SpectrumQuotient& q = t.quotient;
    const Index n = form.size();

    for (const PointSet& cls : q.classes) {
        if (cls.size() < 2) continue;
        for (Index x : cls) {
            if (!form.is_active(x)) continue;
            const Index y = x == cls.front() ? cls[1] : cls.front();
            // Conditional expectation zero on the class, so f and g = 0 have the same image.
            Function f = Function::Zero(static_cast<Eigen::Index>(n));
            f[static_cast<Eigen::Index>(x)] = spec.mu[y];
            f[static_cast<Eigen::Index>(y)] = -spec.mu[x];
            Function g = Function::Zero(static_cast<Eigen::Index>(n));
            const double ef = energy(form, f);
            throw WellDefinednessError(std::move(f), std::move(g), ef, 0.0,
                                       "transfer not well defined: points " + std::to_string(x) + " and " +
                                           std::to_string(y) + " merge but point " + std::to_string(x) +
                                           " carries energy; f = mu(y) 1_x - mu(x) 1_y has E(f) = " +
                                           std::to_string(ef) + " and the same image as g = 0");
        }
    }

    std::vector<Edge> mapped;
    for (const Edge& e : form.edges()) {
        const Index a = q.embedding[e.a], b = q.embedding[e.b];
        mapped.push_back({std::min(a, b), std::max(a, b), e.weight});
    }
    std::sort(mapped.begin(), mapped.end(),
              [](const Edge& l, const Edge& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });
    std::vector<Edge> edges;
    for (const Edge& e : mapped) {
        if (!edges.empty() && edges.back().a == e.a && edges.back().b == e.b)
            edges.back().weight += e.weight;
        else
            edges.push_back(e);
    }
    Eigen::VectorXd killing = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q.size()));
    for (Index x = 0; x < n; ++x) killing[static_cast<Eigen::Index>(q.embedding[x])] += form.killing()[static_cast<Eigen::Index>(x)];
    GraphForm::Options options;
    options.allow_null_measure = (q.pushed.weights().array() <= 0.0).any();
    t.form = GraphForm::from_edges(q.size(), edges, killing, q.pushed.weights(), options);
    return t;
}

TransferredCarreReport transferred_carre_check(const GraphForm& transferred, unsigned long long seed) {
    TransferredCarreReport r;
    r.m = minimal_edm(transferred);
    r.reduced = change_measure(transferred, r.m);
    r.carre = carre_du_champ_check(transferred, r.m);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10 && r.carre.admits; ++trial) {
        Function f(static_cast<Eigen::Index>(transferred.size()));
        for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = u(rng);
        const DensityVector d = (*r.carre.density)(f);
        const double total = energy_measure(transferred, f).total();
        if (!approx_equal(d.integrate(r.m), total, 1e-9)) r.densities_integrate = false;
    }
    r.passes = r.carre.admits && r.densities_integrate;
    return r;
}

}  // namespace dirichlet
