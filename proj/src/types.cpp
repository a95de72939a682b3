#include "dirichlet/types.hpp"

#include "dirichlet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dirichlet {

bool approx_equal(double a, double b, double rel, double abs_floor) {
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

bool approx_le(double a, double b, double rel, double abs_floor) {
    return a <= b || approx_equal(a, b, rel, abs_floor);
}

Measure::Measure(Eigen::VectorXd weights) : weights_(std::move(weights)) {
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
        if (!std::isfinite(weights_[i]) || weights_[i] < 0.0)
            throw InputError("measure weight at point " + std::to_string(i) +
                             " must be finite and nonnegative");
    }
}

Measure Measure::zeros(Index n) { return Measure(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))); }

Measure Measure::dirac(Index n, Index at, double mass) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    w[static_cast<Eigen::Index>(at)] = mass;
    return Measure(std::move(w));
}

double Measure::mass(std::span<const Index> points) const {
    double s = 0.0;
    for (Index p : points) s += (*this)[p];
    return s;
}

PointSet Measure::support() const {
    PointSet s;
    for (Index i = 0; i < size(); ++i)
        if (charges(i)) s.push_back(i);
    return s;
}

Measure Measure::operator+(const Measure& other) const {
    if (other.size() != size()) throw InputError("measure dimensions differ");
    return Measure(weights_ + other.weights_);
}

Measure Measure::scaled(double factor) const { return Measure(weights_ * factor); }

Measure Measure::restricted_to(const std::vector<bool>& keep) const {
    Eigen::VectorXd w = weights_;
    for (Index i = 0; i < size(); ++i)
        if (!keep[i]) w[static_cast<Eigen::Index>(i)] = 0.0;
    return Measure(std::move(w));
}

Function indicator(Index n, std::span<const Index> points) {
    Function f = Function::Zero(static_cast<Eigen::Index>(n));
    for (Index p : points) f[static_cast<Eigen::Index>(p)] = 1.0;
    return f;
}

Function indicator(Index n, Index point) {
    Function f = Function::Zero(static_cast<Eigen::Index>(n));
    f[static_cast<Eigen::Index>(point)] = 1.0;
    return f;
}

std::vector<bool> to_mask(Index n, std::span<const Index> points) {
    std::vector<bool> mask(n, false);
    for (Index p : points) {
        if (p >= n) throw InputError("point index " + std::to_string(p) + " out of range");
        mask[p] = true;
    }
    return mask;
}

PointSet from_mask(const std::vector<bool>& mask) {
    PointSet s;
    for (Index i = 0; i < mask.size(); ++i)
        if (mask[i]) s.push_back(i);
    return s;
}

}  // namespace dirichlet
