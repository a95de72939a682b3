#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace dirichlet {

using Index = std::size_t;

/// Real-valued function on a finite state space, one value per point.
using Function = Eigen::VectorXd;

/// Finite signed measure on a finite state space (e.g. mutual energy measures).
using SignedMeasure = Eigen::VectorXd;

/// Sorted list of point indices.
using PointSet = std::vector<Index>;

// Comparisons use a relative tolerance with an absolute floor.
inline constexpr double kRelTol = 1e-10;
inline constexpr double kAbsFloor = 1e-14;

bool approx_equal(double a, double b, double rel = kRelTol, double abs_floor = kAbsFloor);

/// a <= b up to the usual tolerance.
bool approx_le(double a, double b, double rel = kRelTol, double abs_floor = kAbsFloor);

/// Nonnegative finite weight per point (or per cell).
class Measure {
public:
    Measure() = default;
    explicit Measure(Eigen::VectorXd weights);

    static Measure zeros(Index n);
    static Measure dirac(Index n, Index at, double mass = 1.0);

    Index size() const { return static_cast<Index>(weights_.size()); }
    double operator[](Index i) const { return weights_[static_cast<Eigen::Index>(i)]; }
    const Eigen::VectorXd& weights() const { return weights_; }

    double total() const { return weights_.sum(); }
    double mass(std::span<const Index> points) const;
    bool charges(Index i) const { return (*this)[i] > 0.0; }
    PointSet support() const;

    Measure operator+(const Measure& other) const;
    Measure scaled(double factor) const;
    /// Keeps the weights on `keep` (same length), zero elsewhere.
    Measure restricted_to(const std::vector<bool>& keep) const;

private:
    Eigen::VectorXd weights_;
};

/// Indicator vector 1_A of a point set.
Function indicator(Index n, std::span<const Index> points);
Function indicator(Index n, Index point);

std::vector<bool> to_mask(Index n, std::span<const Index> points);
PointSet from_mask(const std::vector<bool>& mask);

}  // namespace dirichlet
