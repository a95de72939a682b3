#pragma once

#include "dirichlet/types.hpp"

#include <doctest.h>

#include <initializer_list>

namespace testutil {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

inline void check_close(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol = 1e-12) {
    REQUIRE(a.size() == b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(tol));
}

}  // namespace testutil
