#pragma once

#include "dirichlet/types.hpp"

#include <stdexcept>
#include <string>

namespace dirichlet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (dimensions, signs, symmetry, parse errors).
class InputError : public Error {
public:
    using Error::Error;
};

/// A stated hypothesis of an operation does not hold (transience, connectivity, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Two independent computations of the same quantity disagree.
class InternalError : public Error {
public:
    using Error::Error;
};

/// A checked mathematical property fails and a concrete witness is available.
class PropertyViolation : public Error {
public:
    using Error::Error;
};

/// Γ(f) charges a point that the reference measure does not.
class NotEnergyDominant : public PropertyViolation {
public:
    NotEnergyDominant(Index point, const std::string& what)
        : PropertyViolation(what), point_(point) {}
    Index point() const { return point_; }

private:
    Index point_;
};

/// f and g are identified by the construction but carry different energies.
class WellDefinednessError : public PropertyViolation {
public:
    WellDefinednessError(Function f, Function g, double energy_f, double energy_g,
                         const std::string& what)
        : PropertyViolation(what), f_(std::move(f)), g_(std::move(g)),
          energy_f_(energy_f), energy_g_(energy_g) {}

    const Function& f() const { return f_; }
    const Function& g() const { return g_; }
    double energy_f() const { return energy_f_; }
    double energy_g() const { return energy_g_; }

private:
    Function f_, g_;
    double energy_f_, energy_g_;
};

}  // namespace dirichlet
