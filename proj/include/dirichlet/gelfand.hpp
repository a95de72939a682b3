#pragma once

#include "dirichlet/energy_dominance.hpp"
#include "dirichlet/graph_form.hpp"

#include <vector>

namespace dirichlet {

/// Carrier with measure mu and the generating family B.
struct AlgebraSpec {
    Measure mu;
    std::vector<Function> generators;

    Index size() const { return mu.size(); }
};

/// Validates that B vanishes nowhere: every point sees some nonzero generator.
/// Throws InputError naming the first point where all generators vanish.
AlgebraSpec build_algebra(Measure mu, std::vector<Function> generators);

/// Finite Gelfand spectrum: points identified when every generator agrees.
struct SpectrumQuotient {
    std::vector<PointSet> classes;  ///< ordered by first member
    std::vector<Index> embedding;   ///< point -> class
    Measure pushed;                 ///< mu-hat
    std::vector<Function> pushed_generators;
    double pushforward_error = 0.0;  ///< max |int f dmu - int f-hat dmu-hat| over generators

    Index size() const { return classes.size(); }
    /// mu-conditional expectation on classes (the class value for class-constant f).
    Function push(const Function& f, const Measure& mu) const;
    /// Class values spread back to the points.
    Function pull(const Function& fhat) const;
};

SpectrumQuotient spectrum(const AlgebraSpec& spec);

struct TransferResult {
    SpectrumQuotient quotient;
    GraphForm form;  ///< class conductances and killing summed, base measure mu-hat
};

/// Transfers the form to the spectrum. A function is seen on the spectrum
/// through its mu-conditional expectation, so the transfer is well defined
/// exactly when every merged class consists of energy-inactive points;
/// otherwise throws WellDefinednessError with a witness pair.
TransferResult transfer(const GraphForm& form, const AlgebraSpec& spec);

struct TransferredCarreReport {
    Measure m;  ///< minimal energy-dominant measure of the transferred form
    QuotientForm reduced;
    CarreDuChampReport carre;
    bool densities_integrate = true;  ///< sum density * m = Gamma(X) on sampled functions
    bool passes = true;
};

/// minimal_edm, change_measure and carre_du_champ_check on the transferred form.
TransferredCarreReport transferred_carre_check(const GraphForm& transferred, unsigned long long seed = 0);

}  // namespace dirichlet
