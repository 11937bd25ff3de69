#pragma once

#include <qcorr/states.hpp>

#include <map>
#include <string>
#include <utility>

namespace qcorr {

// All entropies are in bits.

/// h(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0. Accepts p within
/// 1e-12 of [0, 1] and clamps.
double binary_entropy(double p);

/// -sum lambda log2 lambda over a spectrum, after zeroing eigenvalues in
/// [-1e-10, 1e-12].
double spectrum_entropy(const RealVector& eigenvalues);

/// Entropy of an unnormalized PSD operator divided by its trace. Used on
/// post-measurement blocks inside optimizers; no invariant checks.
double entropy_of_block(const ComplexMatrix& block, double trace);

double von_neumann_entropy(const DensityMatrix& rho);

/// S(target | given) = S(target, given) - S(given), evaluated on the marginal
/// over the two labels. May be negative.
double conditional_entropy(const DensityMatrix& rho, std::string_view target, std::string_view given);

/// I(x : y) = S(x) + S(y) - S(x, y).
double mutual_information(const DensityMatrix& rho, std::string_view x, std::string_view y);

/// max{0, -S(a|b), -S(b|a)}.
double coherent_information(const DensityMatrix& rho, std::string_view a, std::string_view b);

struct EntropyReport {
    double s_joint = 0.0;
    std::map<std::string, double> s_marginals;
    /// keyed by (target, given)
    std::map<std::pair<std::string, std::string>, double> s_conditional;
    double mutual_information = 0.0;
    double coherent_information = 0.0;
};

/// Entropic summary of the (a, b) marginal of `rho`.
EntropyReport entropy_report(const DensityMatrix& rho, std::string_view a, std::string_view b);

} // namespace qcorr
