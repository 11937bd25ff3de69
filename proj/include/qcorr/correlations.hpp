#pragma once

#include <qcorr/optimize.hpp>
#include <qcorr/states.hpp>

#include <string>
#include <vector>

namespace qcorr {

/// Largest measured-subsystem dimension the measurement optimizer handles.
inline constexpr int kMaxMeasuredDim = 4;

/// Complete measurement on one subsystem.
struct Measurement {
    std::vector<ComplexMatrix> elements;
    bool rank_one = true;
    /// Angles that generated the elements (empty when built directly).
    std::vector<double> parameters;
    /// Outcome probabilities on the state the measurement was optimized for.
    std::vector<double> probabilities;
};

struct OptimizerTrace {
    int seeds_tried = 0;
    int refinement_iterations = 0;
    /// Simplex size reached by the winning start.
    double achieved_tolerance = 0.0;
    int best_start = 0;
};

struct DiscordResult {
    std::string target;
    std::string measured;
    double discord = 0.0;
    /// Lower bound on J: the supremum runs over all POVMs, the search over
    /// rank-one projective measurements.
    double classical_correlation = 0.0;
    double mutual_information = 0.0;
    Measurement optimal_measurement;
    OptimizerTrace optimizer_trace;
};

/// Number of real parameters of a projective measurement on dimension d.
int measurement_parameter_count(int d);

/// Unitary whose columns are the measurement vectors. d = 2 uses Bloch
/// angles (theta, phi); d = 3, 4 a product of phased Givens rotations.
/// All-zero parameters give the computational basis.
ComplexMatrix measurement_unitary(int d, std::span<const double> params);

/// sum_k p_k S(target | outcome k) for measuring the columns of `basis` on
/// `measured`. Outcomes with p_k <= 1e-12 contribute nothing.
double post_measurement_entropy(const DensityMatrix& rho, std::string_view target,
                                std::string_view measured, const ComplexMatrix& basis);

/// J(target | measured) maximized over rank-one projective measurements on
/// `measured`. Throws UnsupportedDimension when dim(measured) > 4.
DiscordResult classical_correlation(const DensityMatrix& rho, std::string_view target,
                                    std::string_view measured, const OptimizerBudget& budget = {});

/// Same search; discord = I - J. Since J is a lower bound the discord is an
/// upper-bound estimate.
DiscordResult discord(const DensityMatrix& rho, std::string_view target, std::string_view measured,
                      const OptimizerBudget& budget = {});

struct ZeroDiscordVerdict {
    bool zero_discord = false;
    /// Orthonormal measured-side basis (columns) exhibiting
    /// rho = sum_i p_i rho_i (x) |i><i|, when zero_discord is true.
    ComplexMatrix basis;
    /// Largest coherence between distinct basis blocks in that basis.
    double max_off_block = 0.0;
};

/// Structural test for zero discord with respect to measuring `measured`:
/// the remaining labels form the other side. Refines the eigenbasis of the
/// measured marginal by the Hermitian parts of the conditioned blocks.
ZeroDiscordVerdict zero_discord_check(const DensityMatrix& rho, std::string_view measured);

struct PovmProbe {
    double best_classical_correlation = 0.0;
    int probes = 0;
    /// Set when a probe exceeds the projective optimum by more than 1e-6.
    bool beats_projective = false;
};

/// Diagnostic: evaluates J on random rank-one POVMs with d^2 outcomes built
/// from seeded random isometries, and compares with `projective`.
PovmProbe povm_probe(const DensityMatrix& rho, std::string_view target, std::string_view measured,
                     const DiscordResult& projective, int probes, std::uint64_t seed);

} // namespace qcorr
