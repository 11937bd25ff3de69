#pragma once

#include <qcorr/correlations.hpp>
#include <qcorr/optimize.hpp>
#include <qcorr/states.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qcorr {

/// Wootters concurrence of a two-qubit state.
double concurrence_2q(const DensityMatrix& rho);

/// Entanglement of formation of a two-qubit state from its concurrence.
double eof_2q(const DensityMatrix& rho);

/// h((1 + sqrt(1 - C^2)) / 2).
double eof_from_concurrence(double c);

struct EnsembleDecomposition {
    std::vector<double> weights;
    std::vector<PureState> members;
    std::vector<double> isometry_params;
};

struct EnsembleOracleResult {
    /// Average entanglement of `decomposition`; an upper bound on E^F.
    double value = 0.0;
    EnsembleDecomposition decomposition;
    OptimizerTrace trace;
};

struct EnsembleBudget {
    int starts = 12;
    int iterations = 4000;
    int restarts = 4;
};

/// Minimizes the average entanglement entropy over size-m ensembles of rho,
/// parameterized by m x rank isometries acting on the eigen-ensemble. The
/// bipartition is `left` against the remaining labels (default: first label).
EnsembleOracleResult eof_ensemble_oracle(const DensityMatrix& rho, int ensemble_size,
                                         const EnsembleBudget& budget = {},
                                         std::span<const std::string> left = {});

struct KoashiWinterResult {
    double value = 0.0; // discord(a|c) - S(a|b)
    DiscordResult discord_ac;
    double s_cond_ab = 0.0;
};

/// E^F(rho_ab) through discord with the purifying system c. J is searched
/// over projective measurements, so the discord and the returned value are
/// upper-bound estimates.
KoashiWinterResult eof_via_koashi_winter(const PureState& psi_abc, const OptimizerBudget& budget = {});

/// S(rho || sigma) in bits; +inf when rho has weight outside supp(sigma).
double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma);

struct ProductTerm {
    double weight;
    ComplexVector a;
    ComplexVector b;
};

struct ReeBudget {
    int max_terms = 16;
    int restarts = 3;
    int max_iterations = 400;
    /// Stop when the relative improvement over `window` iterations falls below this.
    double relative_improvement = 1e-8;
    int window = 50;
    /// Weight of I/d mixed into the witness.
    double regularization = 1e-9;
};

struct ReeResult {
    double ree_upper = 0.0;
    DensityMatrix witness;
    /// Product decomposition of the witness (before regularization); empty
    /// when the state itself is a PPT-certified separable witness.
    std::vector<ProductTerm> terms;
    bool witness_is_input = false;
    int iterations = 0;
};

/// Upper bound on the relative entropy of entanglement for 2x2 and 2x3 states:
/// S(rho || sigma) for an explicit separable sigma found by fully corrective
/// conditional-gradient steps over product states.
ReeResult ree_estimate(const DensityMatrix& rho, const ReeBudget& budget = {});

enum class Lemma1Class { Pure, Separable, PseudoPure, MixedEntangled };
std::string to_string(Lemma1Class c);

struct Lemma1Verdict {
    Lemma1Class classification = Lemma1Class::Pure;
    double eof = 0.0;
    double coherent_information = 0.0;
    double gap = 0.0; // eof - coherent_information
    /// The strict inequality is asserted only for mixed entangled states.
    bool applicable = false;
    bool holds = true;
};

Lemma1Verdict lemma1_check(const DensityMatrix& rho);

enum class Provenance { ExactByTheorem, ExactByAdditivity, UpperBound, LowerBound, Interval };
std::string to_string(Provenance p);

struct BoundedValue {
    double lower = 0.0;
    double upper = 0.0;
    Provenance provenance = Provenance::Interval;

    static BoundedValue exact(double v, Provenance p) { return {v, v, p}; }
    bool is_exact() const noexcept {
        return provenance == Provenance::ExactByTheorem || provenance == Provenance::ExactByAdditivity;
    }
};

struct EntanglementReport {
    std::optional<double> concurrence;
    /// Closed form for 2x2; otherwise a numerical upper-bound estimate.
    double eof = 0.0;
    bool eof_closed_form = false;
    BoundedValue e_cost;
    BoundedValue e_distillable;
    BoundedValue key_rate;
    /// e_cost - e_distillable, present when both are exact.
    std::optional<double> delta_loss;
    std::optional<double> ree_upper;
    double ree_lower = 0.0;
    double coherent_information = 0.0;
    double s_cond_ab = 0.0;

    // Separability hypothesis on the complementary state rho_ac.
    std::optional<PptVerdict> ppt_ac;
    /// Exactness claims withheld because the hypothesis is not certified.
    bool conditional = false;
    bool degenerate_a_states = false;

    // Numerical cross-checks.
    std::optional<double> discord_ab_numeric;
    std::optional<double> discord_deviation;
    std::optional<double> ree_deviation;
};

struct ReportOptions {
    OptimizerBudget discord_budget{};
    ReeBudget ree_budget{};
    bool with_discord = true;
    bool with_ree = true;
};

/// Bound-level report for a 2x2 or 2x3 state. E^C is the interval
/// [I_C, E^F], E^D the interval [I_C, ree_upper].
EntanglementReport entanglement_report(const DensityMatrix& rho_ab, const ReportOptions& options = {});

/// Report for one-way maximally correlated states whose complementary state
/// rho_ac is PPT-separable: E^D = R = K = -S(a|b) exactly, E^C = E^F.
EntanglementReport theorem2_report(const std::variant<OneMcSpec, ExampleFamilyParams>& source,
                                   const ReportOptions& options = {});

struct ChainViolation {
    std::string relation;
    double excess;
};

/// Checks the bound-level inequality chain on a report. Empty means pass.
std::vector<ChainViolation> audit_chain(const EntanglementReport& report, double slack = 1e-9,
                                        double exact_slack = 1e-3);

enum class IrreversibilityVerdict { PureReversible, Separable, PseudoPure, IrreversibleByTheorem2, NoCertificate };
std::string to_string(IrreversibilityVerdict v);

struct IrreversibilityConditions {
    bool pure = false;
    bool separable = false;
    bool pseudo_pure = false;
    /// E^F additivity certified because the purification's rho_ac (or rho_bc)
    /// is PPT in dimensions where PPT decides separability.
    bool additivity_certificate = false;
    /// "ac" or "bc" when a certificate exists.
    std::string certificate_route;
    /// With the certificate, E^D = I_C is attained by hashing on one copy.
    bool coherent_information_single_copy = false;
    IrreversibilityVerdict verdict = IrreversibilityVerdict::NoCertificate;
};

IrreversibilityConditions irreversibility_conditions(const DensityMatrix& rho_ab);

} // namespace qcorr
