#pragma once

#include <qcorr/linalg.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qcorr {

inline constexpr double kNormTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
/// Eigenvalues at or below this are treated as outside the support.
inline constexpr double kRankCutoff = 1e-10;

class DensityMatrix;

/// Unit vector on a labelled tensor-product space.
class PureState {
public:
    /// Throws ValidationError unless |amplitudes| = 1 within kNormTol and the
    /// length matches the signature.
    PureState(ComplexVector amplitudes, DimSignature sig);

    /// Rescales `amplitudes` to unit norm first; rejects the zero vector.
    static PureState normalized(ComplexVector amplitudes, DimSignature sig);

    const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
    const DimSignature& sig() const noexcept { return sig_; }

    ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }
    DensityMatrix density() const;
    DensityMatrix reduced(std::span<const std::string> keep) const;

private:
    ComplexVector amplitudes_;
    DimSignature sig_;
};

/// Positive, unit-trace Hermitian operator on a labelled space. The stored
/// matrix is the Hermitian part of the input once the checks pass.
class DensityMatrix {
public:
    /// Throws ValidationError naming the violated bound: Hermitian within
    /// kHermitianTol, trace 1 within kTraceTol, eigenvalues >= -kPsdTol.
    DensityMatrix(ComplexMatrix matrix, DimSignature sig);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const DimSignature& sig() const noexcept { return sig_; }
    int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

    DensityMatrix reduced(std::span<const std::string> keep) const;
    DensityMatrix reduced(std::initializer_list<std::string> keep) const {
        return reduced(std::span<const std::string>(keep.begin(), keep.size()));
    }
    /// Ascending spectrum.
    RealVector eigenvalues() const { return hermitian_eigenvalues(matrix_); }
    int rank(double cutoff = kRankCutoff) const;
    double purity() const { return (matrix_ * matrix_).trace().real(); }

private:
    ComplexMatrix matrix_;
    DimSignature sig_;
};

/// |psi> = sum_i alpha_i |a_i>|i_b>|c_i> with {|i_b>} the computational basis
/// of an N-dimensional b.
struct OneMcSpec {
    std::vector<Complex> alphas;
    std::vector<ComplexVector> a_states;
    std::vector<ComplexVector> c_states;

    std::size_t size() const noexcept { return alphas.size(); }
};

struct OneMcState {
    PureState psi;        // labels a, b, c
    DensityMatrix rho_ab; // Tr_c |psi><psi|
    /// Some |a_i> repeats (up to phase); still accepted as one-way maximally
    /// correlated, but reported.
    bool degenerate_a_states = false;
};

/// Angles of the two-qubit family (|000> + |theta 1 phi>)/sqrt(2), both in
/// [0, pi/2].
struct ExampleFamilyParams {
    double theta = 0.0;
    double phi = 0.0;
};

struct ExampleFamilyState {
    PureState psi;
    DensityMatrix sigma_ab;
    DensityMatrix rho_ac;
};

struct WeightedPureState {
    double weight;
    PureState state;
};

struct SchmidtDecomposition {
    RealVector coefficients;     // non-increasing, positive
    ComplexMatrix left_vectors;  // one column per coefficient
    ComplexMatrix right_vectors; // phases absorbed here
    DimSignature left_sig;
    DimSignature right_sig;
};

struct PptVerdict {
    bool ppt = false;
    double min_eigenvalue = 0.0;
    /// True when the dimensions make PPT equivalent to separability (2x2, 2x3).
    bool decides_separability = false;
};

PureState bell_state();

/// sum_i p_i |phi_i><phi_i| (x) |i><i|_f with computational-basis flags on a
/// new subsystem "f" appended after the pair's subsystems.
DensityMatrix make_pseudo_pure(std::span<const WeightedPureState> pairs, int flag_dim);

OneMcState make_one_mc(const OneMcSpec& spec);

/// The OneMcSpec behind the two-qubit example family.
OneMcSpec example_family_spec(const ExampleFamilyParams& params);
ExampleFamilyState example_family(const ExampleFamilyParams& params);

/// Pure state on (sig..., rank(rho)) whose marginal on sig is rho. The
/// ancilla label defaults to the first of "c", "r", "e", "anc" not in use.
PureState purify(const DensityMatrix& rho, std::optional<std::string> ancilla_label = {});

SchmidtDecomposition schmidt_decompose(const PureState& psi, std::span<const std::string> left);

/// Normalized complex Gaussian vector (unitarily invariant measure).
PureState random_pure_state(const DimSignature& sig, std::uint64_t seed);
/// Marginal of a random pure state on sig (x) C^rank.
DensityMatrix random_density_matrix(const DimSignature& sig, int rank, std::uint64_t seed);

/// Independent stream seed for trial `index` of a campaign seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Positivity of the partial transpose over `subsystem`; bipartite input only.
PptVerdict is_ppt(const DensityMatrix& rho, std::string_view subsystem);

/// |cos t, sin t> for the real qubit states of the example family.
ComplexVector qubit_ket(double angle);

} // namespace qcorr
