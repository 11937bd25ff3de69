#pragma once

#include <qcorr/errors.hpp>

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Entrywise tolerance on max |M - M^dagger| accepted as Hermitian.
inline constexpr double kHermitianTol = 1e-12;

/// Tensor-factor structure of an operator: ordered subsystem dimensions and
/// distinct labels. Composite indices are row-major in label order, so the
/// last label varies fastest.
class DimSignature {
public:
    DimSignature() = default;
    DimSignature(std::vector<int> dims, std::vector<std::string> labels);

    /// Two subsystems labelled "a" and "b".
    static DimSignature bipartite(int dim_a, int dim_b);
    /// Three subsystems labelled "a", "b" and "c".
    static DimSignature tripartite(int dim_a, int dim_b, int dim_c);

    const std::vector<int>& dims() const noexcept { return dims_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return dims_.size(); }
    int total_dim() const noexcept;

    bool contains(std::string_view label) const noexcept;
    /// Position of `label`; throws ValidationError for unknown labels.
    std::size_t index_of(std::string_view label) const;
    int dim_of(std::string_view label) const { return dims_[index_of(label)]; }

    /// Signature restricted to `keep`, preserving this signature's order.
    DimSignature restricted(std::span<const std::string> keep) const;
    /// Signature with the subsystems listed in `order`, in that order.
    DimSignature permuted(std::span<const std::string> order) const;
    DimSignature appended(int dim, std::string label) const;

    bool operator==(const DimSignature&) const = default;

private:
    std::vector<int> dims_;
    std::vector<std::string> labels_;
};

struct EigenDecomposition {
    RealVector values;     // ascending
    ComplexMatrix vectors; // orthonormal columns, matching `values`
};

/// max_ij |M_ij - conj(M_ji)|; +inf for non-square input.
double hermiticity_defect(const ComplexMatrix& m);

/// Throws ValidationError unless `m` is square and Hermitian within `tol`.
void require_hermitian(const ComplexMatrix& m, double tol = kHermitianTol,
                       std::string_view what = "matrix");

ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Input is checked against kHermitianTol and symmetrized first.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

/// Eigenvalues only; same algorithm and checks as hermitian_eig.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

/// V f(diag) V^dagger for Hermitian `m`.
ComplexMatrix hermitian_function(const ComplexMatrix& m,
                                 const std::function<double(double)>& f);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b);

/// Reduced operator on the subsystems in `keep` (ordered as in `sig`).
/// An empty `keep` is rejected; keeping every label returns `rho` unchanged.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const DimSignature& sig,
                            std::span<const std::string> keep);

/// Transpose of the tensor factor named `label`.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, const DimSignature& sig,
                                std::string_view label);

/// Reorders tensor factors to follow `order` (a permutation of sig's labels).
ComplexMatrix permute_subsystems(const ComplexMatrix& rho, const DimSignature& sig,
                                 std::span<const std::string> order);
ComplexVector permute_subsystems(const ComplexVector& psi, const DimSignature& sig,
                                 std::span<const std::string> order);

double max_abs(const ComplexMatrix& m);

} // namespace qcorr
