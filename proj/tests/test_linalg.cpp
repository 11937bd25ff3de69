#include <doctest.h>

#include "support.hpp"

#include <qcorr/states.hpp>

#include <Eigen/Eigenvalues>

#include <numbers>

using namespace qcorr;
using qcorr::test::labels;

namespace {

ComplexMatrix bell_projector() {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = v(3) = 1.0 / std::numbers::sqrt2;
    return v * v.adjoint();
}

ComplexMatrix pauli_x() {
    ComplexMatrix x = ComplexMatrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    return x;
}

} // namespace

TEST_CASE("DimSignature validation and lookup") {
    const auto sig = DimSignature::tripartite(2, 3, 4);
    CHECK(sig.total_dim() == 24);
    CHECK(sig.index_of("c") == 2);
    CHECK(sig.dim_of("b") == 3);
    CHECK_THROWS_AS(sig.index_of("z"), ValidationError);
    CHECK_THROWS_AS(DimSignature({2, 2}, labels({"a", "a"})), ValidationError);
    CHECK_THROWS_AS(DimSignature({2, 0}, labels({"a", "b"})), ValidationError);
    CHECK_THROWS_AS(DimSignature({2}, labels({"a", "b"})), ValidationError);
    const auto keep = labels({"c", "a"});
    CHECK(sig.restricted(keep) == DimSignature({2, 4}, labels({"a", "c"})));
    const auto order = labels({"c", "a", "b"});
    CHECK(sig.permuted(order) == DimSignature({4, 2, 3}, labels({"c", "a", "b"})));
    CHECK_THROWS_AS(sig.permuted(keep), ValidationError);
}

TEST_CASE("hermitian_eig on small cases") {
    SUBCASE("identity") {
        const auto e = hermitian_eig(ComplexMatrix::Identity(2, 2));
        CHECK(e.values(0) == doctest::Approx(1.0));
        CHECK(e.values(1) == doctest::Approx(1.0));
    }
    SUBCASE("pauli z, ascending") {
        ComplexMatrix z = ComplexMatrix::Zero(2, 2);
        z(0, 0) = 1.0;
        z(1, 1) = -1.0;
        const auto e = hermitian_eig(z);
        CHECK(e.values(0) == doctest::Approx(-1.0));
        CHECK(e.values(1) == doctest::Approx(1.0));
    }
    SUBCASE("example family sigma_ab at phi = pi/4") {
        for (double theta : {0.0, 0.3, std::numbers::pi / 4, std::numbers::pi / 2}) {
            const auto ex = example_family({theta, std::numbers::pi / 4});
            const RealVector v = hermitian_eigenvalues(ex.sigma_ab.matrix());
            const double c = std::cos(std::numbers::pi / 4);
            CHECK(std::abs(v(0)) <= 1e-12);
            CHECK(std::abs(v(1)) <= 1e-12);
            CHECK(std::abs(v(2) - (1 - c) / 2) <= 1e-12);
            CHECK(std::abs(v(3) - (1 + c) / 2) <= 1e-12);
        }
    }
}

TEST_CASE("hermitian_eig rejects bad input naming the bound") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    try {
        hermitian_eig(m);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("1e-12") != std::string::npos);
    }
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix::Zero(2, 3)), ValidationError);
    // a defect inside the tolerance is accepted
    ComplexMatrix n = ComplexMatrix::Identity(2, 2);
    n(0, 1) = 1e-13;
    CHECK_NOTHROW(hermitian_eig(n));
}

TEST_CASE("hermitian_eig round trip on 1000 random matrices, checked against Eigen") {
    std::mt19937_64 rng(2024);
    double worst_recon = 0.0, worst_orth = 0.0, worst_vs_eigen = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + t % 16;
        const ComplexMatrix m = qcorr::test::random_hermitian(n, rng);
        const auto e = hermitian_eig(m);
        const ComplexMatrix recon = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
        worst_recon = std::max(worst_recon, max_abs(recon - m));
        worst_orth = std::max(worst_orth, max_abs(e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(n, n)));
        for (Eigen::Index k = 1; k < n; ++k) REQUIRE(e.values(k - 1) <= e.values(k));
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(m);
        worst_vs_eigen = std::max(worst_vs_eigen, (ref.eigenvalues() - e.values).cwiseAbs().maxCoeff());
    }
    CHECK(worst_recon <= 1e-10);
    CHECK(worst_orth <= 1e-10);
    CHECK(worst_vs_eigen <= 1e-10);
}

TEST_CASE("hermitian_function") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 4.0;
    m(1, 1) = 9.0;
    const ComplexMatrix r = hermitian_function(m, [](double x) { return std::sqrt(x); });
    CHECK(std::abs(r(0, 0) - 2.0) <= 1e-12);
    CHECK(std::abs(r(1, 1) - 3.0) <= 1e-12);
}

TEST_CASE("tensor_product examples") {
    CHECK(tensor_product(ComplexMatrix(ComplexMatrix::Identity(2, 2)), ComplexMatrix(ComplexMatrix::Identity(2, 2))) ==
          ComplexMatrix::Identity(4, 4));
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(1, 1) = 1.0;
    CHECK(tensor_product(p0, p1) == expect);
    const ComplexMatrix block = tensor_product(p0, pauli_x());
    CHECK(block.topLeftCorner(2, 2) == pauli_x());
    CHECK(block.bottomRightCorner(2, 2).isZero());
    // index convention
    std::mt19937_64 rng(5);
    const ComplexMatrix a = qcorr::test::random_hermitian(2, rng);
    const ComplexMatrix b = qcorr::test::random_hermitian(3, rng);
    const ComplexMatrix ab = tensor_product(a, b);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) REQUIRE(ab(i * 3 + k, j * 3 + l) == a(i, j) * b(k, l));
}

TEST_CASE("partial_trace examples and properties") {
    const auto sig = DimSignature::bipartite(2, 2);
    const auto keep_a = labels({"a"});
    CHECK(max_abs(partial_trace(bell_projector(), sig, keep_a) - 0.5 * ComplexMatrix::Identity(2, 2)) <= 1e-15);

    SUBCASE("product state") {
        std::mt19937_64 rng(11);
        const DensityMatrix ra = random_density_matrix(DimSignature({2}, labels({"a"})), 2, 1);
        const DensityMatrix rb = random_density_matrix(DimSignature({3}, labels({"b"})), 3, 2);
        const ComplexMatrix prod = tensor_product(ra.matrix(), rb.matrix());
        CHECK(max_abs(partial_trace(prod, DimSignature::bipartite(2, 3), keep_a) - ra.matrix()) <= 1e-12);
        const ComplexMatrix b = qcorr::test::random_hermitian(3, rng);
        const ComplexMatrix a = qcorr::test::random_hermitian(2, rng);
        CHECK(max_abs(partial_trace(tensor_product(a, b), DimSignature::bipartite(2, 3), keep_a) - a * b.trace()) <=
              1e-12);
    }
    SUBCASE("example family keep b at (pi/2, pi/4)") {
        const auto ex = example_family({std::numbers::pi / 2, std::numbers::pi / 4});
        const auto keep_b = labels({"b"});
        const ComplexMatrix rb = partial_trace(ex.psi.projector(), ex.psi.sig(), keep_b);
        CHECK(max_abs(rb - 0.5 * ComplexMatrix::Identity(2, 2)) <= 1e-12);
        const auto ex2 = example_family({0.4, 0.7});
        const ComplexMatrix rb2 = partial_trace(ex2.psi.projector(), ex2.psi.sig(), keep_b);
        CHECK(std::abs(rb2(0, 1) - 0.5 * std::cos(0.4) * std::cos(0.7)) <= 1e-12);
    }
    SUBCASE("trace preserving, positive, keep-all is identity map") {
        for (int t = 0; t < 50; ++t) {
            const DensityMatrix rho = random_density_matrix(DimSignature::tripartite(2, 3, 2), 5, 100 + t);
            const auto keep = labels({"a", "c"});
            const ComplexMatrix r = partial_trace(rho.matrix(), rho.sig(), keep);
            CHECK(std::abs(r.trace() - rho.matrix().trace()) <= 1e-12);
            CHECK(hermitian_eigenvalues(r)(0) >= -1e-10);
            const auto all = labels({"a", "b", "c"});
            CHECK(partial_trace(rho.matrix(), rho.sig(), all) == rho.matrix());
        }
    }
    SUBCASE("errors") {
        const auto unknown = labels({"z"});
        CHECK_THROWS_AS(partial_trace(bell_projector(), sig, unknown), ValidationError);
        CHECK_THROWS_AS(partial_trace(bell_projector(), sig, std::span<const std::string>{}), ValidationError);
        CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(3, 3), sig, keep_a), ValidationError);
    }
}

TEST_CASE("partial_transpose") {
    const auto sig = DimSignature::bipartite(2, 2);
    const ComplexMatrix pt = partial_transpose(bell_projector(), sig, "b");
    CHECK(std::abs(hermitian_eigenvalues(pt)(0) + 0.5) <= 1e-12);

    for (int t = 0; t < 50; ++t) {
        const DensityMatrix rho = random_density_matrix(DimSignature::bipartite(2, 3), 6, 300 + t);
        for (const char* l : {"a", "b"}) {
            const ComplexMatrix once = partial_transpose(rho.matrix(), rho.sig(), l);
            CHECK(partial_transpose(once, rho.sig(), l) == rho.matrix());
            CHECK(hermiticity_defect(once) <= 1e-15);
        }
    }
    const DensityMatrix ra = random_density_matrix(DimSignature({2}, labels({"a"})), 2, 9);
    const DensityMatrix rb = random_density_matrix(DimSignature({2}, labels({"b"})), 2, 10);
    const ComplexMatrix prod = tensor_product(ra.matrix(), rb.matrix());
    const RealVector s0 = hermitian_eigenvalues(prod);
    const RealVector s1 = hermitian_eigenvalues(partial_transpose(prod, sig, "b"));
    CHECK((s0 - s1).cwiseAbs().maxCoeff() <= 1e-12);

    ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
    diag.diagonal() << 0.1, 0.2, 0.3, 0.4;
    CHECK(partial_transpose(diag, sig, "a") == diag);
    CHECK_THROWS_AS(partial_transpose(diag, sig, "q"), ValidationError);
}

TEST_CASE("permute_subsystems moves tensor factors") {
    std::mt19937_64 rng(3);
    const ComplexMatrix a = qcorr::test::random_hermitian(2, rng);
    const ComplexMatrix b = qcorr::test::random_hermitian(3, rng);
    const auto order = labels({"b", "a"});
    const ComplexMatrix swapped = permute_subsystems(tensor_product(a, b), DimSignature::bipartite(2, 3), order);
    CHECK(max_abs(swapped - tensor_product(b, a)) <= 1e-15);
}
