#include <doctest.h>

#include "support.hpp"

#include <qcorr/correlations.hpp>
#include <qcorr/entropies.hpp>
#include <qcorr/states.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <numbers>

using namespace qcorr;
using qcorr::test::h2;
using qcorr::test::ket;
using qcorr::test::labels;

namespace {

constexpr double kPi = std::numbers::pi;

double entropy_of(const ComplexMatrix& m) {
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double v = es.eigenvalues()(k);
        if (v > 1e-15) s -= v * std::log2(v);
    }
    return s;
}

// J(a|b) by brute force over Bloch directions, for a da x 2 state.
double grid_j(const ComplexMatrix& rho, int da, int steps) {
    ComplexMatrix ra = ComplexMatrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) ra(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
    const double sa = entropy_of(ra);
    double best = -1.0;
    for (int it = 0; it <= steps; ++it)
        for (int ip = 0; ip < 2 * steps; ++ip) {
            const double t = kPi * it / steps, p = kPi * ip / steps;
            const Complex e = std::polar(1.0, p);
            const ComplexVector up = ket({std::cos(t / 2), e * std::sin(t / 2)});
            const ComplexVector dn = ket({-std::conj(e) * std::sin(t / 2), std::cos(t / 2)});
            double cond = 0.0;
            for (const ComplexVector* v : {&up, &dn}) {
                ComplexMatrix blk = ComplexMatrix::Zero(da, da);
                for (int i = 0; i < da; ++i)
                    for (int j = 0; j < da; ++j)
                        for (int k = 0; k < 2; ++k)
                            for (int l = 0; l < 2; ++l)
                                blk(i, j) += std::conj((*v)(k)) * rho(2 * i + k, 2 * j + l) * (*v)(l);
                const double pk = blk.trace().real();
                if (pk > 1e-12) cond += pk * entropy_of(blk / pk);
            }
            best = std::max(best, sa - cond);
        }
    return best;
}

ComplexMatrix haar_unitary(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    ComplexMatrix z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = Complex(g(rng), g(rng));
    return Eigen::HouseholderQR<ComplexMatrix>(z).householderQ();
}

// 1/2 |0><0| (x) |f0><f0| + 1/2 I/2 (x) |f1><f1| with flags rotated by u.
DensityMatrix cq_state(const ComplexMatrix& u) {
    ComplexMatrix r0 = ComplexMatrix::Zero(2, 2);
    r0(0, 0) = 1.0;
    const ComplexMatrix r1 = 0.5 * ComplexMatrix::Identity(2, 2);
    const ComplexVector f0 = u.col(0), f1 = u.col(1);
    const ComplexMatrix m = 0.5 * tensor_product(r0, ComplexMatrix(f0 * f0.adjoint())) +
                            0.5 * tensor_product(r1, ComplexMatrix(f1 * f1.adjoint()));
    return DensityMatrix(m, DimSignature::bipartite(2, 2));
}

DensityMatrix product_state(std::uint64_t seed) {
    const DensityMatrix ra = random_density_matrix(DimSignature({2}, labels({"a"})), 2, seed);
    const DensityMatrix rb = random_density_matrix(DimSignature({3}, labels({"b"})), 3, seed + 1);
    return DensityMatrix(tensor_product(ra.matrix(), rb.matrix()), DimSignature::bipartite(2, 3));
}

} // namespace

TEST_CASE("measurement_unitary") {
    for (int d = 2; d <= 4; ++d) {
        const int n = measurement_parameter_count(d);
        const std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
        CHECK(max_abs(measurement_unitary(d, zero) - ComplexMatrix::Identity(d, d)) <= 1e-15);
        std::mt19937_64 rng(d);
        std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
        for (int t = 0; t < 50; ++t) {
            std::vector<double> p(static_cast<std::size_t>(n));
            for (auto& x : p) x = ang(rng);
            const ComplexMatrix u = measurement_unitary(d, p);
            REQUIRE(max_abs(u.adjoint() * u - ComplexMatrix::Identity(d, d)) <= 1e-12);
        }
        CHECK_THROWS_AS(measurement_unitary(d, std::vector<double>(static_cast<std::size_t>(n + 1), 0.0)),
                        ValidationError);
    }
}

TEST_CASE("classical_correlation examples") {
    for (std::uint64_t s : {1u, 2u, 3u}) {
        const DensityMatrix prod = product_state(10 * s);
        CHECK(std::abs(classical_correlation(prod, "a", "b").classical_correlation) <= 1e-10);
        CHECK(std::abs(classical_correlation(prod, "b", "a").classical_correlation) <= 1e-10);
    }
    const DensityMatrix bell = bell_state().density();
    const auto jb = classical_correlation(bell, "a", "b");
    CHECK(std::abs(jb.classical_correlation - 1.0) <= 1e-9);
    CHECK(std::abs(grid_j(bell.matrix(), 2, 12) - 1.0) <= 1e-9);

    const DensityMatrix cq = cq_state(ComplexMatrix::Identity(2, 2));
    const auto jcq = classical_correlation(cq, "a", "b");
    const double info = mutual_information(cq, "a", "b");
    CHECK(std::abs(jcq.classical_correlation - info) <= 1e-9);
    CHECK(grid_j(cq.matrix(), 2, 60) <= info + 1e-12);
    // S(a) = h(3/4), S(a|flag) = 1/2
    CHECK(std::abs(info - (h2(0.75) - 0.5)) <= 1e-12);
}

TEST_CASE("classical_correlation agrees with a brute-force grid on random states") {
    double worst_gap = 0.0;
    for (int t = 0; t < 40; ++t) {
        const int da = 2 + t % 2;
        const DensityMatrix rho = random_density_matrix(DimSignature::bipartite(da, 2), 1 + t % (2 * da), derive_seed(21, t));
        const auto r = classical_correlation(rho, "a", "b");
        const double grid = grid_j(rho.matrix(), da, 48);
        // the grid is coarse; the optimizer must not lose to it
        REQUIRE(r.classical_correlation >= grid - 1e-12);
        worst_gap = std::max(worst_gap, r.classical_correlation - grid);
    }
    CHECK(worst_gap <= 1e-3);
}

TEST_CASE("classical_correlation on a qutrit beats random measurements") {
    for (int t = 0; t < 10; ++t) {
        const DensityMatrix rho = random_density_matrix(DimSignature::bipartite(2, 3), 3, derive_seed(22, t));
        const auto r = classical_correlation(rho, "a", "b");
        const double sa = von_neumann_entropy(rho.reduced({"a"}));
        for (int k = 0; k < 20; ++k) {
            const ComplexMatrix u = haar_unitary(3, derive_seed(23, 100 * t + k));
            REQUIRE(sa - post_measurement_entropy(rho, "a", "b", u) <= r.classical_correlation + 1e-12);
        }
    }
}

TEST_CASE("discord examples") {
    const DensityMatrix bell = bell_state().density();
    const auto d = discord(bell, "a", "b");
    CHECK(std::abs(d.discord - 1.0) <= 1e-6);
    CHECK(d.discord == d.mutual_information - d.classical_correlation);
    CHECK(std::abs(discord(product_state(5), "a", "b").discord) <= 1e-9);

    const auto ex = example_family({kPi / 2, kPi / 4});
    CHECK(std::abs(discord(ex.sigma_ab, "a", "b").discord - 0.399124) <= 1e-5);

    const auto m = d.optimal_measurement;
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (const auto& e : m.elements) {
        sum += e;
        CHECK(hermitian_eigenvalues(e)(0) >= -1e-10);
    }
    CHECK(max_abs(sum - ComplexMatrix::Identity(2, 2)) <= 1e-10);
    CHECK(m.rank_one);
}

TEST_CASE("correlation bounds on random states") {
    for (int t = 0; t < 60; ++t) {
        const auto sig = t % 3 == 0 ? DimSignature::bipartite(3, 2) : DimSignature::bipartite(2, 2 + t % 2);
        const DensityMatrix rho = random_density_matrix(sig, 1 + t % sig.total_dim(), derive_seed(24, t));
        const auto r = discord(rho, "a", "b");
        const double sa = von_neumann_entropy(rho.reduced({"a"}));
        const double sb = von_neumann_entropy(rho.reduced({"b"}));
        REQUIRE(r.classical_correlation >= -1e-12);
        REQUIRE(r.classical_correlation <= std::min(sa, sb) + 1e-9);
        REQUIRE(r.discord >= -1e-9);
        REQUIRE(std::abs(r.discord - (r.mutual_information - r.classical_correlation)) <= 1e-12);
    }
}

TEST_CASE("a larger budget never lowers J") {
    for (int t = 0; t < 8; ++t) {
        const DensityMatrix rho = random_density_matrix(DimSignature::bipartite(2, 2 + t % 2), 3, derive_seed(25, t));
        double previous = -1.0;
        for (int starts : {3, 6, 12, 24, 48}) {
            OptimizerBudget b;
            b.starts = starts;
            const double j = classical_correlation(rho, "a", "b", b).classical_correlation;
            REQUIRE(j >= previous - 1e-12);
            previous = j;
        }
    }
}

TEST_CASE("discord on the example grid matches minus the conditional entropy") {
    double worst = 0.0;
    for (int i = 0; i <= 16; ++i)
        for (int j = 0; j <= 16; ++j) {
            const auto ex = example_family({kPi / 2 * i / 16, kPi / 2 * j / 16});
            const double d = discord(ex.sigma_ab, "a", "b").discord;
            worst = std::max(worst, std::abs(d + conditional_entropy(ex.sigma_ab, "a", "b")));
        }
    CHECK(worst <= 1e-4);
}

TEST_CASE("zero_discord_check") {
    SUBCASE("classical-quantum states in rotated flag bases") {
        for (int t = 0; t < 20; ++t) {
            const ComplexMatrix u = t == 0 ? ComplexMatrix(ComplexMatrix::Identity(2, 2)) : haar_unitary(2, derive_seed(26, t));
            const DensityMatrix cq = cq_state(u);
            const auto v = zero_discord_check(cq, "b");
            REQUIRE(v.zero_discord);
            // basis vectors coincide with the flags up to phase
            const ComplexMatrix overlap = u.adjoint() * v.basis;
            const double cross = std::max(std::abs(overlap(0, 0)) * std::abs(overlap(0, 1)),
                                          std::abs(overlap(1, 0)) * std::abs(overlap(1, 1)));
            CHECK(cross <= 1e-9);
            const double sa = von_neumann_entropy(cq.reduced({"a"}));
            CHECK(std::abs(sa - post_measurement_entropy(cq, "a", "b", v.basis) - mutual_information(cq, "a", "b")) <=
                  1e-9);
            CHECK(std::abs(discord(cq, "a", "b").discord) <= 1e-6);
        }
    }
    SUBCASE("entangled and discordant states") {
        CHECK_FALSE(zero_discord_check(bell_state().density(), "b").zero_discord);
        for (auto [theta, phi] : {std::pair{kPi / 3, kPi / 5}, std::pair{1.0, 0.7}, std::pair{0.3, 1.2}}) {
            const auto ex = example_family({theta, phi});
            CHECK_FALSE(zero_discord_check(ex.rho_ac, "c").zero_discord);
            CHECK(is_ppt(ex.rho_ac, "c").ppt);
            CHECK(discord(ex.rho_ac, "a", "c").discord > 1e-3);
        }
    }
    SUBCASE("product states are classical on either side") {
        CHECK(zero_discord_check(product_state(7), "b").zero_discord);
        CHECK(zero_discord_check(product_state(7), "a").zero_discord);
    }
}

TEST_CASE("unsupported measured dimension") {
    const DensityMatrix rho = random_density_matrix(DimSignature::bipartite(2, 5), 3, 1);
    CHECK_THROWS_AS(classical_correlation(rho, "a", "b"), UnsupportedDimension);
    CHECK_NOTHROW(classical_correlation(rho, "b", "a"));
}

TEST_CASE("povm_probe does not beat the projective optimum on qubits") {
    for (int t = 0; t < 5; ++t) {
        const DensityMatrix rho = random_density_matrix(DimSignature::bipartite(2, 2), 2, derive_seed(27, t));
        const auto proj = classical_correlation(rho, "a", "b");
        const auto p = povm_probe(rho, "a", "b", proj, 50, 99);
        CHECK(p.probes == 50);
        CHECK_FALSE(p.beats_projective);
        CHECK(p.best_classical_correlation <= proj.classical_correlation + 1e-6);
    }
}
