#include <qcorr/correlations.hpp>

#include <qcorr/entropies.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace qcorr {

namespace {

constexpr double kZeroProbability = 1e-12;

// rho on (target, measured) split into dt x dt blocks B[x][y] with
// B[x][y](i, j) = rho((i, x), (j, y)).
class ConditionedBlocks {
public:
    ConditionedBlocks(const ComplexMatrix& rho, int dt, int dm) : dt_(dt), dm_(dm) {
        blocks_.resize(static_cast<std::size_t>(dm * dm), ComplexMatrix(dt, dt));
        for (int x = 0; x < dm; ++x)
            for (int y = 0; y < dm; ++y)
                for (int i = 0; i < dt; ++i)
                    for (int j = 0; j < dt; ++j) block(x, y)(i, j) = rho(i * dm + x, j * dm + y);
    }

    int dt() const { return dt_; }
    int dm() const { return dm_; }

    /// Unnormalized target state after projecting the measured side on |u>.
    ComplexMatrix conditioned(const Eigen::Ref<const ComplexVector>& u) const {
        ComplexMatrix m = ComplexMatrix::Zero(dt_, dt_);
        for (int x = 0; x < dm_; ++x)
            for (int y = 0; y < dm_; ++y) m += std::conj(u(x)) * u(y) * block(x, y);
        return m;
    }

    /// Same for a general PSD element E on the measured side: Tr_m[(I (x) E) rho].
    ComplexMatrix conditioned_by(const ComplexMatrix& e) const {
        ComplexMatrix m = ComplexMatrix::Zero(dt_, dt_);
        for (int x = 0; x < dm_; ++x)
            for (int y = 0; y < dm_; ++y) m += e(y, x) * block(x, y);
        return m;
    }

    double entropy_after(const ComplexMatrix& basis, std::vector<double>* probs = nullptr) const {
        double s = 0.0;
        if (probs) probs->clear();
        for (Eigen::Index k = 0; k < basis.cols(); ++k) {
            const ComplexMatrix m = conditioned(basis.col(k));
            const double p = m.trace().real();
            if (probs) probs->push_back(p);
            if (p > kZeroProbability) s += p * entropy_of_block(m, p);
        }
        return s;
    }

private:
    ComplexMatrix& block(int x, int y) { return blocks_[static_cast<std::size_t>(x * dm_ + y)]; }
    const ComplexMatrix& block(int x, int y) const { return blocks_[static_cast<std::size_t>(x * dm_ + y)]; }

    int dt_;
    int dm_;
    std::vector<ComplexMatrix> blocks_;
};

struct PairView {
    DensityMatrix marginal; // labels (target, measured) in sig order
    ComplexMatrix ordered;  // target first, measured second
    int dt;
    int dm;
};

PairView pair_view(const DensityMatrix& rho, std::string_view target, std::string_view measured) {
    if (target == measured) throw ValidationError("target and measured subsystems must differ");
    const std::vector<std::string> keep{std::string(target), std::string(measured)};
    DensityMatrix marginal = rho.reduced(keep);
    ComplexMatrix ordered = permute_subsystems(marginal.matrix(), marginal.sig(), keep);
    const int dt = marginal.sig().dim_of(target);
    const int dm = marginal.sig().dim_of(measured);
    return PairView{std::move(marginal), std::move(ordered), dt, dm};
}

std::vector<double> start_point(int d, int index) {
    const auto n = static_cast<std::size_t>(measurement_parameter_count(d));
    std::vector<double> x(n, 0.0);
    if (index == 0) return x;
    const auto h = halton_point(static_cast<std::uint64_t>(index - 1), n);
    if (d == 2) {
        x[0] = std::acos(1.0 - 2.0 * h[0]);
        x[1] = 2.0 * std::numbers::pi * h[1];
    } else {
        for (std::size_t k = 0; k < n; k += 2) {
            x[k] = 0.5 * std::numbers::pi * h[k];
            x[k + 1] = 2.0 * std::numbers::pi * h[k + 1];
        }
    }
    return x;
}

} // namespace

int measurement_parameter_count(int d) {
    if (d <= 1) return 0;
    return d * (d - 1);
}

ComplexMatrix measurement_unitary(int d, std::span<const double> params) {
    if (static_cast<int>(params.size()) != measurement_parameter_count(d)) {
        throw ValidationError("measurement_unitary: wrong parameter count");
    }
    if (d == 1) return ComplexMatrix::Identity(1, 1);
    if (d == 2) {
        const double c = std::cos(params[0] / 2.0);
        const double s = std::sin(params[0] / 2.0);
        const Complex ph = std::polar(1.0, params[1]);
        ComplexMatrix u(2, 2);
        u << c, -std::conj(ph) * s, ph * s, c;
        return u;
    }
    ComplexMatrix u = ComplexMatrix::Identity(d, d);
    std::size_t k = 0;
    for (int p = 0; p < d; ++p) {
        for (int q = p + 1; q < d; ++q) {
            const double c = std::cos(params[k]);
            const double s = std::sin(params[k]);
            const Complex ph = std::polar(1.0, params[k + 1]);
            k += 2;
            // u <- u G with G acting on columns p, q
            for (int r = 0; r < d; ++r) {
                const Complex up = u(r, p);
                const Complex uq = u(r, q);
                u(r, p) = c * up + std::conj(ph) * s * uq;
                u(r, q) = -ph * s * up + c * uq;
            }
        }
    }
    return u;
}

double post_measurement_entropy(const DensityMatrix& rho, std::string_view target,
                                std::string_view measured, const ComplexMatrix& basis) {
    const PairView v = pair_view(rho, target, measured);
    if (basis.rows() != v.dm) throw ValidationError("measurement basis has the wrong dimension");
    return ConditionedBlocks(v.ordered, v.dt, v.dm).entropy_after(basis);
}

DiscordResult classical_correlation(const DensityMatrix& rho, std::string_view target,
                                    std::string_view measured, const OptimizerBudget& budget) {
    const PairView v = pair_view(rho, target, measured);
    if (v.dm > kMaxMeasuredDim) {
        throw UnsupportedDimension("classical_correlation: measured subsystem '" + std::string(measured) +
                                   "' has dimension " + std::to_string(v.dm) + " > " +
                                   std::to_string(kMaxMeasuredDim));
    }
    if (budget.starts < 1 || budget.iterations < 0) {
        throw ValidationError("optimizer budget needs at least one start");
    }
    const ConditionedBlocks blocks(v.ordered, v.dt, v.dm);
    const int d = v.dm;
    const Objective objective = [&](std::span<const double> x) {
        return blocks.entropy_after(measurement_unitary(d, x));
    };

    NelderMeadOptions nm;
    nm.max_iterations = budget.iterations;
    nm.simplex_tol = budget.simplex_tol;
    nm.initial_step = 0.5;

    // Each start is independent; merging keeps the first strict minimum in
    // start order.
    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    OptimizerTrace trace;
    for (int s = 0; s < budget.starts; ++s) {
        NelderMeadResult r = nelder_mead(objective, start_point(d, s), nm);
        trace.refinement_iterations += r.iterations;
        ++trace.seeds_tried;
        if (r.value < best.value) {
            best = std::move(r);
            trace.best_start = s;
        }
    }
    trace.achieved_tolerance = best.simplex_size;

    const std::vector<std::string> tl{std::string(target)};
    const double s_target = von_neumann_entropy(v.marginal.reduced(tl));

    DiscordResult out;
    out.target = std::string(target);
    out.measured = std::string(measured);
    out.classical_correlation = s_target - best.value;
    out.mutual_information = mutual_information(v.marginal, target, measured);
    out.discord = out.mutual_information - out.classical_correlation;
    out.optimizer_trace = trace;

    const ComplexMatrix basis = measurement_unitary(d, best.x);
    Measurement& m = out.optimal_measurement;
    m.rank_one = true;
    m.parameters = best.x;
    for (Eigen::Index k = 0; k < basis.cols(); ++k) m.elements.push_back(basis.col(k) * basis.col(k).adjoint());
    blocks.entropy_after(basis, &m.probabilities);
    return out;
}

DiscordResult discord(const DensityMatrix& rho, std::string_view target, std::string_view measured,
                      const OptimizerBudget& budget) {
    return classical_correlation(rho, target, measured, budget);
}

ZeroDiscordVerdict zero_discord_check(const DensityMatrix& rho, std::string_view measured) {
    const auto& sig = rho.sig();
    if (sig.size() < 2) throw ValidationError("zero_discord_check: needs at least two subsystems");
    std::vector<std::string> order;
    for (const auto& l : sig.labels())
        if (l != measured) order.push_back(l);
    order.emplace_back(measured);
    const ComplexMatrix ordered = permute_subsystems(rho.matrix(), sig, order);
    const int dm = sig.dim_of(measured);
    const int dt = sig.total_dim() / dm;

    auto block = [&](int k, int l) {
        ComplexMatrix m(dm, dm);
        for (int x = 0; x < dm; ++x)
            for (int y = 0; y < dm; ++y) m(x, y) = ordered(k * dm + x, l * dm + y);
        return m;
    };

    // Hermitian family whose common eigenbases are the candidate bases; the
    // measured marginal goes first.
    std::vector<ComplexMatrix> family;
    ComplexMatrix marginal = ComplexMatrix::Zero(dm, dm);
    for (int k = 0; k < dt; ++k) marginal += block(k, k);
    family.push_back(marginal);
    for (int k = 0; k < dt; ++k) {
        family.push_back(block(k, k));
        for (int l = k + 1; l < dt; ++l) {
            const ComplexMatrix m = block(k, l);
            family.push_back(m + m.adjoint());
            family.push_back(Complex(0.0, 1.0) * (m - m.adjoint()));
        }
    }

    constexpr double kClusterTol = 1e-9;
    std::vector<ComplexMatrix> subspaces{ComplexMatrix::Identity(dm, dm)};
    for (const auto& h : family) {
        std::vector<ComplexMatrix> refined;
        for (const auto& b : subspaces) {
            if (b.cols() == 1) {
                refined.push_back(b);
                continue;
            }
            const auto eig = hermitian_eig(hermitian_part(b.adjoint() * h * b));
            Eigen::Index start = 0;
            for (Eigen::Index k = 1; k <= eig.values.size(); ++k) {
                if (k == eig.values.size() || eig.values(k) - eig.values(k - 1) > kClusterTol) {
                    refined.push_back(b * eig.vectors.middleCols(start, k - start));
                    start = k;
                }
            }
        }
        subspaces = std::move(refined);
    }

    ComplexMatrix basis(dm, dm);
    Eigen::Index col = 0;
    for (const auto& b : subspaces) {
        basis.middleCols(col, b.cols()) = b;
        col += b.cols();
    }

    const ComplexMatrix rotated = tensor_product(ComplexMatrix::Identity(dt, dt), basis).adjoint() * ordered *
                                  tensor_product(ComplexMatrix::Identity(dt, dt), basis);
    double off = 0.0;
    for (int i = 0; i < dt * dm; ++i)
        for (int j = 0; j < dt * dm; ++j)
            if (i % dm != j % dm) off = std::max(off, std::abs(rotated(i, j)));

    ZeroDiscordVerdict v;
    v.max_off_block = off;
    v.zero_discord = off <= 1e-9;
    if (v.zero_discord) v.basis = std::move(basis);
    return v;
}

PovmProbe povm_probe(const DensityMatrix& rho, std::string_view target, std::string_view measured,
                     const DiscordResult& projective, int probes, std::uint64_t seed) {
    const PairView v = pair_view(rho, target, measured);
    const ConditionedBlocks blocks(v.ordered, v.dt, v.dm);
    const std::vector<std::string> tl{std::string(target)};
    const double s_target = von_neumann_entropy(v.marginal.reduced(tl));
    const int outcomes = v.dm * v.dm;

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    PovmProbe out;
    out.best_classical_correlation = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < probes; ++t) {
        ComplexMatrix g(outcomes, v.dm);
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(normal(gen), normal(gen));
        // Orthonormal columns: rows w_k give E_k = w_k^dagger w_k summing to I.
        const ComplexMatrix iso = Eigen::HouseholderQR<ComplexMatrix>(g).householderQ() *
                                  ComplexMatrix::Identity(outcomes, v.dm);
        double s = 0.0;
        for (int k = 0; k < outcomes; ++k) {
            const ComplexMatrix e = iso.row(k).adjoint() * iso.row(k);
            const ComplexMatrix m = blocks.conditioned_by(e);
            const double p = m.trace().real();
            if (p > kZeroProbability) s += p * entropy_of_block(hermitian_part(m), p);
        }
        out.best_classical_correlation = std::max(out.best_classical_correlation, s_target - s);
        ++out.probes;
    }
    out.beats_projective = out.best_classical_correlation > projective.classical_correlation + 1e-6;
    return out;
}

} // namespace qcorr
