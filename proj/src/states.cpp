#include <qcorr/states.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qcorr {

namespace {

std::string describe(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

PureState::PureState(ComplexVector amplitudes, DimSignature sig)
    : amplitudes_(std::move(amplitudes)), sig_(std::move(sig)) {
    if (amplitudes_.size() != sig_.total_dim()) {
        throw ValidationError("pure state: " + std::to_string(amplitudes_.size()) +
                              " amplitudes for total dimension " + std::to_string(sig_.total_dim()));
    }
    const double norm = amplitudes_.norm();
    if (!(std::abs(norm - 1.0) <= kNormTol)) {
        throw ValidationError("pure state: norm " + describe(norm) + " differs from 1 by more than " +
                              describe(kNormTol));
    }
}

PureState PureState::normalized(ComplexVector amplitudes, DimSignature sig) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ValidationError("pure state: cannot normalize a zero or non-finite vector");
    }
    amplitudes /= norm;
    return PureState(std::move(amplitudes), std::move(sig));
}

DensityMatrix PureState::density() const {
    return DensityMatrix(projector(), sig_);
}

DensityMatrix PureState::reduced(std::span<const std::string> keep) const {
    return DensityMatrix(partial_trace(projector(), sig_, keep), sig_.restricted(keep));
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, DimSignature sig)
    : matrix_(std::move(matrix)), sig_(std::move(sig)) {
    if (matrix_.rows() != sig_.total_dim() || matrix_.cols() != sig_.total_dim()) {
        throw ValidationError("density matrix: shape " + std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()) + " does not match total dimension " +
                              std::to_string(sig_.total_dim()));
    }
    require_hermitian(matrix_, kHermitianTol, "density matrix");
    matrix_ = hermitian_part(matrix_);
    const double tr = matrix_.trace().real();
    if (!(std::abs(tr - 1.0) <= kTraceTol)) {
        throw ValidationError("density matrix: trace " + describe(tr) + " differs from 1 by more than " +
                              describe(kTraceTol));
    }
    const double lowest = hermitian_eigenvalues(matrix_)(0);
    if (!(lowest >= -kPsdTol)) {
        throw ValidationError("density matrix: eigenvalue " + describe(lowest) + " below -" +
                              describe(kPsdTol) + " (not positive semidefinite)");
    }
}

DensityMatrix DensityMatrix::reduced(std::span<const std::string> keep) const {
    return DensityMatrix(partial_trace(matrix_, sig_, keep), sig_.restricted(keep));
}

int DensityMatrix::rank(double cutoff) const {
    const RealVector ev = eigenvalues();
    return static_cast<int>((ev.array() > cutoff).count());
}

PureState bell_state() {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = std::numbers::sqrt2 / 2.0;
    v(3) = std::numbers::sqrt2 / 2.0;
    return PureState::normalized(std::move(v), DimSignature::bipartite(2, 2));
}

DensityMatrix make_pseudo_pure(std::span<const WeightedPureState> pairs, int flag_dim) {
    if (pairs.empty()) throw ValidationError("pseudo-pure: at least one pair is required");
    if (flag_dim < static_cast<int>(pairs.size())) {
        throw ValidationError("pseudo-pure: flag dimension " + std::to_string(flag_dim) +
                              " smaller than the number of pairs " + std::to_string(pairs.size()));
    }
    const DimSignature& base = pairs.front().state.sig();
    double total = 0.0;
    for (const auto& p : pairs) {
        if (!(p.weight > 0.0)) throw ValidationError("pseudo-pure: probabilities must be positive");
        if (!(p.state.sig() == base)) {
            throw ValidationError("pseudo-pure: all pair states must share one signature");
        }
        total += p.weight;
    }
    if (!(std::abs(total - 1.0) <= 1e-10)) {
        throw ValidationError("pseudo-pure: probabilities sum to " + describe(total) + ", not 1");
    }

    std::string flag = "f";
    while (base.contains(flag)) flag += "'";
    const DimSignature sig = base.appended(flag_dim, flag);

    ComplexMatrix rho = ComplexMatrix::Zero(sig.total_dim(), sig.total_dim());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        ComplexMatrix f = ComplexMatrix::Zero(flag_dim, flag_dim);
        f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        rho += pairs[i].weight * tensor_product(pairs[i].state.projector(), f);
    }
    return DensityMatrix(std::move(rho), sig);
}

OneMcState make_one_mc(const OneMcSpec& spec) {
    const std::size_t n = spec.size();
    if (n == 0) throw ValidationError("one-mc: empty specification");
    if (spec.a_states.size() != n || spec.c_states.size() != n) {
        throw ValidationError("one-mc: alphas, a_states and c_states must have equal length");
    }
    const Eigen::Index da = spec.a_states.front().size();
    const Eigen::Index dc = spec.c_states.front().size();
    if (da == 0 || dc == 0) throw ValidationError("one-mc: empty local state");
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.a_states[i].size() != da) throw ValidationError("one-mc: a_states dimension mismatch");
        if (spec.c_states[i].size() != dc) throw ValidationError("one-mc: c_states dimension mismatch");
        if (!(std::abs(spec.a_states[i].norm() - 1.0) <= kNormTol)) {
            throw ValidationError("one-mc: a_states[" + std::to_string(i) + "] is not normalized");
        }
        if (!(std::abs(spec.c_states[i].norm() - 1.0) <= kNormTol)) {
            throw ValidationError("one-mc: c_states[" + std::to_string(i) + "] is not normalized");
        }
    }

    const auto sig = DimSignature::tripartite(static_cast<int>(da), static_cast<int>(n),
                                              static_cast<int>(dc));
    ComplexVector psi = ComplexVector::Zero(sig.total_dim());
    for (std::size_t i = 0; i < n; ++i) {
        ComplexVector b = ComplexVector::Zero(static_cast<Eigen::Index>(n));
        b(static_cast<Eigen::Index>(i)) = 1.0;
        psi += spec.alphas[i] * tensor_product(tensor_product(spec.a_states[i], b), spec.c_states[i]);
    }
    PureState state(std::move(psi), sig);

    bool degenerate = false;
    for (std::size_t i = 0; i < n && !degenerate; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(std::abs(spec.a_states[i].dot(spec.a_states[j])) - 1.0) <= 1e-12) degenerate = true;

    const std::vector<std::string> ab{"a", "b"};
    DensityMatrix rho_ab = state.reduced(ab);
    return OneMcState{std::move(state), std::move(rho_ab), degenerate};
}

ComplexVector qubit_ket(double angle) {
    ComplexVector v(2);
    v << std::cos(angle), std::sin(angle);
    return v;
}

OneMcSpec example_family_spec(const ExampleFamilyParams& params) {
    constexpr double slack = 1e-12;
    const double top = std::numbers::pi / 2.0;
    for (double angle : {params.theta, params.phi}) {
        if (!(angle >= -slack && angle <= top + slack)) {
            throw ValidationError("example family: angle " + describe(angle) + " outside [0, pi/2]");
        }
    }
    const double amp = std::numbers::sqrt2 / 2.0;
    return OneMcSpec{{amp, amp},
                     {qubit_ket(0.0), qubit_ket(params.theta)},
                     {qubit_ket(0.0), qubit_ket(params.phi)}};
}

ExampleFamilyState example_family(const ExampleFamilyParams& params) {
    OneMcState mc = make_one_mc(example_family_spec(params));
    const std::vector<std::string> ac{"a", "c"};
    DensityMatrix rho_ac = mc.psi.reduced(ac);
    return ExampleFamilyState{std::move(mc.psi), std::move(mc.rho_ab), std::move(rho_ac)};
}

PureState purify(const DensityMatrix& rho, std::optional<std::string> ancilla_label) {
    std::string label;
    if (ancilla_label) {
        label = *ancilla_label;
    } else {
        for (const char* candidate : {"c", "r", "e", "anc"}) {
            if (!rho.sig().contains(candidate)) {
                label = candidate;
                break;
            }
        }
        while (label.empty() || rho.sig().contains(label)) label += "_";
    }
    const auto eig = hermitian_eig(rho.matrix());
    std::vector<Eigen::Index> support;
    for (Eigen::Index k = eig.values.size(); k-- > 0;)
        if (eig.values(k) > kRankCutoff) support.push_back(k);
    const auto r = static_cast<Eigen::Index>(support.size());
    const Eigen::Index d = rho.dim();

    ComplexVector psi = ComplexVector::Zero(d * r);
    for (Eigen::Index k = 0; k < r; ++k) {
        const Eigen::Index col = support[static_cast<std::size_t>(k)];
        const double w = std::sqrt(eig.values(col));
        for (Eigen::Index i = 0; i < d; ++i) psi(i * r + k) = w * eig.vectors(i, col);
    }
    return PureState::normalized(std::move(psi), rho.sig().appended(static_cast<int>(r), label));
}

SchmidtDecomposition schmidt_decompose(const PureState& psi, std::span<const std::string> left) {
    const auto& sig = psi.sig();
    if (left.empty() || left.size() >= sig.size()) {
        throw ValidationError("schmidt: the left set must be a non-empty proper subset of the labels");
    }
    std::vector<bool> in_left(sig.size(), false);
    for (const auto& l : left) in_left[sig.index_of(l)] = true;
    std::vector<std::string> left_labels;
    std::vector<std::string> right_labels;
    for (std::size_t k = 0; k < sig.size(); ++k) {
        (in_left[k] ? left_labels : right_labels).push_back(sig.labels()[k]);
    }
    if (right_labels.empty()) {
        throw ValidationError("schmidt: the left set must be a non-empty proper subset of the labels");
    }
    std::vector<std::string> order = left_labels;
    order.insert(order.end(), right_labels.begin(), right_labels.end());

    const ComplexVector v = permute_subsystems(psi.amplitudes(), sig, order);
    DimSignature lsig = sig.restricted(left_labels);
    DimSignature rsig = sig.restricted(right_labels);
    const int dl = lsig.total_dim();
    const int dr = rsig.total_dim();
    ComplexMatrix m(dl, dr);
    for (int i = 0; i < dl; ++i)
        for (int j = 0; j < dr; ++j) m(i, j) = v(i * dr + j);

    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector s = svd.singularValues();
    Eigen::Index keep = 0;
    while (keep < s.size() && s(keep) > 1e-12) ++keep;

    SchmidtDecomposition out;
    out.coefficients = s.head(keep);
    out.left_vectors = svd.matrixU().leftCols(keep);
    out.right_vectors = svd.matrixV().leftCols(keep).conjugate();
    out.left_sig = std::move(lsig);
    out.right_sig = std::move(rsig);
    return out;
}

namespace {

ComplexVector gaussian_vector(Eigen::Index n, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = normal(gen);
        const double im = normal(gen);
        v(i) = Complex(re, im);
    }
    return v;
}

} // namespace

PureState random_pure_state(const DimSignature& sig, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    return PureState::normalized(gaussian_vector(sig.total_dim(), gen), sig);
}

DensityMatrix random_density_matrix(const DimSignature& sig, int rank, std::uint64_t seed) {
    const int d = sig.total_dim();
    if (rank < 1 || rank > d) {
        throw ValidationError("random density matrix: rank " + std::to_string(rank) +
                              " outside [1, " + std::to_string(d) + "]");
    }
    std::mt19937_64 gen(seed);
    ComplexVector g = gaussian_vector(static_cast<Eigen::Index>(d) * rank, gen);
    g.normalize();
    // Row-major reshape of the joint vector: rows index sig, columns the environment.
    ComplexMatrix m(d, rank);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < rank; ++k) m(i, k) = g(i * rank + k);
    return DensityMatrix(m * m.adjoint(), sig);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    // splitmix64 finalizer over the combined key
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

PptVerdict is_ppt(const DensityMatrix& rho, std::string_view subsystem) {
    const auto& sig = rho.sig();
    if (sig.size() != 2) {
        throw ValidationError("is_ppt: bipartite signature required, got " + std::to_string(sig.size()) +
                              " subsystems");
    }
    const ComplexMatrix pt = partial_transpose(rho.matrix(), sig, subsystem);
    PptVerdict v;
    v.min_eigenvalue = hermitian_eigenvalues(pt)(0);
    v.ppt = v.min_eigenvalue >= -kPsdTol;
    const int lo = std::min(sig.dims()[0], sig.dims()[1]);
    const int hi = std::max(sig.dims()[0], sig.dims()[1]);
    v.decides_separability = lo == 1 || (lo == 2 && hi <= 3);
    return v;
}

} // namespace qcorr
