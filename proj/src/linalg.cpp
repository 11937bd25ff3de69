#include <qcorr/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace qcorr {

DimSignature::DimSignature(std::vector<int> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.size() != labels_.size()) {
        throw ValidationError("signature: " + std::to_string(dims_.size()) + " dims but " +
                              std::to_string(labels_.size()) + " labels");
    }
    if (dims_.empty()) {
        throw ValidationError("signature: at least one subsystem is required");
    }
    for (int d : dims_) {
        if (d < 1) throw ValidationError("signature: subsystem dimension must be >= 1");
    }
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (l.empty()) throw ValidationError("signature: empty label");
        if (!seen.insert(l).second) throw ValidationError("signature: duplicate label '" + l + "'");
    }
}

DimSignature DimSignature::bipartite(int dim_a, int dim_b) {
    return DimSignature({dim_a, dim_b}, {"a", "b"});
}

DimSignature DimSignature::tripartite(int dim_a, int dim_b, int dim_c) {
    return DimSignature({dim_a, dim_b, dim_c}, {"a", "b", "c"});
}

int DimSignature::total_dim() const noexcept {
    return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

bool DimSignature::contains(std::string_view label) const noexcept {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t DimSignature::index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw ValidationError("unknown subsystem label '" + std::string(label) + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

DimSignature DimSignature::restricted(std::span<const std::string> keep) const {
    std::vector<bool> mask(size(), false);
    for (const auto& l : keep) mask[index_of(l)] = true;
    std::vector<int> d;
    std::vector<std::string> l;
    for (std::size_t k = 0; k < size(); ++k) {
        if (mask[k]) {
            d.push_back(dims_[k]);
            l.push_back(labels_[k]);
        }
    }
    return {std::move(d), std::move(l)};
}

DimSignature DimSignature::permuted(std::span<const std::string> order) const {
    if (order.size() != size()) throw ValidationError("permutation must list every subsystem once");
    std::vector<int> d;
    std::vector<std::string> l;
    for (const auto& name : order) {
        d.push_back(dims_[index_of(name)]);
        l.push_back(name);
    }
    return {std::move(d), std::move(l)};
}

DimSignature DimSignature::appended(int dim, std::string label) const {
    auto d = dims_;
    auto l = labels_;
    d.push_back(dim);
    l.push_back(std::move(label));
    return {std::move(d), std::move(l)};
}

double hermiticity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i; j < m.cols(); ++j) {
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return worst;
}

void require_hermitian(const ComplexMatrix& m, double tol, std::string_view what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw ValidationError(os.str());
    }
    const double defect = hermiticity_defect(m);
    if (!(defect <= tol)) {
        std::ostringstream os;
        os << what << ": not Hermitian, max |M - M^dagger| = " << defect << " exceeds " << tol;
        throw ValidationError(os.str());
    }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    return (m + m.adjoint()) * 0.5;
}

namespace {

// Cyclic Jacobi sweep over all (p, q) pairs. Each rotation is the product of a
// diagonal phase that makes a(p,q) real and a real Givens rotation zeroing it.
EigenDecomposition jacobi(ComplexMatrix a, bool want_vectors) {
    const Eigen::Index n = a.rows();
    ComplexMatrix v;
    if (want_vectors) v = ComplexMatrix::Identity(n, n);

    const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
    const double stop = std::numeric_limits<double>::epsilon() * scale * 1e-2;
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= stop) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= stop * 1e-3) continue;
                const Complex phase = a(p, q) / r; // e^{i alpha}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * r);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Complex sp = s * std::conj(phase); // s e^{-i alpha}

                // Columns: A <- A V with V = [[c, s], [-s e^{-ia}, c e^{-ia}]].
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - sp * akq;
                    a(k, q) = s * akp + c * std::conj(phase) * akq;
                }
                // Rows: A <- V^dagger A.
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - std::conj(sp) * aqk;
                    a(q, k) = s * apk + c * phase * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = app - t * r;
                a(q, q) = aqq + t * r;

                if (want_vectors) {
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const Complex vkp = v(k, p);
                        const Complex vkq = v(k, q);
                        v(k, p) = c * vkp - sp * vkq;
                        v(k, q) = s * vkp + c * std::conj(phase) * vkq;
                    }
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return a(x, x).real() < a(y, y).real();
    });

    EigenDecomposition out;
    out.values.resize(n);
    if (want_vectors) out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = a(order[k], order[k]).real();
        if (want_vectors) out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

std::vector<int> strides_of(const std::vector<int>& dims) {
    std::vector<int> s(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
    return s;
}

void require_side(const ComplexMatrix& rho, const DimSignature& sig) {
    if (rho.rows() != rho.cols() || rho.rows() != sig.total_dim()) {
        std::ostringstream os;
        os << "operator of shape " << rho.rows() << "x" << rho.cols()
           << " does not match signature total dimension " << sig.total_dim();
        throw ValidationError(os.str());
    }
}

} // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
    require_hermitian(m, kHermitianTol, "hermitian_eig");
    return jacobi(hermitian_part(m), true);
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
    require_hermitian(m, kHermitianTol, "hermitian_eigenvalues");
    return jacobi(hermitian_part(m), false).values;
}

ComplexMatrix hermitian_function(const ComplexMatrix& m,
                                 const std::function<double(double)>& f) {
    const auto eig = hermitian_eig(m);
    RealVector fv(eig.values.size());
    for (Eigen::Index k = 0; k < fv.size(); ++k) fv(k) = f(eig.values(k));
    return eig.vectors * fv.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const DimSignature& sig,
                            std::span<const std::string> keep) {
    require_side(rho, sig);
    if (keep.empty()) throw ValidationError("partial_trace: keep set must be non-empty");
    std::vector<bool> kept(sig.size(), false);
    for (const auto& l : keep) kept[sig.index_of(l)] = true;
    if (std::all_of(kept.begin(), kept.end(), [](bool b) { return b; })) return rho;

    const auto& dims = sig.dims();
    const int total = sig.total_dim();
    int kept_dim = 1;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (kept[k]) kept_dim *= dims[k];

    // Split every composite index into (kept part, traced part).
    std::vector<int> kept_idx(static_cast<std::size_t>(total));
    std::vector<int> traced_idx(static_cast<std::size_t>(total));
    const auto strides = strides_of(dims);
    for (int i = 0; i < total; ++i) {
        int ki = 0;
        int ti = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const int digit = (i / strides[k]) % dims[k];
            if (kept[k]) {
                ki = ki * dims[k] + digit;
            } else {
                ti = ti * dims[k] + digit;
            }
        }
        kept_idx[static_cast<std::size_t>(i)] = ki;
        traced_idx[static_cast<std::size_t>(i)] = ti;
    }

    ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
    for (int i = 0; i < total; ++i) {
        for (int j = 0; j < total; ++j) {
            if (traced_idx[static_cast<std::size_t>(i)] == traced_idx[static_cast<std::size_t>(j)]) {
                out(kept_idx[static_cast<std::size_t>(i)], kept_idx[static_cast<std::size_t>(j)]) +=
                    rho(i, j);
            }
        }
    }
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const DimSignature& sig,
                                std::string_view label) {
    require_side(rho, sig);
    const std::size_t k = sig.index_of(label);
    const int d = sig.dims()[k];
    const int stride = strides_of(sig.dims())[k];
    const int total = sig.total_dim();

    ComplexMatrix out(total, total);
    for (int i = 0; i < total; ++i) {
        const int di = (i / stride) % d;
        for (int j = 0; j < total; ++j) {
            const int dj = (j / stride) % d;
            const int ii = i + (dj - di) * stride;
            const int jj = j + (di - dj) * stride;
            out(ii, jj) = rho(i, j);
        }
    }
    return out;
}

namespace {

// new_to_old[n] = composite index in the original ordering of the basis
// vector that sits at position n after reordering.
std::vector<int> permutation_map(const DimSignature& sig, std::span<const std::string> order) {
    const DimSignature target = sig.permuted(order);
    std::vector<std::size_t> source_pos;
    for (const auto& l : order) source_pos.push_back(sig.index_of(l));
    {
        auto sorted = source_pos;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ValidationError("permutation lists a subsystem twice");
        }
    }
    const auto old_strides = strides_of(sig.dims());
    const auto new_strides = strides_of(target.dims());
    const int total = sig.total_dim();
    std::vector<int> map(static_cast<std::size_t>(total));
    for (int n = 0; n < total; ++n) {
        int old = 0;
        for (std::size_t k = 0; k < order.size(); ++k) {
            const int digit = (n / new_strides[k]) % target.dims()[k];
            old += digit * old_strides[source_pos[k]];
        }
        map[static_cast<std::size_t>(n)] = old;
    }
    return map;
}

} // namespace

ComplexMatrix permute_subsystems(const ComplexMatrix& rho, const DimSignature& sig,
                                 std::span<const std::string> order) {
    require_side(rho, sig);
    const auto map = permutation_map(sig, order);
    const auto total = static_cast<Eigen::Index>(map.size());
    ComplexMatrix out(total, total);
    for (Eigen::Index i = 0; i < total; ++i)
        for (Eigen::Index j = 0; j < total; ++j)
            out(i, j) = rho(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
    return out;
}

ComplexVector permute_subsystems(const ComplexVector& psi, const DimSignature& sig,
                                 std::span<const std::string> order) {
    if (psi.size() != sig.total_dim()) {
        throw ValidationError("vector length does not match signature total dimension");
    }
    const auto map = permutation_map(sig, order);
    ComplexVector out(psi.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) out(i) = psi(map[static_cast<std::size_t>(i)]);
    return out;
}

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace qcorr
