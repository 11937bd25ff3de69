#include <qcorr/entanglement.hpp>

#include <qcorr/entropies.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace qcorr {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kConcurrenceCutoff = 1e-13;

// Ensemble search used inside reports, where E^F only feeds an upper bound.
constexpr EnsembleBudget kReportEnsembleBudget{4, 2000, 2};

void require_two_qubits(const DensityMatrix& rho, const char* what) {
    const auto& d = rho.sig().dims();
    if (d.size() != 2 || d[0] != 2 || d[1] != 2) {
        throw ValidationError(std::string(what) + ": two-qubit (2x2) signature required");
    }
}

const std::string& label(const DensityMatrix& rho, std::size_t k) {
    return rho.sig().labels()[k];
}

} // namespace

double concurrence_2q(const DensityMatrix& rho) {
    require_two_qubits(rho, "concurrence_2q");
    // The lambdas are the singular values of tau_ij = <v_i| (Y x Y) |v_j*>
    // over the subnormalized eigenvectors v_i, which avoids square roots of
    // eigenvalue noise on rank-deficient input.
    const auto eig = hermitian_eig(rho.matrix());
    std::vector<ComplexVector> vs;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        if (eig.values(k) > kConcurrenceCutoff) vs.push_back(std::sqrt(eig.values(k)) * eig.vectors.col(k));
    }
    ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const auto r = static_cast<Eigen::Index>(vs.size());
    ComplexMatrix tau(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j) tau(i, j) = vs[static_cast<std::size_t>(i)].dot(yy * vs[static_cast<std::size_t>(j)].conjugate());
    std::array<double, 4> l{};
    const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(tau).singularValues();
    for (Eigen::Index k = 0; k < sv.size(); ++k) l[static_cast<std::size_t>(k)] = sv(k);
    std::stable_sort(l.begin(), l.end(), std::greater<>());
    return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

double eof_from_concurrence(double c) {
    c = std::clamp(c, 0.0, 1.0);
    return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double eof_2q(const DensityMatrix& rho) {
    return eof_from_concurrence(concurrence_2q(rho));
}

EnsembleOracleResult eof_ensemble_oracle(const DensityMatrix& rho, int ensemble_size,
                                         const EnsembleBudget& budget, std::span<const std::string> left) {
    const auto& sig = rho.sig();
    if (sig.total_dim() > 16) throw UnsupportedDimension("eof_ensemble_oracle: total dimension above 16");
    if (sig.size() < 2) throw ValidationError("eof_ensemble_oracle: needs a bipartition");

    std::vector<std::string> left_labels(left.begin(), left.end());
    if (left_labels.empty()) left_labels.push_back(sig.labels().front());
    for (const auto& l : left_labels) sig.index_of(l);
    std::vector<std::string> order = left_labels;
    for (const auto& l : sig.labels())
        if (std::find(left_labels.begin(), left_labels.end(), l) == left_labels.end()) order.push_back(l);
    if (order.size() == left_labels.size()) throw ValidationError("eof_ensemble_oracle: right side is empty");
    const int dl = sig.restricted(left_labels).total_dim();
    const int dr = sig.total_dim() / dl;

    const auto eig = hermitian_eig(rho.matrix());
    std::vector<ComplexVector> scaled; // sqrt(lambda_k) e_k, left-first ordering
    for (Eigen::Index k = eig.values.size(); k-- > 0;) {
        if (eig.values(k) > kRankCutoff) {
            const ComplexVector e = eig.vectors.col(k);
            scaled.push_back(std::sqrt(eig.values(k)) * permute_subsystems(e, sig, order));
        }
    }
    const int rank = static_cast<int>(scaled.size());
    const int m = ensemble_size;
    if (m < rank) {
        throw ValidationError("eof_ensemble_oracle: ensemble size " + std::to_string(m) + " below rank " +
                              std::to_string(rank));
    }
    if (m > rank * rank) {
        throw ValidationError("eof_ensemble_oracle: ensemble size above rank^2");
    }

    auto members = [&](std::span<const double> x) {
        const ComplexMatrix u = measurement_unitary(m, x).transpose();
        std::vector<ComplexVector> out(static_cast<std::size_t>(m), ComplexVector::Zero(sig.total_dim()));
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < rank; ++k) out[static_cast<std::size_t>(i)] += u(i, k) * scaled[static_cast<std::size_t>(k)];
        return out;
    };
    auto member_entropy = [&](const ComplexVector& v, double p) {
        const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(
            v.data(), dl, dr);
        const ComplexMatrix red = mat * mat.adjoint();
        return entropy_of_block(red, p);
    };
    const Objective objective = [&](std::span<const double> x) {
        double total = 0.0;
        for (const auto& v : members(x)) {
            const double p = v.squaredNorm();
            if (p > 1e-14) total += p * member_entropy(v, p);
        }
        return total;
    };

    const auto n = static_cast<std::size_t>(measurement_parameter_count(m));
    NelderMeadOptions nm;
    nm.max_iterations = budget.iterations;
    nm.simplex_tol = 1e-9;
    nm.initial_step = 0.4;
    nm.restarts = budget.restarts;

    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    OptimizerTrace trace;
    for (int s = 0; s < std::max(budget.starts, 1); ++s) {
        std::vector<double> x0(n, 0.0);
        if (s > 0) {
            const auto h = halton_point(static_cast<std::uint64_t>(s - 1), n);
            for (std::size_t k = 0; k < n; ++k) x0[k] = (k % 2 == 0 ? 0.5 : 2.0) * std::numbers::pi * h[k];
        }
        NelderMeadResult r = nelder_mead(objective, x0, nm);
        trace.refinement_iterations += r.iterations;
        ++trace.seeds_tried;
        if (r.value < best.value) {
            best = std::move(r);
            trace.best_start = s;
        }
    }
    trace.achieved_tolerance = best.simplex_size;

    EnsembleOracleResult out;
    out.value = best.value;
    out.trace = trace;
    out.decomposition.isometry_params = best.x;
    for (const auto& v : members(best.x)) {
        const double p = v.squaredNorm();
        if (p <= 1e-14) continue;
        out.decomposition.weights.push_back(p);
        // back to the original subsystem order
        const DimSignature ordered_sig = sig.permuted(order);
        out.decomposition.members.push_back(
            PureState::normalized(permute_subsystems(ComplexVector(v), ordered_sig, sig.labels()), sig));
    }
    return out;
}

KoashiWinterResult eof_via_koashi_winter(const PureState& psi_abc, const OptimizerBudget& budget) {
    const auto& sig = psi_abc.sig();
    if (sig.size() != 3) throw ValidationError("eof_via_koashi_winter: tripartite signature required");
    const auto& a = sig.labels()[0];
    const auto& b = sig.labels()[1];
    const auto& c = sig.labels()[2];
    if (sig.dims()[2] > kMaxMeasuredDim) {
        throw UnsupportedDimension("eof_via_koashi_winter: purifying subsystem dimension " +
                                   std::to_string(sig.dims()[2]) + " > 4");
    }
    const DensityMatrix rho = psi_abc.density();
    KoashiWinterResult out;
    out.discord_ac = discord(rho.reduced({a, c}), a, c, budget);
    out.s_cond_ab = conditional_entropy(rho, a, b);
    out.value = out.discord_ac.discord - out.s_cond_ab;
    return out;
}

double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    const double neg_entropy = -spectrum_entropy(hermitian_eigenvalues(hermitian_part(rho)));
    const auto eig = hermitian_eig(hermitian_part(sigma));
    const ComplexMatrix rt = eig.vectors.adjoint() * rho * eig.vectors;
    double cross = 0.0;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double w = rt(k, k).real();
        if (w <= 1e-14) continue;
        if (eig.values(k) <= 0.0) return std::numeric_limits<double>::infinity();
        cross -= w * std::log2(eig.values(k));
    }
    return std::max(neg_entropy + cross, 0.0);
}

namespace {

// Fully corrective conditional-gradient search over convex combinations of
// product pure states.
class SeparableSearch {
public:
    SeparableSearch(const ComplexMatrix& rho, int da, int db, double eps)
        : rho_(rho), da_(da), db_(db), d_(da * db), eps_(eps) {
        neg_entropy_ = -spectrum_entropy(hermitian_eigenvalues(rho_));
    }

    struct Atom {
        ComplexVector a;
        ComplexVector b;
        ComplexVector v;
        double w;
    };

    ComplexMatrix mix(const std::vector<Atom>& atoms) const {
        ComplexMatrix s = ComplexMatrix::Zero(d_, d_);
        for (const auto& at : atoms) s += at.w * at.v * at.v.adjoint();
        return s;
    }

    ComplexMatrix regularized(const ComplexMatrix& sigma) const {
        return (1.0 - eps_) * sigma + (eps_ / d_) * ComplexMatrix::Identity(d_, d_);
    }

    double value(const ComplexMatrix& sigma) const {
        const auto eig = hermitian_eig(regularized(sigma));
        const ComplexMatrix rt = eig.vectors.adjoint() * rho_ * eig.vectors;
        double cross = 0.0;
        for (Eigen::Index k = 0; k < d_; ++k) cross -= rt(k, k).real() * std::log2(std::max(eig.values(k), 1e-300));
        return neg_entropy_ + cross;
    }

    // Derivative of -Tr rho log2 sigma_reg with respect to sigma.
    ComplexMatrix gradient(const ComplexMatrix& sigma) const {
        const auto eig = hermitian_eig(regularized(sigma));
        const ComplexMatrix rt = eig.vectors.adjoint() * rho_ * eig.vectors;
        ComplexMatrix g(d_, d_);
        for (int i = 0; i < d_; ++i) {
            for (int j = 0; j < d_; ++j) {
                const double li = std::max(eig.values(i), 1e-300);
                const double lj = std::max(eig.values(j), 1e-300);
                const double div = std::abs(li - lj) > 1e-12 * std::max(li, lj)
                                       ? (std::log(li) - std::log(lj)) / (li - lj)
                                       : 1.0 / li;
                g(i, j) = rt(i, j) * div;
            }
        }
        return -(1.0 - eps_) / kLn2 * (eig.vectors * g * eig.vectors.adjoint());
    }

    // Product vector minimizing <ab|G|ab> by alternating eigenvector updates.
    Atom best_product(const ComplexMatrix& g) const {
        std::vector<ComplexVector> seeds;
        for (int k = 0; k < db_; ++k) seeds.push_back(ComplexVector::Unit(db_, k));
        for (int k = 1; k < db_; ++k) {
            ComplexVector v = ComplexVector::Zero(db_);
            v(0) = 1.0 / std::numbers::sqrt2;
            v(k) = 1.0 / std::numbers::sqrt2;
            seeds.push_back(v);
            v(k) = Complex(0.0, 1.0 / std::numbers::sqrt2);
            seeds.push_back(v);
        }
        {
            ComplexMatrix gb = ComplexMatrix::Zero(db_, db_);
            for (int i = 0; i < da_; ++i) gb += g.block(i * db_, i * db_, db_, db_);
            const auto e = hermitian_eig(hermitian_part(gb));
            for (int k = 0; k < db_; ++k) seeds.push_back(e.vectors.col(k));
        }

        Atom best{ComplexVector(), ComplexVector(), ComplexVector(), std::numeric_limits<double>::infinity()};
        for (ComplexVector b : seeds) {
            ComplexVector a(da_);
            double val = std::numeric_limits<double>::infinity();
            for (int it = 0; it < 40; ++it) {
                // a-step: A = (I (x) b)^dagger G (I (x) b)
                ComplexMatrix am(da_, da_);
                for (int i = 0; i < da_; ++i)
                    for (int j = 0; j < da_; ++j)
                        am(i, j) = b.dot(g.block(i * db_, j * db_, db_, db_) * b);
                const auto ea = hermitian_eig(hermitian_part(am));
                a = ea.vectors.col(0);
                // b-step: B = sum_ij conj(a_i) a_j G_ij
                ComplexMatrix bm = ComplexMatrix::Zero(db_, db_);
                for (int i = 0; i < da_; ++i)
                    for (int j = 0; j < da_; ++j) bm += std::conj(a(i)) * a(j) * g.block(i * db_, j * db_, db_, db_);
                const auto eb = hermitian_eig(hermitian_part(bm));
                b = eb.vectors.col(0);
                const double next = eb.values(0);
                if (std::abs(val - next) <= 1e-15 * std::max(1.0, std::abs(next))) {
                    val = next;
                    break;
                }
                val = next;
            }
            if (val < best.w) best = Atom{a, b, tensor_product(a, b), val};
        }
        return best;
    }

    // Minimizes phi on [0, hi] for convex phi by golden-section search.
    template <class F>
    static double line_search(F&& phi, double hi, double& best_val) {
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = 0.0;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = phi(x1), f2 = phi(x2);
        for (int it = 0; it < 48 && hi - lo > 1e-13; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = phi(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = phi(x2);
            }
        }
        double x = f1 < f2 ? x1 : x2;
        best_val = std::min(f1, f2);
        const double f0 = phi(0.0);
        if (f0 <= best_val) {
            best_val = f0;
            x = 0.0;
        }
        return x;
    }

    struct Outcome {
        std::vector<Atom> atoms;
        double value;
        int iterations;
    };

    // Atoms as unnormalized (a, b) pairs: sigma = sum |ab><ab| / sum |a|^2 |b|^2.
    std::vector<double> pack(const std::vector<Atom>& atoms) const {
        std::vector<double> x;
        for (const auto& at : atoms) {
            const double s = std::sqrt(at.w);
            for (int i = 0; i < da_; ++i) {
                x.push_back(s * at.a(i).real());
                x.push_back(s * at.a(i).imag());
            }
            for (int j = 0; j < db_; ++j) {
                x.push_back(at.b(j).real());
                x.push_back(at.b(j).imag());
            }
        }
        return x;
    }

    std::vector<Atom> unpack(std::span<const double> x) const {
        const std::size_t stride = static_cast<std::size_t>(2 * (da_ + db_));
        std::vector<Atom> atoms;
        double total = 0.0;
        for (std::size_t off = 0; off + stride <= x.size(); off += stride) {
            ComplexVector a(da_), b(db_);
            for (int i = 0; i < da_; ++i) a(i) = Complex(x[off + 2 * i], x[off + 2 * i + 1]);
            const std::size_t ob = off + static_cast<std::size_t>(2 * da_);
            for (int j = 0; j < db_; ++j) b(j) = Complex(x[ob + 2 * j], x[ob + 2 * j + 1]);
            const double w = a.squaredNorm() * b.squaredNorm();
            total += w;
            atoms.push_back(Atom{a, b, tensor_product(a, b), w});
        }
        for (auto& at : atoms) {
            at.w /= total;
            if (at.a.norm() > 0.0 && at.b.norm() > 0.0) {
                at.a.normalize();
                at.b.normalize();
                at.v.normalize();
            }
        }
        return atoms;
    }

    double value_and_gradient(std::span<const double> x, std::span<double> grad) const {
        const std::size_t stride = static_cast<std::size_t>(2 * (da_ + db_));
        const std::size_t n = x.size() / stride;
        std::vector<ComplexVector> as(n), bs(n), vs(n);
        ComplexMatrix s = ComplexMatrix::Zero(d_, d_);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t off = k * stride;
            as[k].resize(da_);
            bs[k].resize(db_);
            for (int i = 0; i < da_; ++i) as[k](i) = Complex(x[off + 2 * i], x[off + 2 * i + 1]);
            const std::size_t ob = off + static_cast<std::size_t>(2 * da_);
            for (int j = 0; j < db_; ++j) bs[k](j) = Complex(x[ob + 2 * j], x[ob + 2 * j + 1]);
            vs[k] = tensor_product(as[k], bs[k]);
            s += vs[k] * vs[k].adjoint();
        }
        const double t = s.trace().real();
        if (!(t > 1e-300)) {
            std::fill(grad.begin(), grad.end(), 0.0);
            return std::numeric_limits<double>::infinity();
        }
        const ComplexMatrix sigma = s / t;
        const double f = value(sigma);
        const ComplexMatrix g = gradient(sigma);
        const double c = (g * sigma).trace().real();
        for (std::size_t k = 0; k < n; ++k) {
            const ComplexVector gv = (2.0 / t) * (g * vs[k] - c * vs[k]);
            const std::size_t off = k * stride;
            for (int i = 0; i < da_; ++i) {
                Complex ga = 0.0;
                for (int j = 0; j < db_; ++j) ga += gv(i * db_ + j) * std::conj(bs[k](j));
                grad[off + 2 * i] = ga.real();
                grad[off + 2 * i + 1] = ga.imag();
            }
            const std::size_t ob = off + static_cast<std::size_t>(2 * da_);
            for (int j = 0; j < db_; ++j) {
                Complex gb = 0.0;
                for (int i = 0; i < da_; ++i) gb += gv(i * db_ + j) * std::conj(as[k](i));
                grad[ob + 2 * j] = gb.real();
                grad[ob + 2 * j + 1] = gb.imag();
            }
        }
        return f;
    }

    // Alternates conditional-gradient insertions of the best product state
    // with joint quasi-Newton refinement of every term.
    Outcome run(std::vector<Atom> atoms, const ReeBudget& budget) const {
        ComplexMatrix sigma = mix(atoms);
        double f = value(sigma);
        int iterations = 0;
        LbfgsOptions lb;
        lb.max_iterations = budget.max_iterations;
        lb.relative_improvement = budget.relative_improvement;
        lb.window = budget.window;
        const GradientObjective objective = [this](std::span<const double> x, std::span<double> g) {
            return value_and_gradient(x, g);
        };

        for (int round = 0; round < 8; ++round) {
            const ComplexMatrix g = gradient(sigma);
            Atom cand = best_product(g);
            if ((g * sigma).trace().real() - cand.w <= 1e-13) break; // duality gap closed

            const ComplexMatrix p = cand.v * cand.v.adjoint();
            double fnew = f;
            const double gamma = line_search([&](double t) { return value((1.0 - t) * sigma + t * p); }, 1.0, fnew);
            if (gamma > 0.0 && fnew < f) {
                for (auto& at : atoms) at.w *= 1.0 - gamma;
                cand.w = gamma;
                atoms.push_back(cand);
            } else {
                cand.w = 1e-6;
                atoms.push_back(cand);
            }
            while (static_cast<int>(atoms.size()) > budget.max_terms) {
                auto light = std::min_element(atoms.begin(), atoms.end(),
                                              [](const Atom& x, const Atom& y) { return x.w < y.w; });
                atoms.erase(light);
            }

            const LbfgsResult r = lbfgs(objective, pack(atoms), lb);
            iterations += r.iterations + 1;
            std::vector<Atom> refined = unpack(r.x);
            std::erase_if(refined, [](const Atom& at) { return at.w <= 1e-15; });
            const ComplexMatrix next = mix(refined);
            const double fnext = value(next);
            const double previous = f;
            if (fnext <= f) {
                atoms = std::move(refined);
                sigma = next;
                f = fnext;
            }
            if (previous - f <= budget.relative_improvement * std::max(f, 1e-300)) break;
        }
        return {std::move(atoms), f, iterations};
    }

    // Dephasing of rho in a product basis.
    std::vector<Atom> product_basis_start(const ComplexMatrix& ua, const ComplexMatrix& ub) const {
        std::vector<Atom> atoms;
        for (int i = 0; i < da_; ++i) {
            for (int j = 0; j < db_; ++j) {
                ComplexVector v = tensor_product(ComplexVector(ua.col(i)), ComplexVector(ub.col(j)));
                const double w = v.dot(rho_ * v).real();
                if (w > 1e-15) atoms.push_back(Atom{ua.col(i), ub.col(j), v, w});
            }
        }
        return atoms;
    }

    // Dephasing of rho on one side in basis u, with the conditioned states of
    // the other side split into eigenvectors.
    std::vector<Atom> one_side_dephasing_start(const ComplexMatrix& u, bool on_b) const {
        std::vector<Atom> atoms;
        const int dm = on_b ? db_ : da_;
        const int dt = on_b ? da_ : db_;
        for (int k = 0; k < dm; ++k) {
            ComplexMatrix cond = ComplexMatrix::Zero(dt, dt);
            for (int i = 0; i < dt; ++i)
                for (int j = 0; j < dt; ++j)
                    for (int x = 0; x < dm; ++x)
                        for (int y = 0; y < dm; ++y) {
                            const int r = on_b ? i * db_ + x : x * db_ + i;
                            const int c = on_b ? j * db_ + y : y * db_ + j;
                            cond(i, j) += std::conj(u(x, k)) * rho_(r, c) * u(y, k);
                        }
            const auto e = hermitian_eig(hermitian_part(cond));
            for (int m = 0; m < dt; ++m) {
                const double w = e.values(m);
                if (w <= 1e-15) continue;
                const ComplexVector t = e.vectors.col(m);
                const ComplexVector s = u.col(k);
                Atom at{on_b ? t : s, on_b ? s : t, ComplexVector(), w};
                at.v = tensor_product(at.a, at.b);
                atoms.push_back(std::move(at));
            }
        }
        return atoms;
    }

    std::vector<Atom> marginal_product_start(const ComplexMatrix& ea, const RealVector& la, const ComplexMatrix& eb,
                                             const RealVector& lb) const {
        std::vector<Atom> atoms;
        for (int i = 0; i < da_; ++i)
            for (int j = 0; j < db_; ++j) {
                const double w = std::max(la(i), 0.0) * std::max(lb(j), 0.0);
                if (w > 1e-15) {
                    atoms.push_back(Atom{ea.col(i), eb.col(j), tensor_product(ComplexVector(ea.col(i)),
                                                                              ComplexVector(eb.col(j))), w});
                }
            }
        return atoms;
    }

private:
    ComplexMatrix rho_;
    int da_, db_, d_;
    double eps_;
    double neg_entropy_ = 0.0;
};

} // namespace

ReeResult ree_estimate(const DensityMatrix& rho, const ReeBudget& budget) {
    const auto& sig = rho.sig();
    if (sig.size() != 2) throw ValidationError("ree_estimate: bipartite signature required");
    const int da = sig.dims()[0];
    const int db = sig.dims()[1];
    if (std::min(da, db) != 2 || std::max(da, db) > 3) {
        throw UnsupportedDimension("ree_estimate: only 2x2 and 2x3 signatures are supported");
    }
    if (budget.max_terms < 1 || budget.restarts < 1) throw ValidationError("ree_estimate: empty budget");

    const PptVerdict ppt = is_ppt(rho, sig.labels()[1]);
    if (ppt.ppt) {
        // PPT decides separability here, so rho is its own closest separable state.
        return ReeResult{0.0, rho, {}, true, 0};
    }

    const SeparableSearch search(rho.matrix(), da, db, budget.regularization);
    const auto ea = hermitian_eig(rho.reduced({sig.labels()[0]}).matrix());
    const auto eb = hermitian_eig(rho.reduced({sig.labels()[1]}).matrix());
    const ComplexMatrix ia = ComplexMatrix::Identity(da, da);
    const ComplexMatrix ib = ComplexMatrix::Identity(db, db);

    std::vector<std::vector<SeparableSearch::Atom>> starts{
        search.one_side_dephasing_start(eb.vectors, true),
        search.one_side_dephasing_start(ea.vectors, false),
        search.one_side_dephasing_start(ib, true),
        search.one_side_dephasing_start(ia, false),
        search.product_basis_start(ea.vectors, eb.vectors),
        search.marginal_product_start(ea.vectors, ea.values, eb.vectors, eb.values),
    };
    // Refine the most promising starting points.
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t k = 0; k < starts.size(); ++k) ranked.emplace_back(search.value(search.mix(starts[k])), k);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    ranked.resize(std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(budget.restarts)));

    std::optional<SeparableSearch::Outcome> best;
    int iterations = 0;
    for (const auto& [v, k] : ranked) {
        auto out = search.run(std::move(starts[k]), budget);
        iterations += out.iterations;
        if (!best || out.value < best->value) best = std::move(out);
    }

    std::vector<ProductTerm> terms;
    for (const auto& at : best->atoms) terms.push_back(ProductTerm{at.w, at.a, at.b});
    ComplexMatrix witness = search.mix(best->atoms);
    witness /= witness.trace().real();
    double value = relative_entropy(rho.matrix(), witness);
    const ComplexMatrix regularized = search.regularized(witness);
    const double value_reg = relative_entropy(rho.matrix(), regularized);
    if (!(value <= value_reg)) {
        witness = regularized;
        value = value_reg;
    }
    return ReeResult{value, DensityMatrix(witness, sig), std::move(terms), false, iterations};
}

std::string to_string(Lemma1Class c) {
    switch (c) {
    case Lemma1Class::Pure: return "pure";
    case Lemma1Class::Separable: return "separable";
    case Lemma1Class::PseudoPure: return "pseudo-pure";
    case Lemma1Class::MixedEntangled: return "mixed-entangled";
    }
    return "unknown";
}

namespace {

// Zero discord of either purification marginal with the ancilla measured.
bool purification_marginal_zero_discord(const DensityMatrix& rho) {
    const PureState psi = purify(rho, std::string("__purifier"));
    const DensityMatrix full = psi.density();
    for (std::size_t k = 0; k < 2; ++k) {
        const DensityMatrix marginal = full.reduced({label(rho, k), std::string("__purifier")});
        if (zero_discord_check(marginal, "__purifier").zero_discord) return true;
    }
    return false;
}

} // namespace

Lemma1Verdict lemma1_check(const DensityMatrix& rho) {
    require_two_qubits(rho, "lemma1_check");
    Lemma1Verdict v;
    v.eof = eof_2q(rho);
    v.coherent_information = coherent_information(rho, label(rho, 0), label(rho, 1));
    v.gap = v.eof - v.coherent_information;

    if (rho.rank() == 1) {
        v.classification = Lemma1Class::Pure;
    } else if (is_ppt(rho, label(rho, 1)).ppt) {
        v.classification = Lemma1Class::Separable;
    } else if (purification_marginal_zero_discord(rho)) {
        v.classification = Lemma1Class::PseudoPure;
    } else {
        v.classification = Lemma1Class::MixedEntangled;
        v.applicable = true;
        v.holds = v.gap > 0.0;
    }
    return v;
}

std::string to_string(Provenance p) {
    switch (p) {
    case Provenance::ExactByTheorem: return "exact-by-theorem";
    case Provenance::ExactByAdditivity: return "exact-by-additivity";
    case Provenance::UpperBound: return "upper-bound";
    case Provenance::LowerBound: return "lower-bound";
    case Provenance::Interval: return "interval";
    }
    return "unknown";
}

EntanglementReport entanglement_report(const DensityMatrix& rho_ab, const ReportOptions& options) {
    const auto& sig = rho_ab.sig();
    if (sig.size() != 2) throw ValidationError("entanglement_report: bipartite signature required");
    const auto& a = sig.labels()[0];
    const auto& b = sig.labels()[1];

    EntanglementReport r;
    const auto entropies = entropy_report(rho_ab, a, b);
    r.coherent_information = entropies.coherent_information;
    r.s_cond_ab = entropies.s_conditional.at({a, b});

    if (sig.dims()[0] == 2 && sig.dims()[1] == 2) {
        r.concurrence = concurrence_2q(rho_ab);
        r.eof = eof_from_concurrence(*r.concurrence);
        r.eof_closed_form = true;
    } else {
        r.eof = eof_ensemble_oracle(rho_ab, rho_ab.rank(), kReportEnsembleBudget).value;
    }

    r.ree_lower = r.coherent_information;
    if (options.with_ree) r.ree_upper = ree_estimate(rho_ab, options.ree_budget).ree_upper;
    const double upper_r = r.ree_upper.value_or(r.eof);

    r.e_cost = BoundedValue{r.coherent_information, r.eof, Provenance::Interval};
    r.e_distillable = BoundedValue{r.coherent_information, upper_r, Provenance::LowerBound};
    r.key_rate = BoundedValue{r.coherent_information, upper_r, Provenance::LowerBound};
    if (options.with_discord) {
        r.discord_ab_numeric = discord(rho_ab, a, b, options.discord_budget).discord;
    }
    return r;
}

EntanglementReport theorem2_report(const std::variant<OneMcSpec, ExampleFamilyParams>& source,
                                   const ReportOptions& options) {
    const OneMcSpec spec = std::holds_alternative<OneMcSpec>(source)
                               ? std::get<OneMcSpec>(source)
                               : example_family_spec(std::get<ExampleFamilyParams>(source));
    const OneMcState mc = make_one_mc(spec);
    const DensityMatrix full = mc.psi.density();
    const DensityMatrix& rho_ab = mc.rho_ab;
    const DensityMatrix rho_ac = full.reduced({"a", "c"});

    EntanglementReport r;
    r.degenerate_a_states = mc.degenerate_a_states;
    const auto entropies = entropy_report(rho_ab, "a", "b");
    r.coherent_information = entropies.coherent_information;
    r.s_cond_ab = entropies.s_conditional.at({"a", "b"});
    r.ppt_ac = is_ppt(rho_ac, "c");
    const bool certified = r.ppt_ac->ppt && r.ppt_ac->decides_separability;
    r.conditional = !certified;

    const bool two_qubits = rho_ab.sig().dims() == std::vector<int>{2, 2};
    if (two_qubits) {
        r.concurrence = concurrence_2q(rho_ab);
        r.eof = eof_from_concurrence(*r.concurrence);
        r.eof_closed_form = true;
    } else if (rho_ac.sig().dim_of("c") <= kMaxMeasuredDim) {
        // E^F = S(a) - J(a|c) for the purification; J is a lower bound.
        const double sa = von_neumann_entropy(rho_ab.reduced({"a"}));
        r.eof = sa - classical_correlation(rho_ac, "a", "c", options.discord_budget).classical_correlation;
    } else {
        r.eof = eof_ensemble_oracle(rho_ab, rho_ab.rank(), kReportEnsembleBudget).value;
    }

    if (options.with_discord && rho_ab.sig().dim_of("b") <= kMaxMeasuredDim) {
        r.discord_ab_numeric = discord(rho_ab, "a", "b", options.discord_budget).discord;
        r.discord_deviation = *r.discord_ab_numeric + r.s_cond_ab;
    }
    const bool ree_in_scope = std::min(rho_ab.sig().dims()[0], rho_ab.sig().dims()[1]) == 2 &&
                              std::max(rho_ab.sig().dims()[0], rho_ab.sig().dims()[1]) <= 3;
    if (options.with_ree && ree_in_scope) {
        r.ree_upper = ree_estimate(rho_ab, options.ree_budget).ree_upper;
        r.ree_deviation = *r.ree_upper + r.s_cond_ab;
    }

    if (certified) {
        const double ed = -r.s_cond_ab;
        r.e_distillable = BoundedValue::exact(ed, Provenance::ExactByTheorem);
        r.key_rate = BoundedValue::exact(ed, Provenance::ExactByTheorem);
        r.ree_lower = ed;
        r.e_cost = BoundedValue::exact(r.eof, Provenance::ExactByAdditivity);
        r.delta_loss = r.e_cost.upper - r.e_distillable.upper;
    } else {
        const double upper_r = r.ree_upper.value_or(r.eof);
        r.ree_lower = r.coherent_information;
        r.e_cost = BoundedValue{r.coherent_information, r.eof, Provenance::Interval};
        r.e_distillable = BoundedValue{r.coherent_information, upper_r, Provenance::LowerBound};
        r.key_rate = BoundedValue{r.coherent_information, upper_r, Provenance::LowerBound};
    }
    return r;
}

std::vector<ChainViolation> audit_chain(const EntanglementReport& r, double slack, double exact_slack) {
    std::vector<ChainViolation> out;
    auto need = [&](const char* relation, double lhs, double rhs, double tol) {
        if (lhs + tol < rhs) out.push_back({relation, rhs - lhs});
    };
    need("E^F >= E^C", r.eof, r.e_cost.upper, slack);
    need("E^C >= E^D", r.e_cost.upper, r.e_distillable.lower, slack);
    need("E^D >= I_C", r.e_distillable.upper, r.coherent_information, slack);
    if (r.ree_upper) {
        need("E^F >= R", r.eof, *r.ree_upper, slack);
        need("R upper >= R lower", *r.ree_upper, r.ree_lower, slack);
        need("R >= E^D", *r.ree_upper, r.e_distillable.lower, r.e_distillable.is_exact() ? exact_slack : slack);
        need("R >= K", *r.ree_upper, r.key_rate.lower, r.key_rate.is_exact() ? exact_slack : slack);
    }
    need("K >= E^D", r.key_rate.upper, r.e_distillable.lower, slack);
    if (r.e_cost.is_exact() && r.e_distillable.is_exact()) {
        if (!r.delta_loss) {
            out.push_back({"delta_loss present when E^C and E^D are exact", 1.0});
        } else {
            const double expect = r.e_cost.upper - r.e_distillable.upper;
            if (std::abs(*r.delta_loss - expect) > slack) {
                out.push_back({"delta_loss = E^C - E^D", std::abs(*r.delta_loss - expect)});
            }
            need("delta_loss >= 0", *r.delta_loss, 0.0, slack);
        }
    }
    return out;
}

std::string to_string(IrreversibilityVerdict v) {
    switch (v) {
    case IrreversibilityVerdict::PureReversible: return "pure: reversible";
    case IrreversibilityVerdict::Separable: return "separable: no entanglement";
    case IrreversibilityVerdict::PseudoPure: return "pseudo-pure: no irreversibility claim";
    case IrreversibilityVerdict::IrreversibleByTheorem2: return "irreversible by Theorem 2";
    case IrreversibilityVerdict::NoCertificate: return "no certificate";
    }
    return "unknown";
}

IrreversibilityConditions irreversibility_conditions(const DensityMatrix& rho) {
    require_two_qubits(rho, "irreversibility_conditions");
    IrreversibilityConditions c;
    if (rho.rank() == 1) {
        c.pure = true;
        c.verdict = IrreversibilityVerdict::PureReversible;
        return c;
    }
    if (is_ppt(rho, label(rho, 1)).ppt) {
        c.separable = true;
        c.verdict = IrreversibilityVerdict::Separable;
        return c;
    }
    if (purification_marginal_zero_discord(rho)) {
        c.pseudo_pure = true;
        c.verdict = IrreversibilityVerdict::PseudoPure;
        return c;
    }

    const PureState psi = purify(rho, std::string("__purifier"));
    const DensityMatrix full = psi.density();
    for (std::size_t k = 0; k < 2 && !c.additivity_certificate; ++k) {
        const DensityMatrix marginal = full.reduced({label(rho, k), std::string("__purifier")});
        const PptVerdict v = is_ppt(marginal, "__purifier");
        if (v.ppt && v.decides_separability) {
            c.additivity_certificate = true;
            c.certificate_route = k == 0 ? "ac" : "bc";
        }
    }
    c.coherent_information_single_copy = c.additivity_certificate;
    c.verdict = c.additivity_certificate ? IrreversibilityVerdict::IrreversibleByTheorem2
                                         : IrreversibilityVerdict::NoCertificate;
    return c;
}

} // namespace qcorr
