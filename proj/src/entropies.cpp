#include <qcorr/entropies.hpp>

#include <algorithm>
#include <cmath>

namespace qcorr {

namespace {

double plogp(double p) {
    return p > 0.0 ? -p * std::log2(p) : 0.0;
}

DensityMatrix pair_marginal(const DensityMatrix& rho, std::string_view x, std::string_view y) {
    if (x == y) throw ValidationError("entropy: the two labels must be distinct");
    rho.sig().index_of(x);
    rho.sig().index_of(y);
    const std::vector<std::string> keep{std::string(x), std::string(y)};
    return rho.reduced(keep);
}

double marginal_entropy(const DensityMatrix& rho, std::string_view label) {
    const std::vector<std::string> keep{std::string(label)};
    return von_neumann_entropy(rho.reduced(keep));
}

} // namespace

double binary_entropy(double p) {
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
        throw ValidationError("binary_entropy: probability outside [0, 1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    return plogp(p) + plogp(1.0 - p);
}

double spectrum_entropy(const RealVector& eigenvalues) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
        const double l = eigenvalues(k);
        if (l > 1e-12) s += plogp(l);
    }
    return std::max(s, 0.0);
}

double entropy_of_block(const ComplexMatrix& block, double trace) {
    if (block.rows() == 1) return 0.0;
    if (block.rows() == 2) {
        // closed form for 2x2: eigenvalues (1 +- sqrt(1 - 4 det)) / 2 of the normalized block
        const double a = block(0, 0).real() / trace;
        const double d = block(1, 1).real() / trace;
        const double off = std::norm(block(0, 1)) / (trace * trace);
        const double disc = std::sqrt(std::max(0.0, (a - d) * (a - d) + 4.0 * off));
        const double l1 = std::clamp(0.5 * (a + d + disc), 0.0, 1.0);
        return plogp(l1) + plogp(1.0 - l1);
    }
    return spectrum_entropy(hermitian_eigenvalues(hermitian_part(block / trace)));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    return spectrum_entropy(rho.eigenvalues());
}

double conditional_entropy(const DensityMatrix& rho, std::string_view target, std::string_view given) {
    const DensityMatrix pair = pair_marginal(rho, target, given);
    return von_neumann_entropy(pair) - marginal_entropy(pair, given);
}

double mutual_information(const DensityMatrix& rho, std::string_view x, std::string_view y) {
    const DensityMatrix pair = pair_marginal(rho, x, y);
    return marginal_entropy(pair, x) + marginal_entropy(pair, y) - von_neumann_entropy(pair);
}

double coherent_information(const DensityMatrix& rho, std::string_view a, std::string_view b) {
    const auto r = entropy_report(rho, a, b);
    return r.coherent_information;
}

EntropyReport entropy_report(const DensityMatrix& rho, std::string_view a, std::string_view b) {
    const DensityMatrix pair = pair_marginal(rho, a, b);
    EntropyReport r;
    r.s_joint = von_neumann_entropy(pair);
    const double sa = marginal_entropy(pair, a);
    const double sb = marginal_entropy(pair, b);
    r.s_marginals[std::string(a)] = sa;
    r.s_marginals[std::string(b)] = sb;
    const double s_ab = r.s_joint - sb;
    const double s_ba = r.s_joint - sa;
    r.s_conditional[{std::string(a), std::string(b)}] = s_ab;
    r.s_conditional[{std::string(b), std::string(a)}] = s_ba;
    r.mutual_information = sa + sb - r.s_joint;
    r.coherent_information = std::max({0.0, -s_ab, -s_ba});
    return r;
}

} // namespace qcorr
