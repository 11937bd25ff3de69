#pragma once

#include <qcorr/linalg.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace qcorr::test {

inline std::vector<std::string> labels(std::initializer_list<const char*> l) {
    return {l.begin(), l.end()};
}

inline ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    return 0.5 * (m + m.adjoint());
}

inline double h2(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline ComplexVector ket(std::initializer_list<Complex> v) {
    ComplexVector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (const auto& x : v) out(k++) = x;
    return out;
}

} // namespace qcorr::test
