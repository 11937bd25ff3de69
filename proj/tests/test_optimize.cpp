#include <doctest.h>

#include <qcorr/optimize.hpp>

#include <cmath>

using namespace qcorr;

namespace {

double rosenbrock(std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

} // namespace

TEST_CASE("nelder_mead finds simple minima") {
    NelderMeadOptions o;
    o.max_iterations = 2000;
    o.simplex_tol = 1e-10;
    const auto r = nelder_mead(rosenbrock, {-1.2, 1.0}, o);
    CHECK(std::abs(r.x[0] - 1.0) <= 1e-6);
    CHECK(std::abs(r.x[1] - 1.0) <= 1e-6);
    CHECK(r.simplex_size <= 1e-10);

    const auto q = nelder_mead([](std::span<const double> x) { return std::pow(x[0] - 3.0, 2) + 1.0; }, {0.0}, o);
    CHECK(std::abs(q.value - 1.0) <= 1e-12);
}

TEST_CASE("nelder_mead best value is non-increasing in the iteration cap") {
    double previous = INFINITY;
    for (int it : {0, 1, 5, 20, 80, 320}) {
        NelderMeadOptions o;
        o.max_iterations = it;
        const double v = nelder_mead(rosenbrock, {-1.2, 1.0}, o).value;
        CHECK(v <= previous);
        previous = v;
    }
}

TEST_CASE("nelder_mead with no parameters evaluates once") {
    int calls = 0;
    const auto r = nelder_mead([&](std::span<const double>) { ++calls; return 7.0; }, {}, {});
    CHECK(r.value == 7.0);
    CHECK(calls == 1);
}

TEST_CASE("lbfgs on a quadratic and on Rosenbrock") {
    const GradientObjective quad = [](std::span<const double> x, std::span<double> g) {
        double f = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double w = 1.0 + k;
            f += w * (x[k] - 1.0) * (x[k] - 1.0);
            g[k] = 2.0 * w * (x[k] - 1.0);
        }
        return f;
    };
    const auto r = lbfgs(quad, std::vector<double>(6, -3.0), {});
    CHECK(r.value <= 1e-20);

    const GradientObjective rb = [](std::span<const double> x, std::span<double> g) {
        g[0] = -400.0 * x[0] * (x[1] - x[0] * x[0]) - 2.0 * (1.0 - x[0]);
        g[1] = 200.0 * (x[1] - x[0] * x[0]);
        return rosenbrock(x);
    };
    LbfgsOptions o;
    o.max_iterations = 1000;
    o.relative_improvement = 0.0;
    const auto s = lbfgs(rb, {-1.2, 1.0}, o);
    CHECK(std::abs(s.x[0] - 1.0) <= 1e-6);
}

TEST_CASE("halton sequence") {
    CHECK(radical_inverse(1, 2) == 0.5);
    CHECK(radical_inverse(3, 2) == 0.75);
    CHECK(std::abs(radical_inverse(1, 3) - 1.0 / 3.0) <= 1e-16);
    const auto p = halton_point(0, 3);
    CHECK(p == std::vector<double>{0.5, 1.0 / 3.0, 0.2});
    // beyond the first few primes
    const auto wide = halton_point(4, 40);
    CHECK(wide.size() == 40);
    for (double v : wide) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    // nested prefixes: point k does not depend on how many are drawn
    CHECK(halton_point(7, 5) == halton_point(7, 5));
}
