#include <qcorr/optimize.hpp>

#include <qcorr/errors.hpp>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>

namespace qcorr {

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

double spread(const std::vector<Vertex>& simplex) {
    double worst = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
        double d = 0.0;
        for (std::size_t k = 0; k < simplex[0].x.size(); ++k) {
            d = std::max(d, std::abs(simplex[i].x[k] - simplex[0].x[k]));
        }
        worst = std::max(worst, d);
    }
    return worst;
}

std::vector<Vertex> build_simplex(const Objective& f, const std::vector<double>& x0, double step) {
    std::vector<Vertex> s;
    s.push_back({x0, f(x0)});
    for (std::size_t k = 0; k < x0.size(); ++k) {
        auto x = x0;
        x[k] += step;
        s.push_back({x, f(x)});
    }
    return s;
}

} // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0) {
        NelderMeadResult r;
        r.value = f(x0);
        r.x = std::move(x0);
        return r;
    }
    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    auto simplex = build_simplex(f, x0, options.initial_step);
    int iterations = 0;
    int restarts_left = options.restarts;
    double value_at_restart = std::numeric_limits<double>::infinity();

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    std::vector<double> centroid(n), trial(n);

    while (true) {
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
        if (iterations >= options.max_iterations) break;
        if (spread(simplex) <= options.simplex_tol) {
            if (restarts_left > 0 && simplex[0].f < value_at_restart) {
                --restarts_left;
                value_at_restart = simplex[0].f;
                simplex = build_simplex(f, simplex[0].x, options.initial_step * 0.1);
                continue;
            }
            break;
        }
        ++iterations;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i].x[k] / static_cast<double>(n);

        auto point = [&](double coeff) {
            for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + coeff * (simplex[n].x[k] - centroid[k]);
            return trial;
        };

        auto xr = point(-alpha);
        const double fr = f(xr);
        if (fr < simplex[0].f) {
            auto xe = point(-gamma);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[n] = {xe, fe};
            } else {
                simplex[n] = {xr, fr};
            }
        } else if (fr < simplex[n - 1].f) {
            simplex[n] = {xr, fr};
        } else {
            const bool outside = fr < simplex[n].f;
            auto xc = point(outside ? -rho : rho);
            const double fc = f(xc);
            if (fc < std::min(fr, simplex[n].f)) {
                simplex[n] = {xc, fc};
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t k = 0; k < n; ++k) {
                        simplex[i].x[k] = simplex[0].x[k] + sigma * (simplex[i].x[k] - simplex[0].x[k]);
                    }
                    simplex[i].f = f(simplex[i].x);
                }
            }
        }
    }

    NelderMeadResult r;
    r.x = simplex[0].x;
    r.value = simplex[0].f;
    r.iterations = iterations;
    r.simplex_size = spread(simplex);
    return r;
}

LbfgsResult lbfgs(const GradientObjective& f, std::vector<double> x0, const LbfgsOptions& options) {
    const std::size_t n = x0.size();
    auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
        return s;
    };

    LbfgsResult r;
    r.x = std::move(x0);
    std::vector<double> g(n), gn(n), xn(n), dir(n);
    r.value = f(r.x, g);
    std::vector<std::vector<double>> ss, ys;
    std::vector<double> rhos;
    std::vector<double> history{r.value};

    for (; r.iterations < options.max_iterations; ++r.iterations) {
        r.gradient_norm = std::sqrt(dot(g, g));
        if (!(r.gradient_norm > options.gradient_tol)) break;

        // two-loop recursion
        dir = g;
        std::vector<double> alphas(ss.size());
        for (std::size_t i = ss.size(); i-- > 0;) {
            alphas[i] = rhos[i] * dot(ss[i], dir);
            for (std::size_t k = 0; k < n; ++k) dir[k] -= alphas[i] * ys[i][k];
        }
        const double scale = ss.empty() ? 1.0 / std::max(r.gradient_norm, 1.0)
                                        : dot(ss.back(), ys.back()) / dot(ys.back(), ys.back());
        for (auto& d : dir) d *= scale;
        for (std::size_t i = 0; i < ss.size(); ++i) {
            const double beta = rhos[i] * dot(ys[i], dir);
            for (std::size_t k = 0; k < n; ++k) dir[k] += (alphas[i] - beta) * ss[i][k];
        }
        for (auto& d : dir) d = -d;
        double slope = dot(g, dir);
        if (!(slope < 0.0)) {
            for (std::size_t k = 0; k < n; ++k) dir[k] = -g[k];
            slope = -r.gradient_norm * r.gradient_norm;
            ss.clear();
            ys.clear();
            rhos.clear();
        }

        double step = 1.0;
        double fn = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t k = 0; k < n; ++k) xn[k] = r.x[k] + step * dir[k];
            fn = f(xn, gn);
            if (std::isfinite(fn) && fn <= r.value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> s(n), y(n);
        for (std::size_t k = 0; k < n; ++k) {
            s[k] = xn[k] - r.x[k];
            y[k] = gn[k] - g[k];
        }
        const double sy = dot(s, y);
        if (sy > 1e-300) {
            ss.push_back(std::move(s));
            ys.push_back(std::move(y));
            rhos.push_back(1.0 / sy);
            if (static_cast<int>(ss.size()) > options.memory) {
                ss.erase(ss.begin());
                ys.erase(ys.begin());
                rhos.erase(rhos.begin());
            }
        }
        r.x.swap(xn);
        g.swap(gn);
        r.value = fn;

        history.push_back(fn);
        const auto h = history.size();
        const auto w = static_cast<std::size_t>(std::max(options.window, 1));
        if (h > w && history[h - 1 - w] - fn <= options.relative_improvement * std::max(std::abs(fn), 1e-300)) {
            ++r.iterations;
            break;
        }
    }
    r.gradient_norm = std::sqrt(dot(g, g));
    return r;
}

double radical_inverse(std::uint64_t k, unsigned base) {
    double inv = 1.0 / base;
    double scale = inv;
    double out = 0.0;
    while (k > 0) {
        out += static_cast<double>(k % base) * scale;
        k /= base;
        scale *= inv;
    }
    return out;
}

std::vector<double> halton_point(std::uint64_t k, std::size_t dims) {
    std::vector<unsigned> primes{2};
    for (unsigned c = primes.back() + 1; primes.size() < dims; ++c) {
        if (std::none_of(primes.begin(), primes.end(), [c](unsigned p) { return c % p == 0; })) primes.push_back(c);
    }
    std::vector<double> p(dims);
    // skip the all-zero first point
    for (std::size_t d = 0; d < dims; ++d) p[d] = radical_inverse(k + 1, primes[d]);
    return p;
}

} // namespace qcorr
