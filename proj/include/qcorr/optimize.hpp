#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qcorr {

/// Multi-start search effort: the number of starting points taken from a
/// fixed nested sequence, and the Nelder-Mead iteration cap per start.
struct OptimizerBudget {
    int starts = 24;
    int iterations = 200;
    double simplex_tol = 1e-8;
};

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
    int max_iterations = 200;
    /// Stop once every vertex lies within this distance of the best one.
    double simplex_tol = 1e-8;
    double initial_step = 0.5;
    /// Rebuild the simplex around the best vertex after convergence, up to
    /// this many times, while the rebuild keeps improving the value.
    int restarts = 0;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    double simplex_size = 0.0;
};

/// Downhill simplex minimization. Deterministic; the best value is
/// non-increasing in max_iterations along a fixed trajectory.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options);

/// Value plus gradient written into the second argument.
using GradientObjective = std::function<double(std::span<const double>, std::span<double>)>;

struct LbfgsOptions {
    int max_iterations = 400;
    int memory = 8;
    double gradient_tol = 1e-12;
    /// Stop when the value improved by less than this (relative) over `window` iterations.
    double relative_improvement = 1e-8;
    int window = 50;
};

struct LbfgsResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;
};

/// Limited-memory BFGS with a backtracking Armijo line search. Every accepted
/// step decreases the value.
LbfgsResult lbfgs(const GradientObjective& f, std::vector<double> x0, const LbfgsOptions& options);

/// k-th element (k >= 0) of the van der Corput sequence in `base`.
double radical_inverse(std::uint64_t k, unsigned base);

/// k-th point of the Halton sequence in [0, 1)^dims. Prefixes of the sequence
/// are nested, so start sets grow by inclusion as budgets grow.
std::vector<double> halton_point(std::uint64_t k, std::size_t dims);

} // namespace qcorr
