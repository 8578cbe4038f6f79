#pragma once

#include "ifcx/feasible.hpp"
#include "ifcx/objective.hpp"

#include <cstdint>
#include <functional>

namespace ifcx {

enum class StepRule { fixed, backtracking };

struct SolveOptions {
    int max_iters = 5000;
    double grad_tol = 1e-7;  // sup-norm of the projected gradient
    StepRule step_rule = StepRule::backtracking;
    int restarts = 8;
    std::uint64_t seed = 0;
    double interior_floor = 1e-12;
    // Observer for tests: (iteration, objective value, stacked iterate).
    std::function<void(int, double, const Vec&)> trace;
};

struct SolveResult {
    double value = 0.0;
    JointPair argmin;
    bool converged = false;
    int iterations = 0;
    double kkt_residual = 0.0;
};

// Generic result over a stacked multi-copy domain.
struct DomainSolveResult {
    double value = 0.0;
    Vec z;
    bool converged = false;
    int iterations = 0;
    double kkt_residual = 0.0;
};

// Projected gradient descent with Armijo backtracking from one start point.
DomainSolveResult solve_from(const PiecewiseObjective& obj, const FeasibleDomain& dom,
                             const Vec& start, const SolveOptions& opts);

// Multistart wrapper over a prebuilt domain; starts are the interior point,
// the caller's hints, and seeded random samples up to opts.restarts total.
DomainSolveResult solve_over_domain(const PiecewiseObjective& obj, const FeasibleDomain& dom,
                                    const SolveOptions& opts,
                                    std::span<const Vec> start_hints = {});

// Minimize a pair objective over one feasible set. Cells with
// q1(y|x1,x2) = 0 are pinned to zero, so the objective stays finite.
SolveResult minimize(const PiecewiseObjective& objective, const FeasibleSet& fs,
                     const ChannelSpec& ch, const SolveOptions& opts = {});

// Independent verification oracle: multistart projected gradient descent
// with diminishing steps to stationarity 1e-6; shares none of minimize's
// line-search or stopping logic.
double oracle_minimize(const PiecewiseObjective& objective, const FeasibleSet& fs,
                       const ChannelSpec& ch, int restarts, std::uint64_t seed);

double oracle_minimize_domain(const PiecewiseObjective& objective, const FeasibleDomain& dom,
                              int restarts, std::uint64_t seed);

}  // namespace ifcx
