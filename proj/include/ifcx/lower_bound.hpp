#pragma once

#include "ifcx/channel.hpp"
#include "ifcx/solver.hpp"
#include "ifcx/exponent.hpp"

namespace ifcx {

// Verdict of the positivity region R1: the exponent is provably positive
// when both slacks are positive. Margins are evaluated at the product
// distribution Q1 x Q2 pushed through q1.
struct RegionVerdict {
    bool inside = false;
    // R1 vs I(X1;Y1) + |I(X2;Y1|X1) - R2|+  and  R1 vs I(X1;Y1|X2).
    double margin_union = 0.0;
    double margin_cond = 0.0;
};

// Analytic lower bound on max_{rho,lambda} E_{R,1}: a min over a theta grid
// and four coupled joint distributions of the max of three expressions
// built from divergences and mutual informations. The pair-2 set drops the
// rate condition.
double lower_bound(const RatePair& rates, const CompositionPair& comps, const ChannelSpec& ch,
                   int theta_grid = 41, const SolveOptions& opts = {});

// The R1 = 0 simplification: a two-branch min over single-copy
// distributions with marginals (Q1, Q2).
double lower_bound_r1zero(double r2, const CompositionPair& comps, const ChannelSpec& ch,
                          const SolveOptions& opts = {});

// Objective builders exposed for oracle cross-checks.
PiecewiseObjective r1zero_branch_a_objective(const ChannelSpec& ch, double r2);
PiecewiseObjective r1zero_branch_b_objective(const ChannelSpec& ch);
PiecewiseObjective lower_bound_theta_objective(const ChannelSpec& ch, const RatePair& rates,
                                               double theta);

RegionVerdict region_contains(const RatePair& rates, const CompositionPair& comps,
                              const ChannelSpec& ch);

}  // namespace ifcx
