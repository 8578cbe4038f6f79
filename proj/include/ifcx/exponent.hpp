#pragma once

#include "ifcx/channel.hpp"
#include "ifcx/solver.hpp"

#include <string>

namespace ifcx {

// Auxiliary exponent parameters, both in [0,1].
struct GallagerParams {
    double rho = 0.0;
    double lambda = 0.0;
};

struct RatePair {
    double r1 = 0.0;  // nats
    double r2 = 0.0;  // nats
};

// Which inner minimization produced the exponent value.
enum class Branch { S1, S2, S2_dominated_by_S1 };

std::string branch_name(Branch b);

struct ExponentResult {
    double value = 0.0;  // nats
    GallagerParams best_params;
    Branch branch = Branch::S1;
    JointPair argmin;
    // Inner minima of both branches: min over S1 of f1 and min over the
    // rate-relaxed S2 of f2, plus whether the relaxed argmin satisfied the
    // rate condition R2 <= I(X2;Y1).
    double min_s1_f1 = 0.0;
    double min_s2_f2_relaxed = 0.0;
    bool rate_condition_held = false;
};

// g = -(1-rho*lambda) E_P[log q1] - rho*lambda E_P'[log q1]; >= 0.
double g_term(const GallagerParams& gp, const JointPair& jp, const ChannelSpec& ch);

// The two objective functions of the inner minimizations.
double f1(const GallagerParams& gp, const JointPair& jp, const ChannelSpec& ch, double r2);
double f2(const GallagerParams& gp, const JointPair& jp, const ChannelSpec& ch, double r2);

// Objective builders shared with the solver and the verification oracle.
PiecewiseObjective f1_objective(const GallagerParams& gp, const ChannelSpec& ch, double r2);
PiecewiseObjective f2_objective(const GallagerParams& gp, const ChannelSpec& ch, double r2);

// E_{R,1} at fixed (rho, lambda): R2 - rho R1 + min of the two inner minima,
// with the rate-relaxed S2 problem and the dominance test in place of the
// nonconvex constraint. Ties between the branches go to S1.
ExponentResult exponent_fixed(const RatePair& rates, const CompositionPair& comps,
                              const GallagerParams& gp, const ChannelSpec& ch,
                              const SolveOptions& opts = {});

// Maximizes exponent_fixed over a 21x21 (rho, lambda) grid followed by two
// local refinement rounds (factor 5 each) around the incumbent.
ExponentResult exponent_optimized(const RatePair& rates, const CompositionPair& comps,
                                  const ChannelSpec& ch);

// User-2 exponent: exponent_optimized on the swapped channel with swapped
// compositions and rates. Requires q2.
ExponentResult exponent_user2(const RatePair& rates, const CompositionPair& comps,
                              const ChannelSpec& ch);

struct MaxminResult {
    CompositionPair comps;
    double value = 0.0;  // min{E_R1, E_R2} at the best compositions
    double e_r1 = 0.0;
    double e_r2 = 0.0;
};

// Exhaustive grid over (Q1, Q2) with spacing grid_step; maximizes the
// exponent simultaneously achievable for both users.
MaxminResult maxmin_over_comps(const RatePair& rates, const ChannelSpec& ch, double grid_step,
                               int jobs = 1);

// All compositions over `n` symbols with entries that are multiples of step.
std::vector<Vec> composition_grid(int n, double step);

}  // namespace ifcx
