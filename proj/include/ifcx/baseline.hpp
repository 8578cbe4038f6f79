#pragma once

#include "ifcx/channel.hpp"
#include "ifcx/solver.hpp"

namespace ifcx {

// Suboptimal-decoder exponents used as the comparison benchmark:
// E_{1,2} and E_{1|2} from the MAC minimum-entropy decoder, E_1 from the
// single-user maximum mutual information decoder, and
// E_{B,1} = max{E_1, min{E_{1,2}, E_{1|2}}}.
struct BaselineResult {
    double e_12 = 0.0;
    double e_1_given_2 = 0.0;
    double e_1 = 0.0;
    double e_b1 = 0.0;
    JointDist argmin_12, argmin_1_given_2, argmin_1;
};

// Objectives of the three minimizations, exposed for oracle cross-checks.
// Each is D(P_{Y1|X1X2}||q1|P_{X1X2}) + I(X1;X2) + a clamped rate term,
// evaluated on the unprimed copy of a two-copy stack.
PiecewiseObjective baseline_objective_12(const ChannelSpec& ch, double r1, double r2);
PiecewiseObjective baseline_objective_1_given_2(const ChannelSpec& ch, double r1);
PiecewiseObjective baseline_objective_1(const ChannelSpec& ch, double r1);

BaselineResult baseline_exponents(double r1, double r2, const CompositionPair& comps,
                                  const ChannelSpec& ch, const SolveOptions& opts = {});

}  // namespace ifcx
