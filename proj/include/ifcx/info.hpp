#pragma once

#include "ifcx/channel.hpp"
#include "ifcx/types.hpp"

namespace ifcx {

// Joint distribution over X1 x X2 x Y1, flat storage per JointShape::idx.
struct JointDist {
    JointShape shape;
    Vec p;
};

// The coupled pair (P, P') jointly optimized in the exponent's inner
// minimizations.
struct JointPair {
    JointDist unprimed;
    JointDist primed;
};

inline constexpr double kJointTol = 1e-10;

void validate_joint(const JointDist& j);

// Marginal of p over the variables in `mask`, ordered (X1, X2, Y1).
Vec marginal(const Vec& p, const JointShape& shape, unsigned mask);

// All quantities below are in nats.

// H(d) with the 0 log 0 = 0 convention. Requires d to be a distribution.
double entropy(const Vec& d);

// Entropy of the marginal over `mask`.
double subset_entropy(const Vec& p, const JointShape& shape, unsigned mask);

// I(A; B | C) for disjoint nonempty variable subsets A, B and optional C.
double mutual_info(const JointDist& j, unsigned group_a, unsigned group_b,
                   unsigned cond = 0);

// H(A | B); group_b may be 0 for plain entropy.
double cond_entropy(const JointDist& j, unsigned group_a, unsigned group_b);

// D(P_{Y1|X1 X2} || q1 | P_{X1 X2}); +inf when j charges a q1-null cell.
double cond_kl_to_channel(const JointDist& j, const ChannelSpec& ch);

// E_P[log q1(Y1|X1,X2)]; -inf when j charges a q1-null cell.
double expected_log_channel(const JointDist& j, const ChannelSpec& ch);

// Product composition pushed through q1: P(x1,x2,y) = Q1(x1) Q2(x2) q1(y|x1,x2).
JointDist product_through_channel(const ChannelSpec& ch, const CompositionPair& comps);

}  // namespace ifcx
