#include "ifcx/lower_bound.hpp"

#include <limits>
#include <stdexcept>

namespace ifcx {

PiecewiseObjective r1zero_branch_a_objective(const ChannelSpec& ch, double r2) {
    // D + I(X1;X2) + I(X1;Y1) + |I(X2;X1,Y1) - R2|+
    PiecewiseObjective obj(ch.joint_shape(), ch, 2);
    obj.smooth().add(0, comb_divergence_to_channel());
    obj.smooth().add(0, comb_mi(kX1, kX2));
    obj.smooth().add(0, comb_mi(kX1, kY1));
    BlockComb active(2);
    active.add(0, comb_mi(kX2, kX1 | kY1));
    active.constant = -r2;
    obj.max_terms().push_back({active, BlockComb(2)});
    return obj;
}

PiecewiseObjective r1zero_branch_b_objective(const ChannelSpec& ch) {
    // D + I(X1;X2) + I(X1;X2,Y1)
    PiecewiseObjective obj(ch.joint_shape(), ch, 2);
    obj.smooth().add(0, comb_divergence_to_channel());
    obj.smooth().add(0, comb_mi(kX1, kX2));
    obj.smooth().add(0, comb_mi(kX1, kX2 | kY1));
    return obj;
}

double lower_bound_r1zero(double r2, const CompositionPair& comps, const ChannelSpec& ch,
                          const SolveOptions& opts) {
    if (r2 < 0.0) throw std::invalid_argument("r2 must be nonnegative");
    const FeasibleSet fs = make_single_copy_set(ch.joint_shape(), comps);
    const double a = minimize(r1zero_branch_a_objective(ch, r2), fs, ch, opts).value;
    const double b = minimize(r1zero_branch_b_objective(ch), fs, ch, opts).value;
    return std::min(a, b);
}

PiecewiseObjective lower_bound_theta_objective(const ChannelSpec& ch, const RatePair& rates,
                                               double theta) {
    // Copies: 0,1 = pair 1 (S1-coupled); 2,3 = pair 2 (S2-coupled, no rate).
    // One max over six branches: each of the three expressions of the bound,
    // with its |.|+ term flattened into an active and an inactive variant.
    const double th = theta, tb = 1.0 - theta;
    const double r1 = rates.r1, r2 = rates.r2;
    PiecewiseObjective obj(ch.joint_shape(), ch, 4);

    const EntropyComb d = comb_divergence_to_channel();
    const EntropyComb mi_x1x2 = comb_mi(kX1, kX2);
    const EntropyComb mi_x1_y = comb_mi(kX1, kY1);
    const EntropyComb mi_x2_x1y = comb_mi(kX2, kX1 | kY1);
    const EntropyComb mi_x2_y = comb_mi(kX2, kY1);
    const EntropyComb mi_x1_x2y = comb_mi(kX1, kX2 | kY1);

    std::vector<BlockComb> branches;

    // Expression 1: theta [D(0) + I(X1;X2)(0) + |I(X2';Y1')(1) - R2|+]
    //             + (1-theta) [D(2) + I(X1;X2)(2)]
    {
        BlockComb base(4);
        base.add(0, d, th).add(0, mi_x1x2, th);
        base.add(2, d, tb).add(2, mi_x1x2, tb);
        BlockComb on = base;
        on.add(1, mi_x2_y, th);
        on.constant -= th * r2;
        branches.push_back(on);
        branches.push_back(base);
    }
    // Expression 2: -R1 + theta [D(0) + I(X1;X2)(0) + I(X1';Y1')(1)
    //                            + |I(X2';X1',Y1')(1) - R2|+]
    //             + (1-theta) [D(2) + I(X1;X2)(2) + I(X1';X2',Y1')(3)]
    {
        BlockComb base(4);
        base.constant = -r1;
        base.add(0, d, th).add(0, mi_x1x2, th).add(1, mi_x1_y, th);
        base.add(2, d, tb).add(2, mi_x1x2, tb).add(3, mi_x1_x2y, tb);
        BlockComb on = base;
        on.add(1, mi_x2_x1y, th);
        on.constant -= th * r2;
        branches.push_back(on);
        branches.push_back(base);
    }
    // Expression 3: -R1 + theta [D'(1) + I(X1';X2')(1) + I(X1;Y1)(0)
    //                            + |I(X2;X1,Y1)(0) - R2|+]
    //             + (1-theta) [D'(3) + I(X1';X2')(3) + I(X1;X2,Y1)(2)]
    {
        BlockComb base(4);
        base.constant = -r1;
        base.add(1, d, th).add(1, mi_x1x2, th).add(0, mi_x1_y, th);
        base.add(3, d, tb).add(3, mi_x1x2, tb).add(2, mi_x1_x2y, tb);
        BlockComb on = base;
        on.add(0, mi_x2_x1y, th);
        on.constant -= th * r2;
        branches.push_back(on);
        branches.push_back(base);
    }
    obj.max_terms().push_back(std::move(branches));
    return obj;
}

double lower_bound(const RatePair& rates, const CompositionPair& comps, const ChannelSpec& ch,
                   int theta_grid, const SolveOptions& opts) {
    if (theta_grid < 2) throw std::invalid_argument("theta_grid must be >= 2");
    const FeasibleSet blocks[2] = {make_s1_set(ch.joint_shape(), comps),
                                   make_s2_set(ch.joint_shape(), comps)};
    const FeasibleDomain dom(blocks, &ch, opts.interior_floor);

    double best = std::numeric_limits<double>::infinity();
    Vec warm;
    for (int t = 0; t < theta_grid; ++t) {
        const double theta = static_cast<double>(t) / (theta_grid - 1);
        const PiecewiseObjective obj = lower_bound_theta_objective(ch, rates, theta);
        const DomainSolveResult r =
            solve_over_domain(obj, dom, opts, {&warm, warm.size() > 0 ? 1u : 0u});
        warm = r.z;
        best = std::min(best, r.value);
    }
    return best;
}

RegionVerdict region_contains(const RatePair& rates, const CompositionPair& comps,
                              const ChannelSpec& ch) {
    const JointDist prod = product_through_channel(ch, comps);
    const double i_x1_y = mutual_info(prod, kX1, kY1);
    const double i_x2_y_given_x1 = mutual_info(prod, kX2, kY1, kX1);
    const double i_x1_y_given_x2 = mutual_info(prod, kX1, kY1, kX2);
    const double i_y_x1x2 = mutual_info(prod, kY1, kX1 | kX2);

    RegionVerdict v;
    v.margin_union = i_x1_y + std::max(i_x2_y_given_x1 - rates.r2, 0.0) - rates.r1;
    v.margin_cond = i_x1_y_given_x2 - rates.r1;
    v.inside = v.margin_union > 0.0 && v.margin_cond > 0.0;

    // Equivalent union-intersection characterization; the two must agree.
    const bool alt = (rates.r1 < i_x1_y) ||
                     (rates.r1 + rates.r2 < i_y_x1x2 && rates.r1 < i_x1_y_given_x2);
    if (alt != v.inside) {
        throw NumericalError("region characterizations disagree");
    }
    return v;
}

}  // namespace ifcx
