#include "ifcx/lower_bound.hpp"

#include "ifcx/baseline.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace ifcx;
using namespace ifcx::testing;

TEST_CASE("at R1 = 0 the full bound agrees with the simplified form") {
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);
    for (double r2 : {0.139, 0.277}) {
        const double full = lower_bound({0.0, r2}, comps, ch);
        const double simple = lower_bound_r1zero(r2, comps, ch);
        CHECK(full == doctest::Approx(simple).epsilon(1e-4));
    }
}

TEST_CASE("the bound is positive strictly inside the region") {
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);
    Rng rng(5);
    int found = 0;
    while (found < 5) {
        const RatePair rates{0.35 * unit_uniform(rng), 0.5 * unit_uniform(rng)};
        const RegionVerdict v = region_contains(rates, comps, ch);
        if (!(v.inside && v.margin_union > 0.05 && v.margin_cond > 0.05)) continue;
        ++found;
        CHECK(lower_bound(rates, comps, ch, 21) > 0.0);
    }
}

TEST_CASE("the bound sandwiches the baseline at R1 = 0") {
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);
    const double r2 = 0.139;
    const BaselineResult b = baseline_exponents(0.0, r2, comps, ch);
    const double lbz = lower_bound_r1zero(r2, comps, ch);
    CHECK(b.e_b1 <= lbz + 1e-6);
}

TEST_CASE("r1zero branches saturate for very large R2") {
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);
    const double big = lower_bound_r1zero(10.0, comps, ch);
    // with the |.|+ clamped, branch A reduces to min [D + I(X1;X2) + I(X1;Y1)]
    const FeasibleSet fs = make_single_copy_set(ch.joint_shape(), comps);
    PiecewiseObjective clamp_free(ch.joint_shape(), ch, 2);
    clamp_free.smooth().add(0, comb_divergence_to_channel());
    clamp_free.smooth().add(0, comb_mi(kX1, kX2));
    clamp_free.smooth().add(0, comb_mi(kX1, kY1));
    const double branch_a = minimize(clamp_free, fs, ch).value;
    PiecewiseObjective branch_b_obj = r1zero_branch_b_objective(ch);
    const double branch_b = minimize(branch_b_obj, fs, ch).value;
    CHECK(big == doctest::Approx(std::min(branch_a, branch_b)).epsilon(1e-6));
}

TEST_CASE("r1zero matches the multistart oracle on random channels") {
    Rng rng(99);
    for (int t = 0; t < 4; ++t) {
        const ChannelSpec ch = random_channel(rng, 2, 2, 2);
        const CompositionPair comps = random_comps(rng, 2, 2);
        const double r2 = 0.4 * unit_uniform(rng);
        const FeasibleSet fs = make_single_copy_set(ch.joint_shape(), comps);
        const double a = oracle_minimize(r1zero_branch_a_objective(ch, r2), fs, ch, 6, 31 + t);
        const double b = oracle_minimize(r1zero_branch_b_objective(ch), fs, ch, 6, 41 + t);
        const double lbz = lower_bound_r1zero(r2, comps, ch);
        CHECK(std::abs(lbz - std::min(a, b)) < 1e-3);
    }
}

TEST_CASE("the bound never increases with R1") {
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);
    double prev = std::numeric_limits<double>::infinity();
    for (double r1 : {0.0, 0.05, 0.1, 0.2, 0.35}) {
        const double lb = lower_bound({r1, 0.139}, comps, ch, 21);
        CHECK(lb <= prev + 1e-7);
        prev = lb;
    }
}

TEST_CASE("region membership on the Z-channel") {
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);

    const RegionVerdict in = region_contains({0.1, 0.139}, comps, ch);
    CHECK(in.inside);  // I(X1;Y1) ~ 0.1932 exceeds R1 = 0.1
    CHECK(in.margin_union > 0.0);
    CHECK(in.margin_cond > 0.0);

    const RegionVerdict out = region_contains({3.0, 0.139}, comps, ch);
    CHECK_FALSE(out.inside);

    const RegionVerdict zero = region_contains({0.0, 5.0}, comps, ch);
    CHECK(zero.inside);  // R1 = 0 with I(X1;Y1|X2) > 0
}

TEST_CASE("both region characterizations agree on random triples") {
    Rng rng(202);
    for (int t = 0; t < 1000; ++t) {
        const ChannelSpec ch = random_channel(rng, 2, 2, 2);
        const CompositionPair comps = random_comps(rng, 2, 2);
        const RatePair rates{1.5 * unit_uniform(rng), 1.5 * unit_uniform(rng)};
        CHECK_NOTHROW(region_contains(rates, comps, ch));  // throws on disagreement
    }
}

TEST_CASE("theta grid must have at least two points") {
    const ChannelSpec ch = z_channel(0.01);
    CHECK_THROWS_AS(lower_bound({0.0, 0.1}, uniform_comps(2, 2), ch, 1), std::invalid_argument);
}
