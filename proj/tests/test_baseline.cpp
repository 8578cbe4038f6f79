#include "ifcx/baseline.hpp"

#include "ifcx/lower_bound.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace ifcx;
using namespace ifcx::testing;

TEST_CASE("huge R1 drives every baseline exponent to zero") {
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);
    const double r1 = 2.0 * std::log(2.0) * 2.0;
    const BaselineResult r = baseline_exponents(r1, r1, comps, ch);
    CHECK(r.e_12 == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(r.e_1_given_2 == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(r.e_1 == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(r.e_b1 == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("at R1 = 0 the baseline matches its clamp-free simplification") {
    // At zero rate the |.|+ terms of E1 and E1|2 never bind, so the three
    // minimizations can be rebuilt without max terms and reassembled.
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);
    const double r2 = 0.139;
    const BaselineResult full = baseline_exponents(0.0, r2, comps, ch);

    const FeasibleSet fs = make_single_copy_set(ch.joint_shape(), comps);
    const auto smooth_min = [&](std::initializer_list<EntropyComb> combs) {
        PiecewiseObjective obj(ch.joint_shape(), ch, 2);
        for (const auto& c : combs) obj.smooth().add(0, c);
        return minimize(obj, fs, ch).value;
    };
    const double e1 = smooth_min(
        {comb_divergence_to_channel(), comb_mi(kX1, kX2), comb_mi(kX1, kY1)});
    const double e1g2 = smooth_min(
        {comb_divergence_to_channel(), comb_mi(kX1, kX2), comb_mi(kX1, kX2 | kY1)});
    const double e12 = minimize(baseline_objective_12(ch, 0.0, r2), fs, ch).value;
    const double eb1 = std::max(e1, std::min(e12, e1g2));
    CHECK(full.e_b1 == doctest::Approx(eb1).epsilon(1e-4));

    // The same assembly also lower-bounds the zero-rate analytic bound.
    const double lbz = lower_bound_r1zero(r2, comps, ch);
    CHECK(full.e_b1 <= lbz + 1e-6);
}

TEST_CASE("random channels match the multistart oracle") {
    Rng rng(14);
    for (int t = 0; t < 5; ++t) {
        const ChannelSpec ch = random_channel(rng, 2, 2, 2);
        const CompositionPair comps = random_comps(rng, 2, 2);
        const double r1 = 0.4 * unit_uniform(rng);
        const double r2 = 0.4 * unit_uniform(rng);
        const FeasibleSet fs = make_single_copy_set(ch.joint_shape(), comps);
        const BaselineResult r = baseline_exponents(r1, r2, comps, ch);
        CHECK(std::abs(r.e_12 - oracle_minimize(baseline_objective_12(ch, r1, r2), fs, ch, 6,
                                                1000 + t)) < 1e-3);
        CHECK(std::abs(r.e_1_given_2 - oracle_minimize(baseline_objective_1_given_2(ch, r1), fs,
                                                       ch, 6, 2000 + t)) < 1e-3);
        CHECK(std::abs(r.e_1 -
                       oracle_minimize(baseline_objective_1(ch, r1), fs, ch, 6, 3000 + t)) < 1e-3);
    }
}

TEST_CASE("each exponent is non-increasing in R1") {
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);
    double prev_12 = 1e9, prev_1g2 = 1e9, prev_1 = 1e9, prev_b1 = 1e9;
    for (int i = 0; i < 10; ++i) {
        const double r1 = 0.08 * i;
        const BaselineResult r = baseline_exponents(r1, 0.139, comps, ch);
        CHECK(r.e_12 <= prev_12 + 1e-6);
        CHECK(r.e_1_given_2 <= prev_1g2 + 1e-6);
        CHECK(r.e_1 <= prev_1 + 1e-6);
        CHECK(r.e_b1 <= prev_b1 + 1e-6);
        CHECK(r.e_b1 >= r.e_1);
        prev_12 = r.e_12;
        prev_1g2 = r.e_1_given_2;
        prev_1 = r.e_1;
        prev_b1 = r.e_b1;
    }
}

TEST_CASE("the product point zeroes both divergence and input dependence") {
    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
        const ChannelSpec ch = random_channel(rng, 2, 3, 2);
        const CompositionPair comps = random_comps(rng, 2, 3);
        const JointDist prod = product_through_channel(ch, comps);
        CHECK(cond_kl_to_channel(prod, ch) == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(mutual_info(prod, kX1, kX2) == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("negative rates are rejected") {
    const ChannelSpec ch = z_channel(0.01);
    CHECK_THROWS_AS(baseline_exponents(-0.1, 0.0, uniform_comps(2, 2), ch),
                    std::invalid_argument);
}
