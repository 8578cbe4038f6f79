#include "ifcx/info.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace ifcx;
using namespace ifcx::testing;

TEST_CASE("entropy of simple distributions") {
    Vec half(2);
    half << 0.5, 0.5;
    CHECK(entropy(half) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

    Vec point(2);
    point << 1.0, 0.0;
    CHECK(entropy(point) == 0.0);

    Vec skew(2);
    skew << 0.99, 0.01;
    const double expected = -0.99 * std::log(0.99) - 0.01 * std::log(0.01);
    CHECK(entropy(skew) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(entropy(skew) == doctest::Approx(0.056002).epsilon(1e-4));
}

TEST_CASE("mutual information basics") {
    const JointShape shape{2, 2, 2};

    SUBCASE("product distribution has zero I(X1;X2)") {
        Rng rng(3);
        const Vec q1 = random_dist(rng, 2);
        const Vec q2 = random_dist(rng, 2);
        JointDist j{shape, Vec(shape.size())};
        for (int i = 0; i < j.p.size(); ++i) {
            j.p[i] = q1[shape.x1_of(i)] * q2[shape.x2_of(i)] * 0.5;
        }
        CHECK(mutual_info(j, kX1, kX2) == doctest::Approx(0.0).epsilon(1e-14));
    }

    SUBCASE("copy channel carries ln 2") {
        JointDist j{shape, Vec::Zero(shape.size())};
        // X1 uniform, Y1 = X1, X2 uniform independent
        for (int x1 = 0; x1 < 2; ++x1) {
            for (int x2 = 0; x2 < 2; ++x2) {
                j.p[shape.idx(x1, x2, x1)] = 0.25;
            }
        }
        CHECK(mutual_info(j, kX1, kY1) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    }

    SUBCASE("Z-channel value against the direct decomposition") {
        const ChannelSpec ch = z_channel(0.01);
        const JointDist j = product_through_channel(ch, uniform_comps(2, 2));
        const double direct = h2(0.255) - 0.5 * h2(0.01) - 0.5 * std::log(2.0);
        const double i = mutual_info(j, kX1, kY1);
        CHECK(i == doctest::Approx(direct).epsilon(1e-12));
        CHECK(std::abs(i - 0.1937) < 1e-3);
    }

    SUBCASE("overlapping groups are rejected") {
        Rng rng(4);
        const JointDist j = random_joint(rng, shape);
        CHECK_THROWS_AS(mutual_info(j, kX1 | kX2, kX2), std::invalid_argument);
        CHECK_THROWS_AS(mutual_info(j, kX1, kY1, kX1), std::invalid_argument);
    }

    SUBCASE("nonnegative, zero iff independent") {
        Rng rng(9);
        for (int t = 0; t < 100; ++t) {
            const JointDist j = random_joint(rng, shape);
            CHECK(mutual_info(j, kX1, kY1) >= -1e-14);
        }
    }
}

TEST_CASE("conditional divergence to the channel") {
    const ChannelSpec ch = z_channel(0.01);
    const JointShape shape = ch.joint_shape();

    SUBCASE("vanishes at the channel itself") {
        Rng rng(17);
        for (int t = 0; t < 20; ++t) {
            const CompositionPair comps = random_comps(rng, 2, 2);
            const JointDist j = product_through_channel(ch, comps);
            CHECK(cond_kl_to_channel(j, ch) == doctest::Approx(0.0).epsilon(1e-13));
        }
    }

    SUBCASE("point mass on (0,0,0)") {
        JointDist j{shape, Vec::Zero(shape.size())};
        j.p[shape.idx(0, 0, 0)] = 1.0;
        CHECK(cond_kl_to_channel(j, ch) == doctest::Approx(std::log(1.0 / 0.99)).epsilon(1e-12));
        CHECK(cond_kl_to_channel(j, ch) == doctest::Approx(0.010050).epsilon(1e-4));
    }

    SUBCASE("charging a q1-null cell yields +inf") {
        const ChannelSpec det = z_channel(0.0);
        JointDist j{shape, Vec::Zero(shape.size())};
        j.p[shape.idx(0, 0, 1)] = 1.0;  // q1(1|0,0) = 0 for p = 0
        CHECK(std::isinf(cond_kl_to_channel(j, det)));
        CHECK(cond_kl_to_channel(j, det) > 0);
    }
}

TEST_CASE("expected log channel") {
    const ChannelSpec ch = z_channel(0.01);
    const JointShape shape = ch.joint_shape();

    SUBCASE("deterministic channel gives zero") {
        const ChannelSpec det = z_channel(0.0);
        const JointDist j = product_through_channel(det, uniform_comps(2, 2));
        CHECK(expected_log_channel(j, det) == doctest::Approx(0.0).epsilon(1e-14));
    }

    SUBCASE("point mass on (0,0,0)") {
        JointDist j{shape, Vec::Zero(shape.size())};
        j.p[shape.idx(0, 0, 0)] = 1.0;
        CHECK(expected_log_channel(j, ch) == doctest::Approx(std::log(0.99)).epsilon(1e-12));
        CHECK(expected_log_channel(j, ch) == doctest::Approx(-0.010050).epsilon(1e-4));
    }

    SUBCASE("charging a null cell yields -inf") {
        const ChannelSpec det = z_channel(0.0);
        JointDist j{shape, Vec::Zero(shape.size())};
        j.p[shape.idx(0, 0, 1)] = 1.0;
        CHECK(std::isinf(expected_log_channel(j, det)));
        CHECK(expected_log_channel(j, det) < 0);
    }
}

TEST_CASE("chain-rule identity on random joints") {
    Rng rng(123);
    for (int t = 0; t < 1000; ++t) {
        const JointShape shape{2 + static_cast<int>(bounded_uniform(rng, 2)),
                               2 + static_cast<int>(bounded_uniform(rng, 2)),
                               2 + static_cast<int>(bounded_uniform(rng, 2))};
        const JointDist j = random_joint(rng, shape);
        const double lhs = mutual_info(j, kX1, kX2 | kY1) + mutual_info(j, kX2, kY1);
        const double rhs = mutual_info(j, kX2, kX1 | kY1) + mutual_info(j, kX1, kY1);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("information decomposition on random joints") {
    Rng rng(321);
    for (int t = 0; t < 1000; ++t) {
        const JointShape shape{2, 2 + static_cast<int>(bounded_uniform(rng, 2)), 2};
        const JointDist j = random_joint(rng, shape);
        const double lhs = mutual_info(j, kX2, kX1 | kY1);
        const double rhs = mutual_info(j, kX1, kX2) + cond_entropy(j, kY1, kX1) -
                           cond_entropy(j, kY1, kX1 | kX2);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("divergence decomposition against entropy and expected log") {
    Rng rng(77);
    for (int t = 0; t < 200; ++t) {
        const ChannelSpec ch = random_channel(rng, 2, 2, 3);
        const JointDist j = random_joint(rng, ch.joint_shape());
        const double d = cond_kl_to_channel(j, ch);
        const double rhs = -cond_entropy(j, kY1, kX1 | kX2) - expected_log_channel(j, ch);
        CHECK(std::abs(d - rhs) < 1e-12);
    }
}

TEST_CASE("mutual information is invariant under consistent relabeling") {
    Rng rng(55);
    const JointShape shape{3, 2, 3};
    for (int t = 0; t < 50; ++t) {
        const JointDist j = random_joint(rng, shape);
        // reverse the X1 and Y1 alphabets
        JointDist r{shape, Vec(shape.size())};
        for (int i = 0; i < j.p.size(); ++i) {
            const int x1 = shape.x1_of(i), x2 = shape.x2_of(i), y = shape.y_of(i);
            r.p[shape.idx(shape.nx1 - 1 - x1, x2, shape.ny - 1 - y)] = j.p[i];
        }
        CHECK(mutual_info(j, kX1, kY1) == doctest::Approx(mutual_info(r, kX1, kY1)).epsilon(1e-13));
        CHECK(mutual_info(j, kX2, kX1 | kY1) ==
              doctest::Approx(mutual_info(r, kX2, kX1 | kY1)).epsilon(1e-13));
        CHECK(mutual_info(j, kX1, kY1, kX2) ==
              doctest::Approx(mutual_info(r, kX1, kY1, kX2)).epsilon(1e-13));
    }
}

TEST_CASE("joint validation") {
    const JointShape shape{2, 2, 2};
    JointDist j{shape, Vec::Constant(8, 0.125)};
    CHECK_NOTHROW(validate_joint(j));
    j.p[0] = -0.1;
    CHECK_THROWS_AS(validate_joint(j), std::invalid_argument);
    j.p[0] = 0.5;
    CHECK_THROWS_AS(validate_joint(j), std::invalid_argument);
}
