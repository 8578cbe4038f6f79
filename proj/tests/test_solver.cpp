#include "ifcx/solver.hpp"

#include "ifcx/exponent.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace ifcx;
using namespace ifcx::testing;

namespace {

// Squared distance to a fixed pair, as an extra term on an empty objective.
PiecewiseObjective squared_distance_objective(const ChannelSpec& ch, const JointPair& target) {
    PiecewiseObjective obj(ch.joint_shape(), ch, 2);
    const Vec t0 = target.unprimed.p, t1 = target.primed.p;
    obj.set_extra_term([t0, t1](std::span<const Vec> ps, std::vector<Vec>* grads) {
        const Vec d0 = ps[0] - t0;
        const Vec d1 = ps[1] - t1;
        if (grads) {
            (*grads)[0] = 2.0 * d0;
            (*grads)[1] = 2.0 * d1;
        }
        return d0.squaredNorm() + d1.squaredNorm();
    });
    return obj;
}

}  // namespace

TEST_CASE("squared distance to a feasible interior point is minimized at it") {
    const ChannelSpec ch = z_channel(0.1);
    const CompositionPair comps = uniform_comps(2, 2);
    const FeasibleSet s1 = make_s1_set(ch.joint_shape(), comps);
    Rng rng(5);
    const JointPair target = sample_feasible(s1, rng);
    const SolveResult r = minimize(squared_distance_objective(ch, target), s1, ch);
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-10));
    CHECK((r.argmin.unprimed.p - target.unprimed.p).cwiseAbs().maxCoeff() < 1e-5);
    CHECK(r.converged);
}

TEST_CASE("divergence to the channel vanishes at the product point") {
    Rng rng(31);
    for (int t = 0; t < 5; ++t) {
        const ChannelSpec ch = random_channel(rng, 2, 2, 2);
        const CompositionPair comps = random_comps(rng, 2, 2);
        const FeasibleSet fs = make_single_copy_set(ch.joint_shape(), comps);
        PiecewiseObjective obj(ch.joint_shape(), ch, 2);
        obj.smooth().add(0, comb_divergence_to_channel());
        const SolveResult r = minimize(obj, fs, ch);
        CHECK(r.value == doctest::Approx(0.0).epsilon(1e-8));
        // the minimizer is its own input-marginal times the kernel rows
        const JointDist& arg = r.argmin.unprimed;
        const Vec m12 = marginal(arg.p, arg.shape, kX1 | kX2);
        for (int i = 0; i < arg.p.size(); ++i) {
            const int x1 = arg.shape.x1_of(i), x2 = arg.shape.x2_of(i), y = arg.shape.y_of(i);
            const double want = m12[arg.shape.subset_idx(kX1 | kX2, i)] * ch.q1(ch.row(x1, x2), y);
            CHECK(arg.p[i] == doctest::Approx(want).epsilon(1e-4));
        }
    }
}

TEST_CASE("f1 over S1 on the Z-channel matches the multistart oracle") {
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);
    const FeasibleSet s1 = make_s1_set(ch.joint_shape(), comps);
    const GallagerParams gp{1.0, 0.5};
    const PiecewiseObjective obj = f1_objective(gp, ch, 0.139);
    const SolveResult r = minimize(obj, s1, ch);
    const double oracle = oracle_minimize(obj, s1, ch, 8, 7);
    CHECK(std::abs(r.value - oracle) < 1e-3);
}

TEST_CASE("oracle restarts agree on convex objectives") {
    const ChannelSpec ch = z_channel(0.05);
    const CompositionPair comps = uniform_comps(2, 2);
    const FeasibleSet s1 = make_s1_set(ch.joint_shape(), comps);
    Rng rng(6);
    const JointPair target = sample_feasible(s1, rng);
    const PiecewiseObjective obj = squared_distance_objective(ch, target);
    const double one = oracle_minimize(obj, s1, ch, 1, 3);
    const double twenty = oracle_minimize(obj, s1, ch, 20, 3);
    CHECK(std::abs(one - twenty) < 1e-5);
    CHECK(twenty == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("descent is monotone and every iterate stays feasible") {
    const ChannelSpec ch = z_channel(0.01);
    const CompositionPair comps = uniform_comps(2, 2);
    const FeasibleSet s1 = make_s1_set(ch.joint_shape(), comps);
    const PiecewiseObjective obj = f1_objective({0.7, 0.3}, ch, 0.139);
    const FeasibleDomain dom({&s1, 1}, &ch);

    double last = std::numeric_limits<double>::infinity();
    int iterates = 0;
    SolveOptions opts;
    opts.restarts = 1;
    opts.trace = [&](int, double f, const Vec& z) {
        CHECK(f <= last + 1e-12);
        CHECK(dom.constraint_violation(z) < 1e-8);
        last = f;
        ++iterates;
    };
    solve_over_domain(obj, dom, opts);
    CHECK(iterates > 1);
}

TEST_CASE("converged results certify a small projected gradient") {
    Rng rng(12);
    for (int t = 0; t < 10; ++t) {
        const ChannelSpec ch = random_channel(rng, 2, 2, 2);
        const CompositionPair comps = random_comps(rng, 2, 2);
        const FeasibleSet s2 = make_s2_set(ch.joint_shape(), comps);
        const PiecewiseObjective obj =
            f2_objective({unit_uniform(rng), unit_uniform(rng)}, ch, 0.2);
        const SolveResult r = minimize(obj, s2, ch);
        if (r.converged) CHECK(r.kkt_residual <= 1e-7);
        CHECK(check_feasible(r.argmin, s2, 1e-8).ok);
    }
}

TEST_CASE("midpoint convexity of f1 and f2 on matched-marginal pairs") {
    Rng rng(2718);
    const auto check_convexity = [&](bool use_f1) {
        for (int t = 0; t < 100; ++t) {
            const ChannelSpec ch = random_channel(rng, 2, 2, 2);
            const CompositionPair comps = random_comps(rng, 2, 2);
            const FeasibleSet fs = use_f1 ? make_s1_set(ch.joint_shape(), comps)
                                          : make_single_copy_set(ch.joint_shape(), comps);
            const GallagerParams gp{unit_uniform(rng), unit_uniform(rng)};
            const double r2 = 0.5 * unit_uniform(rng);
            Rng ra(100 + t), rb(200 + t);
            const JointPair a = sample_feasible(fs, ra);
            const JointPair b = sample_feasible(fs, rb);
            JointPair mid{{a.unprimed.shape, 0.5 * (a.unprimed.p + b.unprimed.p)},
                          {a.primed.shape, 0.5 * (a.primed.p + b.primed.p)}};
            const double fa = use_f1 ? f1(gp, a, ch, r2) : f2(gp, a, ch, r2);
            const double fb = use_f1 ? f1(gp, b, ch, r2) : f2(gp, b, ch, r2);
            const double fm = use_f1 ? f1(gp, mid, ch, r2) : f2(gp, mid, ch, r2);
            CHECK(fm <= 0.5 * fa + 0.5 * fb + 1e-9);
        }
    };
    check_convexity(true);
    check_convexity(false);
}

TEST_CASE("fixed step rule still descends to the optimum region") {
    const ChannelSpec ch = z_channel(0.1);
    const CompositionPair comps = uniform_comps(2, 2);
    const FeasibleSet s1 = make_s1_set(ch.joint_shape(), comps);
    Rng rng(21);
    const JointPair target = sample_feasible(s1, rng);
    SolveOptions opts;
    opts.step_rule = StepRule::fixed;
    opts.max_iters = 2000;
    opts.grad_tol = 1e-5;
    const SolveResult r = minimize(squared_distance_objective(ch, target), s1, ch, opts);
    CHECK(r.value < 1e-6);
}

TEST_CASE("objective gradients match finite differences") {
    Rng rng(909);
    const ChannelSpec ch = random_channel(rng, 2, 2, 2);
    const CompositionPair comps = random_comps(rng, 2, 2);
    const FeasibleSet s1 = make_s1_set(ch.joint_shape(), comps);
    const FeasibleDomain dom({&s1, 1}, &ch);
    const PiecewiseObjective obj = f2_objective({0.4, 0.6}, ch, 0.1);

    Rng srng(3);
    const JointPair jp = sample_feasible(s1, srng);
    const Vec z = dom.project(dom.pack_pair(jp));
    Vec grad(z.size());
    obj.value_and_grad(dom, z, &grad);

    // central differences along random tangent directions
    for (int t = 0; t < 10; ++t) {
        Vec dir(z.size());
        for (int i = 0; i < dir.size(); ++i) dir[i] = unit_uniform(srng) - 0.5;
        const Vec tangent_dir = dom.tangent(dir).normalized();
        const double h = 1e-6;
        const double fp = obj.value_and_grad(dom, z + h * tangent_dir, nullptr);
        const double fm = obj.value_and_grad(dom, z - h * tangent_dir, nullptr);
        const double fd = (fp - fm) / (2.0 * h);
        CHECK(fd == doctest::Approx(grad.dot(tangent_dir)).epsilon(1e-5));
    }
}
