#include "ifcx/baseline.hpp"

namespace ifcx {

namespace {

// D + I(X1;X2) on the unprimed copy, plus |linear info combo - rate|+ .
PiecewiseObjective clamped_rate_objective(const ChannelSpec& ch, const EntropyComb& rate_comb,
                                          double rate) {
    PiecewiseObjective obj(ch.joint_shape(), ch, 2);
    obj.smooth().add(0, comb_divergence_to_channel());
    obj.smooth().add(0, comb_mi(kX1, kX2));
    BlockComb active(2);
    active.add(0, rate_comb);
    active.constant = -rate;
    BlockComb zero(2);
    obj.max_terms().push_back({active, zero});
    return obj;
}

}  // namespace

PiecewiseObjective baseline_objective_12(const ChannelSpec& ch, double r1, double r2) {
    EntropyComb c = comb_mi(kX1, kY1);
    c.add(comb_mi(kX2, kX1 | kY1));
    return clamped_rate_objective(ch, c, r1 + r2);
}

PiecewiseObjective baseline_objective_1_given_2(const ChannelSpec& ch, double r1) {
    return clamped_rate_objective(ch, comb_mi(kX1, kX2 | kY1), r1);
}

PiecewiseObjective baseline_objective_1(const ChannelSpec& ch, double r1) {
    return clamped_rate_objective(ch, comb_mi(kX1, kY1), r1);
}

BaselineResult baseline_exponents(double r1, double r2, const CompositionPair& comps,
                                  const ChannelSpec& ch, const SolveOptions& opts) {
    if (r1 < 0.0 || r2 < 0.0) throw std::invalid_argument("rates must be nonnegative");
    const FeasibleSet fs = make_single_copy_set(ch.joint_shape(), comps);

    BaselineResult out;
    const auto run = [&](const PiecewiseObjective& obj, double& val, JointDist& arg) {
        const SolveResult r = minimize(obj, fs, ch, opts);
        val = std::max(r.value, 0.0);
        arg = r.argmin.unprimed;
    };
    run(baseline_objective_12(ch, r1, r2), out.e_12, out.argmin_12);
    run(baseline_objective_1_given_2(ch, r1), out.e_1_given_2, out.argmin_1_given_2);
    run(baseline_objective_1(ch, r1), out.e_1, out.argmin_1);
    out.e_b1 = std::max(out.e_1, std::min(out.e_12, out.e_1_given_2));
    return out;
}

}  // namespace ifcx
