#include "ifcx/exponent.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <stdexcept>

namespace ifcx {

namespace {

void require_params(const GallagerParams& gp) {
    if (!(gp.rho >= 0.0 && gp.rho <= 1.0 && gp.lambda >= 0.0 && gp.lambda <= 1.0)) {
        throw std::invalid_argument("(rho, lambda) must lie in [0,1]^2");
    }
}

double eval_pair(const PiecewiseObjective& obj, const JointPair& jp) {
    const Vec ps[2] = {jp.unprimed.p, jp.primed.p};
    return obj.value(std::span<const Vec>(ps, 2));
}

}  // namespace

std::string branch_name(Branch b) {
    switch (b) {
        case Branch::S1: return "S1";
        case Branch::S2: return "S2";
        case Branch::S2_dominated_by_S1: return "S2-dominated-by-S1";
    }
    return "?";
}

double g_term(const GallagerParams& gp, const JointPair& jp, const ChannelSpec& ch) {
    require_params(gp);
    const double rl = gp.rho * gp.lambda;
    return -(1.0 - rl) * expected_log_channel(jp.unprimed, ch) -
           rl * expected_log_channel(jp.primed, ch);
}

PiecewiseObjective f1_objective(const GallagerParams& gp, const ChannelSpec& ch, double r2) {
    require_params(gp);
    const double rho = gp.rho, rl = gp.rho * gp.lambda;
    PiecewiseObjective obj(ch.joint_shape(), ch, 2);

    // g - H(Y1|X1) + rho I(X1';Y1')
    obj.smooth().add(0, comb_elogq(), -(1.0 - rl));
    obj.smooth().add(1, comb_elogq(), -rl);
    obj.smooth().add(0, comb_neg_cond_entropy_y_given_x1());
    obj.smooth().add(1, comb_mi(kX1, kY1), rho);

    // max{ I(X2;X1,Y1) - R2 ; (1 - rho lambda)(I(X2;X1,Y1) - R2) }
    {
        const EntropyComb mi = comb_mi(kX2, kX1 | kY1);
        BlockComb b1(2);
        b1.add(0, mi);
        b1.constant = -r2;
        BlockComb b2(2);
        b2.add(0, mi, 1.0 - rl);
        b2.constant = -(1.0 - rl) * r2;
        obj.max_terms().push_back({b1, b2});
    }
    // max{ (1-rho) I(X2';Y1') + rho I(X2';X1',Y1') - R2 ;
    //      rho (I(X2';X1',Y1') - R2) ; rho lambda (I(X2';X1',Y1') - R2) }
    {
        const EntropyComb mi_y = comb_mi(kX2, kY1);
        const EntropyComb mi_x1y = comb_mi(kX2, kX1 | kY1);
        BlockComb b1(2);
        b1.add(1, mi_y, 1.0 - rho);
        b1.add(1, mi_x1y, rho);
        b1.constant = -r2;
        BlockComb b2(2);
        b2.add(1, mi_x1y, rho);
        b2.constant = -rho * r2;
        BlockComb b3(2);
        b3.add(1, mi_x1y, rl);
        b3.constant = -rl * r2;
        obj.max_terms().push_back({b1, b2, b3});
    }
    return obj;
}

PiecewiseObjective f2_objective(const GallagerParams& gp, const ChannelSpec& ch, double r2) {
    require_params(gp);
    const double rho = gp.rho, rl = gp.rho * gp.lambda;
    PiecewiseObjective obj(ch.joint_shape(), ch, 2);
    obj.smooth().add(0, comb_elogq(), -(1.0 - rl));
    obj.smooth().add(1, comb_elogq(), -rl);
    obj.smooth().add(0, comb_neg_cond_entropy_y_given_x1());
    obj.smooth().add(1, comb_mi(kX1, kX2 | kY1), rho);
    obj.smooth().add(0, comb_mi(kX2, kX1 | kY1));
    obj.smooth().constant = -r2;
    return obj;
}

double f1(const GallagerParams& gp, const JointPair& jp, const ChannelSpec& ch, double r2) {
    return eval_pair(f1_objective(gp, ch, r2), jp);
}

double f2(const GallagerParams& gp, const JointPair& jp, const ChannelSpec& ch, double r2) {
    return eval_pair(f2_objective(gp, ch, r2), jp);
}

namespace {

// Inner solves reused across the (rho, lambda) search, with warm starts.
struct InnerSolver {
    const ChannelSpec& ch;
    const CompositionPair& comps;
    double r2;
    FeasibleSet fs_s1;
    FeasibleSet fs_s2_relaxed;
    FeasibleDomain dom_s1;
    FeasibleDomain dom_s2;
    Vec warm_s1, warm_s2;
    SolveOptions opts;

    InnerSolver(const ChannelSpec& ch_, const CompositionPair& comps_, double r2_,
                const SolveOptions& opts_)
        : ch(ch_),
          comps(comps_),
          r2(r2_),
          fs_s1(make_s1_set(ch_.joint_shape(), comps_)),
          fs_s2_relaxed(make_s2_set(ch_.joint_shape(), comps_)),
          dom_s1({&fs_s1, 1}, &ch_, opts_.interior_floor),
          dom_s2({&fs_s2_relaxed, 1}, &ch_, opts_.interior_floor),
          opts(opts_) {}

    ExponentResult evaluate(const RatePair& rates, const GallagerParams& gp) {
        const PiecewiseObjective obj1 = f1_objective(gp, ch, r2);
        const PiecewiseObjective obj2 = f2_objective(gp, ch, r2);

        const DomainSolveResult r1 =
            solve_over_domain(obj1, dom_s1, opts, {&warm_s1, warm_s1.size() > 0 ? 1u : 0u});
        const DomainSolveResult r2res =
            solve_over_domain(obj2, dom_s2, opts, {&warm_s2, warm_s2.size() > 0 ? 1u : 0u});
        warm_s1 = r1.z;
        warm_s2 = r2res.z;

        ExponentResult out;
        out.best_params = gp;
        out.min_s1_f1 = r1.value;
        out.min_s2_f2_relaxed = r2res.value;

        const JointPair argmin2 = dom_s2.unpack_pair(r2res.z);
        const double i_x2_y = mutual_info(argmin2.unprimed, kX2, kY1);
        out.rate_condition_held = (r2 <= i_x2_y + 1e-8);

        double m = r1.value;
        out.branch = Branch::S1;
        out.argmin = dom_s1.unpack_pair(r1.z);
        if (out.rate_condition_held) {
            if (r2res.value < r1.value) {
                m = r2res.value;
                out.branch = Branch::S2;
                out.argmin = argmin2;
            }
        } else {
            out.branch = (r1.value <= r2res.value) ? Branch::S1 : Branch::S2_dominated_by_S1;
        }
        out.value = rates.r2 - gp.rho * rates.r1 + m;
        return out;
    }
};

}  // namespace

ExponentResult exponent_fixed(const RatePair& rates, const CompositionPair& comps,
                              const GallagerParams& gp, const ChannelSpec& ch,
                              const SolveOptions& opts) {
    if (rates.r1 < 0.0 || rates.r2 < 0.0) throw std::invalid_argument("rates must be nonnegative");
    InnerSolver solver(ch, comps, rates.r2, opts);
    return solver.evaluate(rates, gp);
}

ExponentResult exponent_optimized(const RatePair& rates, const CompositionPair& comps,
                                  const ChannelSpec& ch) {
    SolveOptions opts;
    opts.restarts = 1;  // convex inner problems; warm starts carry the search
    InnerSolver solver(ch, comps, rates.r2, opts);

    ExponentResult best;
    best.value = -std::numeric_limits<double>::infinity();
    const auto consider = [&](double rho, double lambda) {
        const ExponentResult r = solver.evaluate(rates, {rho, lambda});
        if (r.value > best.value) best = r;
    };

    const int n_coarse = 21;
    double step = 1.0 / (n_coarse - 1);
    for (int i = 0; i < n_coarse; ++i) {
        for (int j = 0; j < n_coarse; ++j) consider(i * step, j * step);
    }
    for (int round = 0; round < 2; ++round) {
        const double fine = step / 5.0;
        const GallagerParams c = best.best_params;
        for (int i = -5; i <= 5; ++i) {
            for (int j = -5; j <= 5; ++j) {
                const double rho = c.rho + i * fine;
                const double lambda = c.lambda + j * fine;
                if (rho < -1e-12 || rho > 1.0 + 1e-12 || lambda < -1e-12 || lambda > 1.0 + 1e-12)
                    continue;
                if (i == 0 && j == 0) continue;
                consider(std::clamp(rho, 0.0, 1.0), std::clamp(lambda, 0.0, 1.0));
            }
        }
        step = fine;
    }
    return best;
}

ExponentResult exponent_user2(const RatePair& rates, const CompositionPair& comps,
                              const ChannelSpec& ch) {
    const ChannelSpec swapped = swap_users(ch);
    const CompositionPair swapped_comps{comps.q2_comp, comps.q1_comp};
    const RatePair swapped_rates{rates.r2, rates.r1};
    return exponent_optimized(swapped_rates, swapped_comps, swapped);
}

std::vector<Vec> composition_grid(int n, double step) {
    const double kf = 1.0 / step;
    const int k = static_cast<int>(std::lround(kf));
    if (std::abs(kf - k) > 1e-9 || k < 1) {
        throw std::invalid_argument("grid_step must divide 1");
    }
    std::vector<Vec> out;
    Vec cur = Vec::Zero(n);
    const std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == n - 1) {
            cur[pos] = static_cast<double>(remaining) / k;
            out.push_back(cur);
            return;
        }
        for (int take = 0; take <= remaining; ++take) {
            cur[pos] = static_cast<double>(take) / k;
            rec(pos + 1, remaining - take);
        }
    };
    rec(0, k);
    return out;
}

MaxminResult maxmin_over_comps(const RatePair& rates, const ChannelSpec& ch, double grid_step,
                               int jobs) {
    const std::vector<Vec> grid1 = composition_grid(ch.x1_size, grid_step);
    const std::vector<Vec> grid2 = composition_grid(ch.x2_size, grid_step);

    struct Entry {
        double e1, e2;
    };
    const int total = static_cast<int>(grid1.size() * grid2.size());
    std::vector<Entry> entries(total);

    const auto compute = [&](int idx) {
        const CompositionPair comps{grid1[idx / grid2.size()], grid2[idx % grid2.size()]};
        const double e1 = exponent_optimized(rates, comps, ch).value;
        const double e2 = exponent_user2(rates, comps, ch).value;
        return Entry{e1, e2};
    };

    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (int i = 0; i < total; ++i) entries[i] = compute(i);
    } else {
        std::vector<std::future<void>> futs;
        std::atomic<int> next{0};
        for (int w = 0; w < jobs; ++w) {
            futs.push_back(std::async(std::launch::async, [&]() {
                int i;
                while ((i = next.fetch_add(1)) < total) entries[i] = compute(i);
            }));
        }
        for (auto& f : futs) f.get();
    }

    MaxminResult best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < total; ++i) {  // ordered reduction: deterministic
        const double v = std::min(entries[i].e1, entries[i].e2);
        if (v > best.value) {
            best.value = v;
            best.e_r1 = entries[i].e1;
            best.e_r2 = entries[i].e2;
            best.comps = {grid1[i / grid2.size()], grid2[i % grid2.size()]};
        }
    }
    return best;
}

}  // namespace ifcx
