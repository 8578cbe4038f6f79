#include "ifcx/solver.hpp"

#include <algorithm>
#include <limits>

namespace ifcx {

namespace {

// Clamp-and-reproject only when the candidate left the positive region;
// plain affine steps already stay in the constraint subspace.
Vec reproject_if_needed(const FeasibleDomain& dom, Vec z) {
    if (z.minCoeff() < dom.floor() * 0.5) z = dom.project(z);
    return z;
}

Vec random_start(const FeasibleDomain& dom, Rng& rng) {
    const int nf = static_cast<int>(dom.free_cells().size());
    Vec z(dom.stacked_size());
    for (int i = 0; i < z.size(); ++i) z[i] = -std::log(1.0 - unit_uniform(rng));
    for (int c = 0; c < dom.copies(); ++c) {
        z.segment(c * nf, nf) /= z.segment(c * nf, nf).sum();
    }
    z = dom.project(z);
    if (z.minCoeff() < 1e-8) z = 0.5 * z + 0.5 * dom.interior_point();
    return z;
}

Vec project_simplex(Vec v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    for (int j = 0; j < n; ++j) {
        cum += u[j];
        const double t = (cum - 1.0) / (j + 1);
        if (u[j] - t > 0.0) tau = t;
    }
    for (int i = 0; i < n; ++i) v[i] = std::max(v[i] - tau, 0.0);
    return v;
}

// Minimum-norm element of the epsilon-active subdifferential, projected
// onto the constraint tangent space: the steepest-descent direction of a
// sum of max terms. With a single active branch per term this reduces to
// the plain projected gradient.
Vec min_norm_direction(const FeasibleDomain& dom, const PiecewiseObjective::BranchEval& bev,
                       double eps_rel) {
    Vec base = dom.tangent(bev.smooth_grad);
    struct Tied {
        std::vector<Vec> tg;
        Vec w;
    };
    std::vector<Tied> tied;
    for (const auto& term : bev.terms) {
        double best = -std::numeric_limits<double>::infinity();
        for (double v : term.values) best = std::max(best, v);
        const double eps = eps_rel * (1.0 + std::abs(best));
        std::vector<std::size_t> act;
        for (std::size_t i = 0; i < term.values.size(); ++i) {
            if (best - term.values[i] <= eps) act.push_back(i);
        }
        if (act.size() == 1) {
            base += dom.tangent(term.grads[act[0]]);
        } else {
            Tied t;
            for (std::size_t i : act) t.tg.push_back(dom.tangent(term.grads[i]));
            t.w = Vec::Constant(static_cast<int>(act.size()),
                                1.0 / static_cast<double>(act.size()));
            tied.push_back(std::move(t));
        }
    }
    if (tied.empty()) return base;

    Vec total = base;
    for (const auto& t : tied) {
        for (int i = 0; i < t.w.size(); ++i) total += t.w[i] * t.tg[i];
    }
    for (int sweep = 0; sweep < 6; ++sweep) {
        for (auto& t : tied) {
            Vec rest = total;
            for (int i = 0; i < t.w.size(); ++i) rest -= t.w[i] * t.tg[i];
            double lip = 0.0;
            for (const auto& g : t.tg) lip += g.squaredNorm();
            const double step = 1.0 / std::max(2.0 * lip, 1e-12);
            for (int it = 0; it < 25; ++it) {
                Vec cur = rest;
                for (int i = 0; i < t.w.size(); ++i) cur += t.w[i] * t.tg[i];
                Vec gw(t.w.size());
                for (int i = 0; i < t.w.size(); ++i) gw[i] = 2.0 * t.tg[i].dot(cur);
                t.w = project_simplex(t.w - step * gw);
            }
            total = rest;
            for (int i = 0; i < t.w.size(); ++i) total += t.w[i] * t.tg[i];
        }
    }
    return total;
}

constexpr double kTieEps = 1e-7;

}  // namespace

DomainSolveResult solve_from(const PiecewiseObjective& obj, const FeasibleDomain& dom,
                             const Vec& start, const SolveOptions& opts) {
    DomainSolveResult res;
    Vec z = reproject_if_needed(dom, start);
    PiecewiseObjective::BranchEval bev = obj.eval_branches(dom, z);
    double f = bev.value;
    Vec d = min_norm_direction(dom, bev, kTieEps);

    double bb_step = 1.0 / std::max(1.0, d.norm());
    Vec z_prev, d_prev;
    int it = 0;
    for (; it < opts.max_iters; ++it) {
        res.kkt_residual = d.cwiseAbs().maxCoeff();
        if (opts.trace) opts.trace(it, f, z);
        if (res.kkt_residual <= opts.grad_tol) {
            res.converged = true;
            break;
        }

        if (z_prev.size() > 0) {
            const Vec dz = z - z_prev;
            const Vec dg = d - d_prev;
            const double den = dz.dot(dg);
            if (den > 1e-300 && std::isfinite(den)) {
                bb_step = std::clamp(dz.dot(dz) / den, 1e-10, 1e3);
            }
        }
        z_prev = z;
        d_prev = d;

        bool accepted = false;
        for (const double eps : {kTieEps, 1e-5, 1e-3}) {
            const Vec dir = (eps == kTieEps) ? d : min_norm_direction(dom, bev, eps);
            const double dn = dir.norm();
            if (dn <= 1e-300) continue;
            double t = (opts.step_rule == StepRule::fixed)
                           ? 0.05
                           : (eps == kTieEps ? bb_step : 1.0 / std::max(1.0, dn));
            const int max_backtracks = (opts.step_rule == StepRule::fixed) ? 1 : 60;
            for (int bt = 0; bt < max_backtracks; ++bt, t *= 0.5) {
                Vec cand = reproject_if_needed(dom, z - t * dir);
                const double fc = obj.value_and_grad(dom, cand, nullptr);
                const double decrease = dir.dot(z - cand);
                if (fc <= f - 1e-4 * std::max(decrease, 0.0) && fc < f) {
                    z = std::move(cand);
                    accepted = true;
                    break;
                }
            }
            if (accepted) break;
        }
        if (!accepted) break;  // no descent at any tie width: stationary

        bev = obj.eval_branches(dom, z);
        f = bev.value;
        d = min_norm_direction(dom, bev, kTieEps);
    }
    res.kkt_residual = d.cwiseAbs().maxCoeff();
    if (res.kkt_residual <= opts.grad_tol) res.converged = true;
    res.value = f;
    res.z = z;
    res.iterations = it;
    return res;
}

DomainSolveResult solve_over_domain(const PiecewiseObjective& obj, const FeasibleDomain& dom,
                                    const SolveOptions& opts, std::span<const Vec> start_hints) {
    std::vector<Vec> starts;
    for (const Vec& h : start_hints) {
        if (h.size() == dom.stacked_size()) starts.push_back(h);
    }
    const int want = std::max(1, opts.restarts);
    if (static_cast<int>(starts.size()) < want || starts.empty()) {
        starts.push_back(dom.interior_point());
    }
    Rng rng(derive_seed(opts.seed, 0xd0ab17));
    while (static_cast<int>(starts.size()) < want) {
        starts.push_back(random_start(dom, rng));
    }

    DomainSolveResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const Vec& s : starts) {
        DomainSolveResult r = solve_from(obj, dom, s, opts);
        if (r.value < best.value) best = std::move(r);
    }
    return best;
}

SolveResult minimize(const PiecewiseObjective& objective, const FeasibleSet& fs,
                     const ChannelSpec& ch, const SolveOptions& opts) {
    FeasibleDomain dom({&fs, 1}, &ch, opts.interior_floor);
    const DomainSolveResult r = solve_over_domain(objective, dom, opts);
    SolveResult out;
    out.value = r.value;
    out.argmin = dom.unpack_pair(r.z);
    out.converged = r.converged;
    out.iterations = r.iterations;
    out.kkt_residual = r.kkt_residual;
    return out;
}

double oracle_minimize_domain(const PiecewiseObjective& objective, const FeasibleDomain& dom,
                              int restarts, std::uint64_t seed) {
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, restarts); ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        Vec z = (r == 0) ? dom.interior_point() : random_start(dom, rng);
        Vec grad(z.size());
        double fbest = objective.value_and_grad(dom, z, &grad);
        Vec zbest = z;
        const int max_iters = 4000;
        for (int k = 0; k < max_iters; ++k) {
            objective.value_and_grad(dom, z, &grad);
            const Vec gt = dom.tangent(grad);
            if (gt.cwiseAbs().maxCoeff() <= 1e-6) break;
            const double t = 0.25 / std::sqrt(static_cast<double>(k) + 4.0);
            z = reproject_if_needed(dom, z - (t / std::max(1.0, gt.norm())) * gt);
            const double f = objective.value_and_grad(dom, z, nullptr);
            if (f < fbest) {
                fbest = f;
                zbest = z;
            }
        }
        // Polish from the best visited point with a short monotone phase.
        Vec z2 = zbest;
        for (int k = 0; k < 400; ++k) {
            objective.value_and_grad(dom, z2, &grad);
            const Vec gt = dom.tangent(grad);
            if (gt.cwiseAbs().maxCoeff() <= 1e-6) break;
            double t = 0.5 / std::max(1.0, gt.norm());
            bool moved = false;
            for (int bt = 0; bt < 40; ++bt, t *= 0.5) {
                const Vec cand = reproject_if_needed(dom, z2 - t * gt);
                const double fc = objective.value_and_grad(dom, cand, nullptr);
                if (fc < fbest - 1e-15) {
                    z2 = cand;
                    fbest = fc;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        best = std::min(best, fbest);
    }
    return best;
}

double oracle_minimize(const PiecewiseObjective& objective, const FeasibleSet& fs,
                       const ChannelSpec& ch, int restarts, std::uint64_t seed) {
    FeasibleDomain dom({&fs, 1}, &ch);
    return oracle_minimize_domain(objective, dom, restarts, seed);
}

}  // namespace ifcx
