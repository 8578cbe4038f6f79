#include "ifcx/objective.hpp"

#include <limits>

namespace ifcx {

EntropyComb comb_neg_cond_entropy_y_given_x1() {
    // -H(Y1|X1) = H(X1) - H(X1,Y1)
    EntropyComb c;
    c.add(kX1, 1.0).add(kX1 | kY1, -1.0);
    return c;
}

EntropyComb comb_mi(unsigned a, unsigned b) {
    // I(A;B) = H(A) + H(B) - H(A,B)
    EntropyComb c;
    c.add(a, 1.0).add(b, 1.0).add(a | b, -1.0);
    return c;
}

EntropyComb comb_divergence_to_channel() {
    // D = -H(Y1|X1,X2) - E[log q1] = H(X1,X2) - H(X1,X2,Y1) - E[log q1]
    EntropyComb c;
    c.add(kX1 | kX2, 1.0).add(kAll, -1.0);
    c.elogq = -1.0;
    return c;
}

EntropyComb comb_elogq() {
    EntropyComb c;
    c.elogq = 1.0;
    return c;
}

PiecewiseObjective::PiecewiseObjective(JointShape shape, const ChannelSpec& ch, int copies)
    : shape_(shape), copies_(copies), smooth_(copies) {
    logq_.resize(shape_.size());
    for (int i = 0; i < logq_.size(); ++i) {
        const double q = ch.q1(ch.row(shape_.x1_of(i), shape_.x2_of(i)), shape_.y_of(i));
        logq_[i] = q > 0.0 ? std::log(q) : -std::numeric_limits<double>::infinity();
    }
}

struct PiecewiseObjective::CopyEval {
    std::array<Vec, 8> marg;
    std::array<double, 8> ent{};
    double elogq = 0.0;
};

double PiecewiseObjective::comb_value(const BlockComb& c, std::span<const CopyEval> evals) const {
    double v = c.constant;
    for (int k = 0; k < copies_; ++k) {
        const auto& cb = c.blocks[k];
        for (int m = 1; m < 8; ++m) {
            if (cb.h[m] != 0.0) v += cb.h[m] * evals[k].ent[m];
        }
        if (cb.elogq != 0.0) v += cb.elogq * evals[k].elogq;
    }
    return v;
}

double PiecewiseObjective::value(std::span<const Vec> ps) const {
    std::vector<CopyEval> evals(copies_);
    for (int k = 0; k < copies_; ++k) {
        for (int m = 1; m < 8; ++m) {
            evals[k].marg[m] = marginal(ps[k], shape_, static_cast<unsigned>(m));
            evals[k].ent[m] = entropy(evals[k].marg[m]);
        }
        double e = 0.0;
        for (int i = 0; i < ps[k].size(); ++i) {
            if (ps[k][i] > 0.0) {
                if (std::isinf(logq_[i])) return std::numeric_limits<double>::infinity();
                e += ps[k][i] * logq_[i];
            }
        }
        evals[k].elogq = e;
    }
    double v = comb_value(smooth_, evals);
    for (const auto& branches : max_terms_) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& br : branches) best = std::max(best, comb_value(br, evals));
        v += best;
    }
    if (extra_) v += extra_(ps, nullptr);
    return v;
}

namespace {

unsigned used_masks(const BlockComb& c) {
    unsigned used = 0;
    for (const auto& blk : c.blocks) {
        for (int m = 1; m < 8; ++m) {
            if (blk.h[m] != 0.0) used |= 1u << m;
        }
    }
    return used;
}

}  // namespace

void PiecewiseObjective::compute_evals(const FeasibleDomain& dom, const Vec& z,
                                       std::vector<CopyEval>& evals) const {
    const auto& cells = dom.free_cells();
    const int nf = static_cast<int>(cells.size());
    unsigned used = used_masks(smooth_);
    for (const auto& branches : max_terms_) {
        for (const auto& br : branches) used |= used_masks(br);
    }
    evals.assign(copies_, CopyEval{});
    for (int k = 0; k < copies_; ++k) {
        double e = 0.0;
        for (int f = 0; f < nf; ++f) e += z[k * nf + f] * logq_[cells[f]];
        evals[k].elogq = e;
        for (int m = 1; m < 8; ++m) {
            if (!(used & (1u << m))) continue;
            Vec& marg = evals[k].marg[m];
            marg = Vec::Zero(shape_.subset_size(static_cast<unsigned>(m)));
            const auto& map = dom.marginal_index(static_cast<unsigned>(m));
            for (int f = 0; f < nf; ++f) marg[map[f]] += z[k * nf + f];
            evals[k].ent[m] = entropy(marg);
        }
    }
}

void PiecewiseObjective::add_comb_grad(const FeasibleDomain& dom, const BlockComb& c,
                                       std::span<const CopyEval> evals, Vec& grad) const {
    const auto& cells = dom.free_cells();
    const int nf = static_cast<int>(cells.size());
    for (int k = 0; k < copies_; ++k) {
        const auto& cb = c.blocks[k];
        for (int m = 1; m < 8; ++m) {
            if (cb.h[m] == 0.0) continue;
            const auto& map = dom.marginal_index(static_cast<unsigned>(m));
            const Vec& marg = evals[k].marg[m];
            const double coef = cb.h[m];
            for (int f = 0; f < nf; ++f) {
                // dH(P_S)/dP(cell) = -(log P_S + 1); iterates stay above the
                // interior floor, so the marginal is positive
                grad[k * nf + f] -= coef * (std::log(std::max(marg[map[f]], 1e-300)) + 1.0);
            }
        }
        if (cb.elogq != 0.0) {
            for (int f = 0; f < nf; ++f) grad[k * nf + f] += cb.elogq * logq_[cells[f]];
        }
    }
}

double PiecewiseObjective::add_extra(const FeasibleDomain& dom, const Vec& z, Vec* grad) const {
    if (!extra_) return 0.0;
    const auto& cells = dom.free_cells();
    const int nf = static_cast<int>(cells.size());
    std::vector<Vec> fulls(copies_, Vec::Zero(shape_.size()));
    for (int k = 0; k < copies_; ++k) {
        for (int f = 0; f < nf; ++f) fulls[k][cells[f]] = z[k * nf + f];
    }
    if (!grad) return extra_(fulls, nullptr);
    std::vector<Vec> extra_grads(copies_, Vec::Zero(shape_.size()));
    const double v = extra_(fulls, &extra_grads);
    for (int k = 0; k < copies_; ++k) {
        for (int f = 0; f < nf; ++f) (*grad)[k * nf + f] += extra_grads[k][cells[f]];
    }
    return v;
}

double PiecewiseObjective::value_and_grad(const FeasibleDomain& dom, const Vec& z,
                                          Vec* grad) const {
    std::vector<CopyEval> evals;
    compute_evals(dom, z, evals);

    double value = comb_value(smooth_, evals);
    if (grad) {
        grad->setZero(z.size());
        add_comb_grad(dom, smooth_, evals, *grad);
    }
    for (const auto& branches : max_terms_) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t first_best = 0;
        for (std::size_t i = 0; i < branches.size(); ++i) {
            const double v = comb_value(branches[i], evals);
            if (v > best) {
                best = v;
                first_best = i;
            }
        }
        value += best;
        if (grad) add_comb_grad(dom, branches[first_best], evals, *grad);
    }
    value += add_extra(dom, z, grad);
    return value;
}

PiecewiseObjective::BranchEval PiecewiseObjective::eval_branches(const FeasibleDomain& dom,
                                                                 const Vec& z) const {
    std::vector<CopyEval> evals;
    compute_evals(dom, z, evals);

    BranchEval out;
    out.smooth_grad = Vec::Zero(z.size());
    out.value = comb_value(smooth_, evals);
    add_comb_grad(dom, smooth_, evals, out.smooth_grad);
    out.value += add_extra(dom, z, &out.smooth_grad);

    out.terms.resize(max_terms_.size());
    for (std::size_t t = 0; t < max_terms_.size(); ++t) {
        const auto& branches = max_terms_[t];
        auto& term = out.terms[t];
        term.values.resize(branches.size());
        term.grads.resize(branches.size());
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < branches.size(); ++i) {
            term.values[i] = comb_value(branches[i], evals);
            term.grads[i] = Vec::Zero(z.size());
            add_comb_grad(dom, branches[i], evals, term.grads[i]);
            best = std::max(best, term.values[i]);
        }
        out.value += best;
    }
    return out;
}

}  // namespace ifcx
