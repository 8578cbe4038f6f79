#pragma once

#include "ifcx/channel.hpp"
#include "ifcx/feasible.hpp"
#include "ifcx/types.hpp"

#include <array>
#include <functional>
#include <vector>

namespace ifcx {

// Affine functional of one joint distribution:
//   sum over variable subsets S of h[S] * H(P_S)  +  elogq * E_P[log q1].
// Index h by the subset mask (1..7); h[0] is unused.
struct EntropyComb {
    std::array<double, 8> h{};
    double elogq = 0.0;

    EntropyComb& add(unsigned mask, double coef) {
        h[mask] += coef;
        return *this;
    }
    EntropyComb& add(const EntropyComb& other, double scale = 1.0) {
        for (int m = 1; m < 8; ++m) h[m] += scale * other.h[m];
        elogq += scale * other.elogq;
        return *this;
    }
};

// Common building blocks, all per single copy.
EntropyComb comb_neg_cond_entropy_y_given_x1();  // -H(Y1|X1)
EntropyComb comb_mi(unsigned a, unsigned b);     // I(A;B)
EntropyComb comb_divergence_to_channel();        // D(P_{Y|X1X2} || q1 | P_{X1X2})
EntropyComb comb_elogq();                        // E_P[log q1]

// Affine functional of a stack of joint copies.
struct BlockComb {
    std::vector<EntropyComb> blocks;
    double constant = 0.0;

    explicit BlockComb(int copies = 0) : blocks(copies) {}
    BlockComb& add(int copy, const EntropyComb& c, double scale = 1.0) {
        blocks[copy].add(c, scale);
        return *this;
    }
};

// Objective of the form  smooth + sum_k max over branches of max_terms[k],
// every piece a BlockComb. Piecewise smooth; the gradient uses the active
// branch of each max (exact ties go to the first-listed branch, near ties
// average the tied branch gradients, which is still a valid subgradient).
class PiecewiseObjective {
public:
    PiecewiseObjective(JointShape shape, const ChannelSpec& ch, int copies);

    int copies() const { return copies_; }
    const JointShape& joint_shape() const { return shape_; }

    BlockComb& smooth() { return smooth_; }
    std::vector<std::vector<BlockComb>>& max_terms() { return max_terms_; }
    const std::vector<std::vector<BlockComb>>& max_terms() const { return max_terms_; }

    // Optional smooth term outside the entropy algebra; receives full
    // per-copy distributions and accumulates per-copy gradients when asked.
    using ExtraTerm = std::function<double(std::span<const Vec>, std::vector<Vec>*)>;
    void set_extra_term(ExtraTerm f) { extra_ = std::move(f); }

    // Value from full per-copy distributions; +inf if a q1-null cell is charged.
    double value(std::span<const Vec> ps) const;

    // Value and gradient in the domain's stacked free coordinates.
    double value_and_grad(const FeasibleDomain& dom, const Vec& z, Vec* grad) const;

    // Per-branch decomposition at z: the smooth gradient plus every max
    // term's branch values and branch gradients. Lets the solver form
    // minimum-norm subgradient directions at branch-tie points.
    struct BranchEval {
        double value = 0.0;
        Vec smooth_grad;
        struct Term {
            std::vector<double> values;
            std::vector<Vec> grads;
        };
        std::vector<Term> terms;
    };
    BranchEval eval_branches(const FeasibleDomain& dom, const Vec& z) const;

private:
    struct CopyEval;
    double comb_value(const BlockComb& c, std::span<const CopyEval> evals) const;
    void compute_evals(const FeasibleDomain& dom, const Vec& z,
                       std::vector<CopyEval>& evals) const;
    void add_comb_grad(const FeasibleDomain& dom, const BlockComb& c,
                       std::span<const CopyEval> evals, Vec& grad) const;
    double add_extra(const FeasibleDomain& dom, const Vec& z, Vec* grad) const;

    JointShape shape_;
    int copies_;
    Vec logq_;  // per-cell log q1; -inf on null cells
    BlockComb smooth_;
    std::vector<std::vector<BlockComb>> max_terms_;
    ExtraTerm extra_;
};

}  // namespace ifcx
