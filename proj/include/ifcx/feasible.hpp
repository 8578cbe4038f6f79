#pragma once

#include "ifcx/channel.hpp"
#include "ifcx/info.hpp"
#include "ifcx/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ifcx {

// Coupling between the two copies of a joint-distribution pair.
//   none       -- unlinked copies (single-copy baseline problems)
//   y_marginal -- P_{Y1} = P_{Y1'}   (the set S1)
//   x2y_joint  -- P_{X2,Y1} = P_{X2',Y1'}   (the set S2)
enum class Coupling { none, y_marginal, x2y_joint };

struct FeasibleSet {
    JointShape shape;
    CompositionPair comps;
    Coupling coupling = Coupling::none;
    // S2's rate condition R2 <= I(X2;Y1), checked but never projected.
    std::optional<double> r2_rate;
};

FeasibleSet make_s1_set(const JointShape& shape, const CompositionPair& comps);
FeasibleSet make_s2_set(const JointShape& shape, const CompositionPair& comps,
                        std::optional<double> r2_rate = std::nullopt);
FeasibleSet make_single_copy_set(const JointShape& shape, const CompositionPair& comps);

struct FeasibilityReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// True iff every linear constraint of fs holds within tol and (if flagged)
// R2 <= I(X2;Y1) + tol. The report names each violated constraint.
FeasibilityReport check_feasible(const JointPair& jp, const FeasibleSet& fs, double tol);

// Affine-equality domain for a stack of joint-distribution copies.
// Blocks of two copies each; block k holds copies 2k (unprimed) and 2k+1
// (primed) constrained by the k-th FeasibleSet. Cells with pinned == true
// are fixed at zero and removed from the optimization coordinates.
class FeasibleDomain {
public:
    // pin_channel, when given, additionally pins cells with q1(y|x1,x2) = 0.
    FeasibleDomain(std::span<const FeasibleSet> blocks, const ChannelSpec* pin_channel,
                   double interior_floor = 1e-12);

    int copies() const { return copies_; }
    const JointShape& shape() const { return shape_; }
    const std::vector<int>& free_cells() const { return free_cells_; }
    int stacked_size() const { return copies_ * static_cast<int>(free_cells_.size()); }
    double floor() const { return floor_; }

    // Strictly positive feasible point (product-through-channel when a pin
    // channel was given, projected uniform otherwise).
    const Vec& interior_point() const { return interior_; }

    // Orthogonal projection onto the affine subspace {z : Az = b}.
    Vec affine_project(const Vec& z) const;

    // Affine projection followed by the positivity-floor / renormalize loop.
    Vec project(const Vec& z) const;

    // Component of g tangent to the affine subspace.
    Vec tangent(const Vec& g) const;

    double constraint_violation(const Vec& z) const;

    // Stacked free coordinates <-> full per-copy distributions.
    Vec pack(std::span<const Vec> ps) const;
    std::vector<Vec> unpack(const Vec& z) const;

    JointPair unpack_pair(const Vec& z, int block = 0) const;
    Vec pack_pair(const JointPair& jp) const;

    // Per-mask indices of each free cell within the mask's marginal.
    const std::vector<int>& marginal_index(unsigned mask) const { return sub_idx_[mask]; }

private:
    JointShape shape_;
    int copies_ = 0;
    double floor_ = 1e-12;
    std::vector<int> free_cells_;
    Mat a_;
    Vec b_;
    Mat null_proj_;   // orthogonal projector onto null(A)
    Vec particular_;  // least-norm solution of Az = b
    Vec interior_;
    std::array<std::vector<int>, 8> sub_idx_;
};

// Euclidean projection of jp onto the affine constraints of fs, shifted
// back to positivity by the interior-floor rule. Throws on an empty
// (inconsistent) feasible set. The S2 rate condition is not enforced here.
JointPair project_feasible(const JointPair& jp, const FeasibleSet& fs);

// Strictly positive feasible pair; deterministic in the generator state.
JointPair sample_feasible(const FeasibleSet& fs, Rng& rng);

}  // namespace ifcx
