#include "ifcx/feasible.hpp"

#include <sstream>
#include <stdexcept>

namespace ifcx {

namespace {

constexpr double kConsistencyTol = 1e-7;

void require_shapes(const JointPair& jp, const FeasibleSet& fs) {
    if (jp.unprimed.shape != fs.shape || jp.primed.shape != fs.shape) {
        throw std::invalid_argument("joint pair shape does not match feasible set");
    }
}

}  // namespace

FeasibleSet make_s1_set(const JointShape& shape, const CompositionPair& comps) {
    return {shape, comps, Coupling::y_marginal, std::nullopt};
}

FeasibleSet make_s2_set(const JointShape& shape, const CompositionPair& comps,
                        std::optional<double> r2_rate) {
    return {shape, comps, Coupling::x2y_joint, r2_rate};
}

FeasibleSet make_single_copy_set(const JointShape& shape, const CompositionPair& comps) {
    return {shape, comps, Coupling::none, std::nullopt};
}

FeasibilityReport check_feasible(const JointPair& jp, const FeasibleSet& fs, double tol) {
    require_shapes(jp, fs);
    FeasibilityReport rep;
    const auto flag = [&](const std::string& what, double magnitude) {
        std::ostringstream msg;
        msg << what << " violated by " << magnitude;
        rep.ok = false;
        rep.violations.push_back(msg.str());
    };

    const auto check_copy = [&](const JointDist& j, const char* tag) {
        const double total = j.p.sum();
        if (std::abs(total - 1.0) > tol) flag(std::string(tag) + " normalization", std::abs(total - 1.0));
        if (j.p.minCoeff() < -tol) flag(std::string(tag) + " nonnegativity", -j.p.minCoeff());
        const Vec m1 = marginal(j.p, j.shape, kX1);
        const Vec m2 = marginal(j.p, j.shape, kX2);
        const double d1 = (m1 - fs.comps.q1_comp).cwiseAbs().maxCoeff();
        const double d2 = (m2 - fs.comps.q2_comp).cwiseAbs().maxCoeff();
        if (d1 > tol) flag(std::string(tag) + " X1 marginal = Q1", d1);
        if (d2 > tol) flag(std::string(tag) + " X2 marginal = Q2", d2);
    };
    check_copy(jp.unprimed, "unprimed");
    check_copy(jp.primed, "primed");

    if (fs.coupling == Coupling::y_marginal) {
        const Vec yu = marginal(jp.unprimed.p, fs.shape, kY1);
        const Vec yp = marginal(jp.primed.p, fs.shape, kY1);
        const double d = (yu - yp).cwiseAbs().maxCoeff();
        if (d > tol) flag("Y1 marginal equality", d);
    } else if (fs.coupling == Coupling::x2y_joint) {
        const Vec ju = marginal(jp.unprimed.p, fs.shape, kX2 | kY1);
        const Vec jpm = marginal(jp.primed.p, fs.shape, kX2 | kY1);
        const double d = (ju - jpm).cwiseAbs().maxCoeff();
        if (d > tol) flag("(X2,Y1) joint equality", d);
    }

    if (fs.r2_rate) {
        const double i = mutual_info(jp.unprimed, kX2, kY1);
        if (*fs.r2_rate > i + tol) flag("rate condition R2 <= I(X2;Y1)", *fs.r2_rate - i);
    }
    return rep;
}

FeasibleDomain::FeasibleDomain(std::span<const FeasibleSet> blocks,
                               const ChannelSpec* pin_channel, double interior_floor)
    : floor_(interior_floor) {
    if (blocks.empty()) throw std::invalid_argument("domain needs at least one feasible set");
    shape_ = blocks[0].shape;
    for (const auto& fs : blocks) {
        if (fs.shape != shape_) {
            throw std::invalid_argument("all feasible-set blocks must share one shape");
        }
    }
    copies_ = 2 * static_cast<int>(blocks.size());

    const int d = shape_.size();
    // Cells pinned by composition zeros or by q1-null support.
    std::vector<bool> pinned(d, false);
    const auto& comps = blocks[0].comps;
    for (int i = 0; i < d; ++i) {
        const int x1 = shape_.x1_of(i), x2 = shape_.x2_of(i), y = shape_.y_of(i);
        if (comps.q1_comp[x1] == 0.0 || comps.q2_comp[x2] == 0.0) pinned[i] = true;
        if (pin_channel && pin_channel->q1(pin_channel->row(x1, x2), y) == 0.0) pinned[i] = true;
    }
    for (const auto& fs : blocks) {
        if ((fs.comps.q1_comp - comps.q1_comp).cwiseAbs().maxCoeff() > 0 ||
            (fs.comps.q2_comp - comps.q2_comp).cwiseAbs().maxCoeff() > 0) {
            throw std::invalid_argument("feasible-set blocks must share compositions");
        }
    }
    for (int i = 0; i < d; ++i) {
        if (!pinned[i]) free_cells_.push_back(i);
    }
    const int nf = static_cast<int>(free_cells_.size());

    // Rows: per copy, X1-marginal = Q1 and X2-marginal = Q2 (normalization is
    // implied since both compositions sum to one); per block, the coupling.
    int rows = 0;
    for (const auto& fs : blocks) {
        rows += 2 * (shape_.nx1 + shape_.nx2);
        if (fs.coupling == Coupling::y_marginal) rows += shape_.ny;
        if (fs.coupling == Coupling::x2y_joint) rows += shape_.nx2 * shape_.ny;
    }
    a_ = Mat::Zero(rows, copies_ * nf);
    b_ = Vec::Zero(rows);

    int r = 0;
    const auto col = [&](int copy, int f) { return copy * nf + f; };
    for (std::size_t blk = 0; blk < blocks.size(); ++blk) {
        const auto& fs = blocks[blk];
        for (int c = 0; c < 2; ++c) {
            const int copy = 2 * static_cast<int>(blk) + c;
            for (int x1 = 0; x1 < shape_.nx1; ++x1, ++r) {
                b_[r] = fs.comps.q1_comp[x1];
                for (int f = 0; f < nf; ++f) {
                    if (shape_.x1_of(free_cells_[f]) == x1) a_(r, col(copy, f)) = 1.0;
                }
            }
            for (int x2 = 0; x2 < shape_.nx2; ++x2, ++r) {
                b_[r] = fs.comps.q2_comp[x2];
                for (int f = 0; f < nf; ++f) {
                    if (shape_.x2_of(free_cells_[f]) == x2) a_(r, col(copy, f)) = 1.0;
                }
            }
        }
        const int cu = 2 * static_cast<int>(blk);
        if (fs.coupling == Coupling::y_marginal) {
            for (int y = 0; y < shape_.ny; ++y, ++r) {
                for (int f = 0; f < nf; ++f) {
                    if (shape_.y_of(free_cells_[f]) == y) {
                        a_(r, col(cu, f)) = 1.0;
                        a_(r, col(cu + 1, f)) = -1.0;
                    }
                }
            }
        } else if (fs.coupling == Coupling::x2y_joint) {
            for (int x2 = 0; x2 < shape_.nx2; ++x2) {
                for (int y = 0; y < shape_.ny; ++y, ++r) {
                    for (int f = 0; f < nf; ++f) {
                        if (shape_.x2_of(free_cells_[f]) == x2 &&
                            shape_.y_of(free_cells_[f]) == y) {
                            a_(r, col(cu, f)) = 1.0;
                            a_(r, col(cu + 1, f)) = -1.0;
                        }
                    }
                }
            }
        }
    }
    const auto cod = a_.completeOrthogonalDecomposition();
    const Mat pinv = cod.pseudoInverse();
    null_proj_ = Mat::Identity(a_.cols(), a_.cols()) - pinv * a_;
    particular_ = pinv * b_;

    for (unsigned mask = 1; mask < 8; ++mask) {
        sub_idx_[mask].resize(free_cells_.size());
        for (std::size_t f = 0; f < free_cells_.size(); ++f) {
            sub_idx_[mask][f] = shape_.subset_idx(mask, free_cells_[f]);
        }
    }

    // Canonical interior point: the product composition pushed through the
    // channel (or through a uniform kernel), which satisfies all marginal
    // and coupling constraints exactly and is positive on every free cell.
    Vec z0(copies_ * nf);
    for (int copy = 0; copy < copies_; ++copy) {
        for (int f = 0; f < nf; ++f) {
            const int i = free_cells_[f];
            const int x1 = shape_.x1_of(i), x2 = shape_.x2_of(i), y = shape_.y_of(i);
            const double ky = pin_channel ? pin_channel->q1(pin_channel->row(x1, x2), y)
                                          : 1.0 / shape_.ny;
            z0[col(copy, f)] = comps.q1_comp[x1] * comps.q2_comp[x2] * ky;
        }
    }
    interior_ = affine_project(z0);
    if (constraint_violation(interior_) > kConsistencyTol ||
        (interior_ - z0).cwiseAbs().maxCoeff() > kConsistencyTol) {
        throw NumericalError("feasible set is empty: affine constraints are inconsistent");
    }
    interior_ = interior_.cwiseMax(floor_);
}

Vec FeasibleDomain::affine_project(const Vec& z) const {
    return null_proj_ * z + particular_;
}

Vec FeasibleDomain::project(const Vec& z) const {
    Vec v = affine_project(z);
    for (int round = 0; round < 100; ++round) {
        if (v.minCoeff() >= floor_ * 0.5) return v;
        v = v.cwiseMax(floor_);
        v = affine_project(v);
    }
    // The alternating rounds can stall near thin corners; pull minimally
    // toward the interior point, which restores positivity while keeping
    // the affine constraints exact.
    const double mn = v.minCoeff();
    if (mn < floor_ * 0.5) {
        const double im = interior_.minCoeff();
        const double beta = (im - floor_) / (im - mn);
        v = beta * v + (1.0 - beta) * interior_;
    }
    return v;
}

Vec FeasibleDomain::tangent(const Vec& g) const {
    return null_proj_ * g;
}

double FeasibleDomain::constraint_violation(const Vec& z) const {
    return (a_ * z - b_).cwiseAbs().maxCoeff();
}

Vec FeasibleDomain::pack(std::span<const Vec> ps) const {
    if (static_cast<int>(ps.size()) != copies_) {
        throw std::invalid_argument("pack: wrong number of copies");
    }
    const int nf = static_cast<int>(free_cells_.size());
    Vec z(copies_ * nf);
    for (int c = 0; c < copies_; ++c) {
        for (int f = 0; f < nf; ++f) z[c * nf + f] = ps[c][free_cells_[f]];
    }
    return z;
}

std::vector<Vec> FeasibleDomain::unpack(const Vec& z) const {
    const int nf = static_cast<int>(free_cells_.size());
    std::vector<Vec> ps(copies_, Vec::Zero(shape_.size()));
    for (int c = 0; c < copies_; ++c) {
        for (int f = 0; f < nf; ++f) ps[c][free_cells_[f]] = z[c * nf + f];
    }
    return ps;
}

JointPair FeasibleDomain::unpack_pair(const Vec& z, int block) const {
    const auto ps = unpack(z);
    return {JointDist{shape_, ps[2 * block]}, JointDist{shape_, ps[2 * block + 1]}};
}

Vec FeasibleDomain::pack_pair(const JointPair& jp) const {
    const Vec ps[2] = {jp.unprimed.p, jp.primed.p};
    return pack(std::span<const Vec>(ps, 2));
}

JointPair project_feasible(const JointPair& jp, const FeasibleSet& fs) {
    require_shapes(jp, fs);
    validate_composition(fs.comps.q1_comp, "Q1");
    validate_composition(fs.comps.q2_comp, "Q2");
    const FeasibleDomain dom({&fs, 1}, nullptr);
    const Vec z = dom.project(dom.pack_pair(jp));
    if (dom.constraint_violation(z) > 1e-9) {
        throw NumericalError("projection failed: feasible set appears empty");
    }
    return dom.unpack_pair(z);
}

JointPair sample_feasible(const FeasibleSet& fs, Rng& rng) {
    validate_composition(fs.comps.q1_comp, "Q1");
    validate_composition(fs.comps.q2_comp, "Q2");
    const FeasibleDomain dom({&fs, 1}, nullptr);
    const int n = dom.stacked_size();
    const int nf = n / 2;
    Vec z(n);
    for (int i = 0; i < n; ++i) z[i] = -std::log(1.0 - unit_uniform(rng));
    z.head(nf) /= z.head(nf).sum();
    z.tail(nf) /= z.tail(nf).sum();
    z = dom.project(z);
    // Blend toward the interior point to keep the sample strictly positive.
    if (z.minCoeff() < 1e-8) {
        z = 0.5 * z + 0.5 * dom.interior_point();
    }
    if (dom.constraint_violation(z) > 1e-9) {
        throw NumericalError("sampling failed: feasible set appears empty");
    }
    return dom.unpack_pair(z);
}

}  // namespace ifcx
