#include "ifcx/info.hpp"

#include <limits>
#include <stdexcept>

namespace ifcx {

void validate_joint(const JointDist& j) {
    if (j.p.size() != j.shape.size()) {
        throw std::invalid_argument("joint distribution size does not match its shape");
    }
    double sum = 0.0;
    for (int i = 0; i < j.p.size(); ++i) {
        if (j.p[i] < 0.0) throw std::invalid_argument("joint distribution has a negative entry");
        sum += j.p[i];
    }
    if (std::abs(sum - 1.0) > kJointTol) {
        throw std::invalid_argument("joint distribution does not sum to 1 within tolerance");
    }
}

Vec marginal(const Vec& p, const JointShape& shape, unsigned mask) {
    Vec m = Vec::Zero(shape.subset_size(mask));
    for (int i = 0; i < p.size(); ++i) {
        m[shape.subset_idx(mask, i)] += p[i];
    }
    return m;
}

double entropy(const Vec& d) {
    double h = 0.0;
    for (int i = 0; i < d.size(); ++i) h -= xlogx(d[i]);
    return h;
}

double subset_entropy(const Vec& p, const JointShape& shape, unsigned mask) {
    return entropy(marginal(p, shape, mask));
}

double mutual_info(const JointDist& j, unsigned group_a, unsigned group_b, unsigned cond) {
    if (group_a == 0 || group_b == 0) {
        throw std::invalid_argument("mutual information groups must be nonempty");
    }
    if ((group_a & group_b) || (group_a & cond) || (group_b & cond)) {
        throw std::invalid_argument("mutual information groups must be disjoint");
    }
    const auto h = [&](unsigned mask) {
        return mask == 0 ? 0.0 : subset_entropy(j.p, j.shape, mask);
    };
    // I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)
    return h(group_a | cond) + h(group_b | cond) - h(group_a | group_b | cond) - h(cond);
}

double cond_entropy(const JointDist& j, unsigned group_a, unsigned group_b) {
    const auto h = [&](unsigned mask) {
        return mask == 0 ? 0.0 : subset_entropy(j.p, j.shape, mask);
    };
    return h(group_a | group_b) - h(group_b);
}

double cond_kl_to_channel(const JointDist& j, const ChannelSpec& ch) {
    if (j.shape != ch.joint_shape()) {
        throw std::invalid_argument("joint distribution shape does not match channel");
    }
    const Vec px1x2 = marginal(j.p, j.shape, kX1 | kX2);
    double d = 0.0;
    for (int i = 0; i < j.p.size(); ++i) {
        const double pi = j.p[i];
        if (pi == 0.0) continue;
        const double q = ch.q1(ch.row(j.shape.x1_of(i), j.shape.x2_of(i)), j.shape.y_of(i));
        if (q == 0.0) return std::numeric_limits<double>::infinity();
        const double pcond = pi / px1x2[j.shape.subset_idx(kX1 | kX2, i)];
        d += pi * std::log(pcond / q);
    }
    return d;
}

double expected_log_channel(const JointDist& j, const ChannelSpec& ch) {
    if (j.shape != ch.joint_shape()) {
        throw std::invalid_argument("joint distribution shape does not match channel");
    }
    double e = 0.0;
    for (int i = 0; i < j.p.size(); ++i) {
        const double pi = j.p[i];
        if (pi == 0.0) continue;
        const double q = ch.q1(ch.row(j.shape.x1_of(i), j.shape.x2_of(i)), j.shape.y_of(i));
        if (q == 0.0) return -std::numeric_limits<double>::infinity();
        e += pi * std::log(q);
    }
    return e;
}

JointDist product_through_channel(const ChannelSpec& ch, const CompositionPair& comps) {
    if (comps.q1_comp.size() != ch.x1_size || comps.q2_comp.size() != ch.x2_size) {
        throw std::invalid_argument("composition dimensions do not match channel alphabets");
    }
    JointDist j;
    j.shape = ch.joint_shape();
    j.p.resize(j.shape.size());
    for (int i = 0; i < j.p.size(); ++i) {
        const int x1 = j.shape.x1_of(i), x2 = j.shape.x2_of(i), y = j.shape.y_of(i);
        j.p[i] = comps.q1_comp[x1] * comps.q2_comp[x2] * ch.q1(ch.row(x1, x2), y);
    }
    return j;
}

}  // namespace ifcx
