#pragma once

#include "ifcx/channel.hpp"
#include "ifcx/info.hpp"
#include "ifcx/types.hpp"

#include <vector>

namespace ifcx::testing {

inline Vec random_dist(Rng& rng, int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = -std::log(1.0 - unit_uniform(rng));
    v /= v.sum();
    return v;
}

inline JointDist random_joint(Rng& rng, const JointShape& shape) {
    return {shape, random_dist(rng, shape.size())};
}

// Strictly positive random channel with the given alphabet sizes.
inline ChannelSpec random_channel(Rng& rng, int x1, int x2, int y1) {
    ChannelSpec ch;
    ch.x1_size = x1;
    ch.x2_size = x2;
    ch.y1_size = y1;
    ch.q1.resize(x1 * x2, y1);
    for (int r = 0; r < ch.q1.rows(); ++r) {
        ch.q1.row(r) = random_dist(rng, y1).transpose();
    }
    return ch;
}

inline CompositionPair uniform_comps(int n1, int n2) {
    return {Vec::Constant(n1, 1.0 / n1), Vec::Constant(n2, 1.0 / n2)};
}

inline CompositionPair random_comps(Rng& rng, int n1, int n2) {
    return {random_dist(rng, n1), random_dist(rng, n2)};
}

// Binary entropy in nats.
inline double h2(double p) { return -xlogx(p) - xlogx(1.0 - p); }

}  // namespace ifcx::testing
