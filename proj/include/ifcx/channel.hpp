#pragma once

#include "ifcx/types.hpp"

#include <optional>
#include <string>

namespace ifcx {

// Two-user discrete memoryless interference channel.
// q1(y | x1, x2) is stored with row index x1 * x2_size + x2, one column per y.
// q2 follows the same row convention and targets receiver 2; it is optional
// and any user-2 computation on a channel without it is an error.
struct ChannelSpec {
    int x1_size = 0;
    int x2_size = 0;
    int y1_size = 0;
    int y2_size = 0;
    Mat q1;
    std::optional<Mat> q2;

    JointShape joint_shape() const { return {x1_size, x2_size, y1_size}; }
    int row(int x1, int x2) const { return x1 * x2_size + x2; }
};

// Input compositions (Q1, Q2) of the constant-composition ensemble.
struct CompositionPair {
    Vec q1_comp;
    Vec q2_comp;
};

inline constexpr double kProbTol = 1e-12;

// Throws std::invalid_argument naming the offending row on violation.
void validate_channel(const ChannelSpec& ch);
void validate_composition(const Vec& q, const std::string& name);

ChannelSpec load_channel(const std::string& path);
void save_channel(const ChannelSpec& ch, const std::string& path);

// Y1 = X1*X2 xor Z with Z ~ Bernoulli(p); Y2 = X2 noiselessly.
ChannelSpec z_channel(double p);

// Swapped channel for user-2 analysis: X1 <-> X2, Y1 -> Y2, q1 -> q2.
ChannelSpec swap_users(const ChannelSpec& ch);

// Pushforward of the product Q1 x Q2 through q1; distribution of Y1.
Vec output_dist(const ChannelSpec& ch, const CompositionPair& comps);

}  // namespace ifcx
