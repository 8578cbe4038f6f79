#pragma once

#include "ifcx/channel.hpp"
#include "ifcx/types.hpp"

#include <cstdint>
#include <vector>

namespace ifcx {

using Sequence = std::vector<int>;
using Codebook = std::vector<Sequence>;

// Small-blocklength random-coding setup: constant-composition codebooks of
// blocklength n, M1 and M2 codewords, compositions quantized to denominator n.
struct CodebookConfig {
    int n = 0;
    int m1 = 1;
    int m2 = 1;
    CompositionPair comps;
    std::uint64_t seed = 0;
    int trials = 1;
};

// Nearest composition with entries k/n (total variation, ties to lower index).
Vec quantize_composition(const Vec& q, int n);

// m i.i.d. codewords, each a uniformly random arrangement of the type-class
// multiset of q (which must have denominator n).
Codebook generate_codebook(const Vec& q, int n, int m, Rng& rng);

// Per-message log-likelihoods log( (1/M2) sum_i q1^n(y | x1_m, x2_i) ),
// computed with log-sum-exp over the interfering codebook.
Vec ml_log_scores(const Sequence& y, const Codebook& cb1, const Codebook& cb2,
                  const ChannelSpec& ch);

// Exact ML decoding for user 1 against the codebook-averaged channel;
// ties go to the lowest message index.
int ml_decode_user1(const Sequence& y, const Codebook& cb1, const Codebook& cb2,
                    const ChannelSpec& ch);

struct ErrorEstimate {
    double rate = 0.0;
    double ci_halfwidth = 0.0;  // 95% binomial
    long long errors = 0;
    long long trials = 0;
};

// Monte Carlo over fresh codebooks, uniform messages, and channel noise;
// deterministic in cfg.seed regardless of worker count.
ErrorEstimate estimate_error(const CodebookConfig& cfg, const ChannelSpec& ch, int jobs = 1);

}  // namespace ifcx
