#include "ifcx/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ifcx {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<int> type_counts(const Vec& q, int n) {
    std::vector<int> counts(q.size());
    int total = 0;
    for (int i = 0; i < q.size(); ++i) {
        const double kf = q[i] * n;
        const int k = static_cast<int>(std::lround(kf));
        if (std::abs(kf - k) > 1e-9) {
            throw std::invalid_argument("composition does not have denominator n");
        }
        counts[i] = k;
        total += k;
    }
    if (total != n) throw std::invalid_argument("composition counts do not sum to n");
    return counts;
}

double logsumexp(const std::vector<double>& v) {
    double m = kNegInf;
    for (double x : v) m = std::max(m, x);
    if (std::isinf(m)) return kNegInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

}  // namespace

Vec quantize_composition(const Vec& q, int n) {
    if (n < 1) throw std::invalid_argument("blocklength must be >= 1");
    const int k = static_cast<int>(q.size());
    std::vector<int> counts(k);
    std::vector<double> frac(k);
    int assigned = 0;
    for (int i = 0; i < k; ++i) {
        const double scaled = q[i] * n;
        counts[i] = static_cast<int>(std::floor(scaled + 1e-12));
        frac[i] = scaled - counts[i];
        assigned += counts[i];
    }
    int remaining = n - assigned;
    // Largest remainder first; ties toward lower index.
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return frac[a] > frac[b]; });
    for (int i = 0; i < remaining; ++i) counts[order[i % k]] += 1;
    Vec out(k);
    for (int i = 0; i < k; ++i) out[i] = static_cast<double>(counts[i]) / n;
    return out;
}

Codebook generate_codebook(const Vec& q, int n, int m, Rng& rng) {
    const std::vector<int> counts = type_counts(q, n);
    Sequence base;
    base.reserve(n);
    for (std::size_t s = 0; s < counts.size(); ++s) {
        base.insert(base.end(), counts[s], static_cast<int>(s));
    }
    Codebook cb(m);
    for (int j = 0; j < m; ++j) {
        Sequence word = base;
        for (int i = n - 1; i > 0; --i) {  // Fisher-Yates
            const int k = static_cast<int>(bounded_uniform(rng, static_cast<std::uint64_t>(i) + 1));
            std::swap(word[i], word[k]);
        }
        cb[j] = std::move(word);
    }
    return cb;
}

Vec ml_log_scores(const Sequence& y, const Codebook& cb1, const Codebook& cb2,
                  const ChannelSpec& ch) {
    const int n = static_cast<int>(y.size());
    Vec scores(cb1.size());
    std::vector<double> terms(cb2.size());
    for (std::size_t m = 0; m < cb1.size(); ++m) {
        for (std::size_t i = 0; i < cb2.size(); ++i) {
            double ll = 0.0;
            for (int t = 0; t < n; ++t) {
                const double q = ch.q1(ch.row(cb1[m][t], cb2[i][t]), y[t]);
                if (q == 0.0) {
                    ll = kNegInf;
                    break;
                }
                ll += std::log(q);
            }
            terms[i] = ll;
        }
        scores[static_cast<int>(m)] =
            logsumexp(terms) - std::log(static_cast<double>(cb2.size()));
    }
    return scores;
}

int ml_decode_user1(const Sequence& y, const Codebook& cb1, const Codebook& cb2,
                    const ChannelSpec& ch) {
    const Vec scores = ml_log_scores(y, cb1, cb2, ch);
    int best = 0;
    for (int m = 1; m < scores.size(); ++m) {
        const double ref = scores[best];
        if (std::isinf(ref)) {
            if (scores[m] > ref) best = m;
        } else if (scores[m] > ref + 1e-12 * (1.0 + std::abs(ref))) {
            best = m;
        }
    }
    return best;
}

ErrorEstimate estimate_error(const CodebookConfig& cfg, const ChannelSpec& ch, int jobs) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (cfg.m1 < 1 || cfg.m2 < 1) throw std::invalid_argument("message counts must be >= 1");
    const Vec q1c = cfg.comps.q1_comp;
    const Vec q2c = cfg.comps.q2_comp;
    type_counts(q1c, cfg.n);  // validates denominators up front
    type_counts(q2c, cfg.n);

    constexpr int kBlock = 512;
    const int blocks = (cfg.trials + kBlock - 1) / kBlock;

    const auto run_block = [&](int b) -> long long {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(b)));
        const int lo = b * kBlock;
        const int hi = std::min(cfg.trials, lo + kBlock);
        long long errors = 0;
        Sequence y(cfg.n);
        for (int trial = lo; trial < hi; ++trial) {
            const Codebook cb1 = generate_codebook(q1c, cfg.n, cfg.m1, rng);
            const Codebook cb2 = generate_codebook(q2c, cfg.n, cfg.m2, rng);
            const int w1 = static_cast<int>(bounded_uniform(rng, cfg.m1));
            const int w2 = static_cast<int>(bounded_uniform(rng, cfg.m2));
            for (int t = 0; t < cfg.n; ++t) {
                const double u = unit_uniform(rng);
                double acc = 0.0;
                int sym = ch.y1_size - 1;
                for (int yv = 0; yv < ch.y1_size; ++yv) {
                    acc += ch.q1(ch.row(cb1[w1][t], cb2[w2][t]), yv);
                    if (u < acc) {
                        sym = yv;
                        break;
                    }
                }
                y[t] = sym;
            }
            if (ml_decode_user1(y, cb1, cb2, ch) != w1) ++errors;
        }
        return errors;
    };

    long long errors = 0;
    jobs = std::max(1, jobs);
    if (jobs == 1 || blocks == 1) {
        for (int b = 0; b < blocks; ++b) errors += run_block(b);
    } else {
        std::vector<long long> per_block(blocks, 0);
        std::atomic<int> next{0};
        std::vector<std::future<void>> futs;
        for (int w = 0; w < jobs; ++w) {
            futs.push_back(std::async(std::launch::async, [&]() {
                int b;
                while ((b = next.fetch_add(1)) < blocks) per_block[b] = run_block(b);
            }));
        }
        for (auto& f : futs) f.get();
        for (long long e : per_block) errors += e;  // ordered merge
    }

    ErrorEstimate est;
    est.errors = errors;
    est.trials = cfg.trials;
    est.rate = static_cast<double>(errors) / cfg.trials;
    est.ci_halfwidth = 1.96 * std::sqrt(est.rate * (1.0 - est.rate) / cfg.trials);
    return est;
}

}  // namespace ifcx
