#include "forrlab/correlation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "forrlab/parallel.hpp"
#include "forrlab/wht.hpp"

namespace forrlab {

int correlation_guess(const SignVec& z, const ForrelationParams& params,
                      std::span<const CoordPair> pairs) {
    if (z.size() != params.total_dim())
        throw std::invalid_argument("correlation_guess: expected a 2kN dimensional input");
    if (pairs.size() != params.k)
        throw std::invalid_argument("correlation_guess: one coordinate pair per copy");
    const uint64_t d = params.copy_dim();
    int product = 1;
    for (uint32_t c = 0; c < params.k; ++c) {
        const auto [i, j] = pairs[c];
        if (i >= params.N || j >= params.N)
            throw std::invalid_argument("correlation_guess: pair index out of range");
        const int xi = z[c * d + i];
        const int yj = z[c * d + params.N + j];
        const int sign = mod2_inner(i, j) ? -1 : 1;
        product *= xi * yj * sign;
    }
    return product;
}

namespace {

// Joint law of one probed pair (x_i, y_j) under the Gaussian component:
// bivariate normal with variances eps and covariance eps (-1)^{<i,j>_2}/sqrt(N).
struct PairMarginal {
    double stddev;
    double cov_over_std;     // cov / sqrt(eps)
    double resid_std;        // sqrt(eps - cov^2/eps)
    int sign;

    PairMarginal(const ForrelationParams& params, CoordPair pr) {
        sign = mod2_inner(pr.i, pr.j) ? -1 : 1;
        const double cov = params.eps * double(sign) / std::sqrt(double(params.N));
        stddev = std::sqrt(params.eps);
        cov_over_std = cov / stddev;
        resid_std = std::sqrt(params.eps - cov * cov / params.eps);
    }
};

}  // namespace

AdvantageReport correlation_advantage(const ForrelationParams& params,
                                      std::span<const CoordPair> pairs, uint64_t n_samples,
                                      uint64_t seed, uint32_t workers, bool marginal_fast) {
    if (pairs.size() != params.k)
        throw std::invalid_argument("correlation_advantage: one coordinate pair per copy");
    const uint32_t k = params.k;

    std::vector<PairMarginal> marginals;
    marginals.reserve(k);
    for (const CoordPair& pr : pairs) marginals.emplace_back(params, pr);

    const uint64_t batch = 1 << 14;
    const uint64_t n_batches = (n_samples + batch - 1) / batch;
    std::vector<double> sum_diff(n_batches, 0.0), sum_sq(n_batches, 0.0);

    parallel_tasks(n_batches, workers, [&](uint64_t b) {
        Rng rng(seed, b);
        const uint64_t lo = b * batch;
        const uint64_t hi = std::min(n_samples, lo + batch);
        double acc = 0.0, acc_sq = 0.0;
        for (uint64_t s = lo; s < hi; ++s) {
            int d_even = 1, d_odd = 1;
            if (marginal_fast) {
                // Copy membership mirrors the coupled full sampler: shared
                // prefix, parity fixed by the final copy.
                uint32_t prefix = 0;
                for (uint32_t j = 0; j + 1 < k; ++j)
                    if (rng.bits() & 1) prefix |= uint32_t(1) << j;
                const bool prefix_odd = std::popcount(prefix) & 1;
                const uint32_t top = uint32_t(1) << (k - 1);
                const uint32_t mask_even = prefix | (prefix_odd ? top : 0);
                const uint32_t mask_odd = prefix | (prefix_odd ? 0 : top);
                for (uint32_t c = 0; c < k; ++c) {
                    int8_t xe, ye, xo, yo;
                    // One draw per copy feeds both sides.
                    const double g1 = rng.gaussian();
                    const double g2 = rng.gaussian();
                    const double u1 = rng.uniform();
                    const double u2 = rng.uniform();
                    auto realize = [&](bool gauss, int8_t& x, int8_t& y) {
                        double bx = 0.0, by = 0.0;
                        if (gauss) {
                            bx = marginals[c].stddev * g1;
                            by = marginals[c].cov_over_std * g1 + marginals[c].resid_std * g2;
                        }
                        const double tx = bx > 1.0 ? 1.0 : (bx < -1.0 ? -1.0 : bx);
                        const double ty = by > 1.0 ? 1.0 : (by < -1.0 ? -1.0 : by);
                        x = u1 < 0.5 * (1.0 + tx) ? int8_t(1) : int8_t(-1);
                        y = u2 < 0.5 * (1.0 + ty) ? int8_t(1) : int8_t(-1);
                    };
                    realize(mask_even & (uint32_t(1) << c), xe, ye);
                    realize(mask_odd & (uint32_t(1) << c), xo, yo);
                    d_even *= int(xe) * int(ye) * marginals[c].sign;
                    d_odd *= int(xo) * int(yo) * marginals[c].sign;
                }
            } else {
                auto [even, odd] = sample_mu_rounded_coupled(params, rng);
                d_even = correlation_guess(even.z, params, pairs);
                d_odd = correlation_guess(odd.z, params, pairs);
            }
            const double diff = double(d_even - d_odd);
            acc += diff;
            acc_sq += diff * diff;
        }
        sum_diff[b] = acc;
        sum_sq[b] = acc_sq;
    });

    double total = 0.0, total_sq = 0.0;
    for (uint64_t b = 0; b < n_batches; ++b) {
        total += sum_diff[b];
        total_sq += sum_sq[b];
    }
    const double mean_diff = total / double(n_samples);
    const double var = std::max(0.0, total_sq / double(n_samples) - mean_diff * mean_diff);

    AdvantageReport rep;
    rep.n_samples = n_samples;
    // The tester aims at the No side of tilde-mu_0; advantage is half the gap.
    rep.advantage = 0.5 * std::fabs(mean_diff);
    rep.stderr_ = 0.5 * std::sqrt(var / double(n_samples));
    return rep;
}

Estimate correlation_mean_uniform(const ForrelationParams& params, std::span<const CoordPair> pairs,
                                  uint64_t n_samples, uint64_t seed, uint32_t workers) {
    if (pairs.size() != params.k)
        throw std::invalid_argument("correlation_mean_uniform: one coordinate pair per copy");
    const uint64_t batch = 1 << 15;
    const uint64_t n_batches = (n_samples + batch - 1) / batch;
    std::vector<double> sums(n_batches, 0.0);
    parallel_tasks(n_batches, workers, [&](uint64_t b) {
        Rng rng(seed, b);
        const uint64_t lo = b * batch;
        const uint64_t hi = std::min(n_samples, lo + batch);
        double acc = 0.0;
        for (uint64_t s = lo; s < hi; ++s) {
            int prod = 1;
            for (uint32_t c = 0; c < params.k; ++c) {
                const int x = rng.sign();
                const int y = rng.sign();
                prod *= x * y * (mod2_inner(pairs[c].i, pairs[c].j) ? -1 : 1);
            }
            acc += prod;
        }
        sums[b] = acc;
    });
    double total = 0.0;
    for (double s : sums) total += s;
    Estimate e;
    e.n_samples = n_samples;
    e.value = total / double(n_samples);
    e.stderr_ = std::sqrt(std::max(0.0, 1.0 - e.value * e.value) / double(n_samples));
    return e;
}

}  // namespace forrlab
