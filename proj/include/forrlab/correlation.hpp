#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "forrlab/dist.hpp"
#include "forrlab/params.hpp"
#include "forrlab/problem.hpp"

namespace forrlab {

// One probed coordinate pair per copy: x_i against y_j.
struct CoordPair {
    uint32_t i = 0;
    uint32_t j = 0;
};

// Classical baseline: per copy, guess from the sign of x_i * y_j * (-1)^{<i,j>_2}
// and output the product of the per-copy guesses.
int correlation_guess(const SignVec& z, const ForrelationParams& params,
                      std::span<const CoordPair> pairs);

struct AdvantageReport {
    double advantage = 0.0;  // |E_0 D - E_1 D| / 2
    double stderr_ = 0.0;
    uint64_t n_samples = 0;  // per side
};

// Advantage of the correlation tester in distinguishing tilde-mu_0 from
// tilde-mu_1. The fast path samples only the probed coordinate pairs (their
// joint law under each component is an explicit bivariate Gaussian /
// independent-signs marginal); the full path rounds whole vectors. Both paths
// follow the same couple-the-streams layout.
AdvantageReport correlation_advantage(const ForrelationParams& params,
                                      std::span<const CoordPair> pairs, uint64_t n_samples,
                                      uint64_t seed, uint32_t workers, bool marginal_fast = true);

// Mean guess under the uniform distribution alone (should be 0).
Estimate correlation_mean_uniform(const ForrelationParams& params, std::span<const CoordPair> pairs,
                                  uint64_t n_samples, uint64_t seed, uint32_t workers);

}  // namespace forrlab
