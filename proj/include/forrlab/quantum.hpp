#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "forrlab/dist.hpp"
#include "forrlab/params.hpp"
#include "forrlab/problem.hpp"
#include "forrlab/rng.hpp"

namespace forrlab {

struct AmplificationOptions {
    // Repetition count r = ceil(constant / eps^2 * ln(10 k)); with the
    // threshold midway margin eps/16, Hoeffding gives per-copy error at most
    // exp(-2 r (eps/16)^2) <= 1/(10k) for constant = 128.
    double hoeffding_constant = 128.0;
    // Threshold tau = (1 + fraction * eps) / 2; 3/8 sits midway between the
    // promise endpoints 1/4 and 1/2.
    double threshold_fraction = 0.375;
};

struct AmplificationPlan {
    uint64_t repetitions = 0;
    double threshold = 0.0;             // strictly between (1+eps/4)/2 and (1+eps/2)/2
    double per_copy_error_bound = 0.0;  // Hoeffding bound at the plan margin
};

AmplificationPlan make_plan(const ForrelationParams& params, const AmplificationOptions& opt = {});

// P[b = 1] = (1 + forr(z)) / 2, clamped into [0,1] for real-valued inputs.
double single_query_accept_prob(std::span<const double> z);

// One Bernoulli draw of the single-query algorithm; bumps the query ledger.
int simulate_single_query(std::span<const double> z, Rng& rng, uint64_t& query_ledger);

struct XorKResult {
    int guess = 0;                        // +-1
    uint64_t queries = 0;                 // exactly k * repetitions
    std::vector<int8_t> copy_guesses;     // per-copy labels
    std::vector<uint64_t> accept_counts;  // per-copy accepted queries
};

// Amplified solver for F^(k): per copy, repeat the single-query test r times
// and threshold the empirical accept frequency at tau; output the product of
// per-copy guesses.
XorKResult solve_xor_k(const SignVec& z, const ForrelationParams& params,
                       const AmplificationPlan& plan, Rng& rng);

struct QuantumSuccessReport {
    double success_rate = 0.0;
    double stderr_ = 0.0;
    uint64_t n_instances = 0;
    uint64_t queries_per_instance = 0;
    double sigma_rejection_rate = 0.0;
};

// Success rate over sigma-sampled instances (half No, half Yes), measured
// against the true promise labels.
QuantumSuccessReport quantum_success_experiment(const ForrelationParams& params,
                                                const AmplificationPlan& plan, uint64_t n_instances,
                                                uint64_t seed, uint32_t workers,
                                                uint64_t max_rejects = 10000);

}  // namespace forrlab
