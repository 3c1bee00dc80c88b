#include "forrlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "forrlab/parallel.hpp"
#include "forrlab/wht.hpp"

namespace forrlab {

AmplificationPlan make_plan(const ForrelationParams& params, const AmplificationOptions& opt) {
    AmplificationPlan plan;
    plan.repetitions = uint64_t(
        std::ceil(opt.hoeffding_constant / (params.eps * params.eps) * std::log(10.0 * params.k)));
    plan.threshold = 0.5 * (1.0 + opt.threshold_fraction * params.eps);
    const double lo = 0.5 * (1.0 + params.eps / 4.0);
    const double hi = 0.5 * (1.0 + params.eps / 2.0);
    if (!(plan.threshold > lo && plan.threshold < hi))
        throw std::invalid_argument("make_plan: threshold must lie strictly inside the promise gap");
    const double margin = std::min(plan.threshold - lo, hi - plan.threshold);
    plan.per_copy_error_bound = std::exp(-2.0 * double(plan.repetitions) * margin * margin);
    return plan;
}

double single_query_accept_prob(std::span<const double> z) {
    const double p = 0.5 * (1.0 + forr(z));
    return std::clamp(p, 0.0, 1.0);
}

int simulate_single_query(std::span<const double> z, Rng& rng, uint64_t& query_ledger) {
    ++query_ledger;
    return rng.bernoulli(single_query_accept_prob(z)) ? 1 : 0;
}

XorKResult solve_xor_k(const SignVec& z, const ForrelationParams& params,
                       const AmplificationPlan& plan, Rng& rng) {
    if (z.size() != params.total_dim())
        throw std::invalid_argument("solve_xor_k: expected a 2kN dimensional input");
    XorKResult res;
    res.copy_guesses.resize(params.k);
    res.accept_counts.assign(params.k, 0);
    const uint64_t d = params.copy_dim();
    int product = 1;
    const RealVec zr = to_reals(z);
    for (uint32_t j = 0; j < params.k; ++j) {
        const auto copy = std::span<const double>(zr).subspan(j * d, d);
        const double p = single_query_accept_prob(copy);
        uint64_t accepted = 0;
        for (uint64_t t = 0; t < plan.repetitions; ++t) {
            ++res.queries;
            if (rng.bernoulli(p)) ++accepted;
        }
        res.accept_counts[j] = accepted;
        // Frequency above tau indicates high forrelation, i.e. a Yes (-1) copy.
        const bool yes = double(accepted) > plan.threshold * double(plan.repetitions);
        res.copy_guesses[j] = yes ? int8_t(-1) : int8_t(1);
        product *= res.copy_guesses[j];
    }
    res.guess = product;
    return res;
}

QuantumSuccessReport quantum_success_experiment(const ForrelationParams& params,
                                                const AmplificationPlan& plan, uint64_t n_instances,
                                                uint64_t seed, uint32_t workers,
                                                uint64_t max_rejects) {
    QuantumSuccessReport rep;
    rep.n_instances = n_instances;
    rep.queries_per_instance = uint64_t(params.k) * plan.repetitions;

    std::vector<uint8_t> success(n_instances, 0);
    std::vector<uint64_t> attempts(n_instances, 0);
    std::atomic<bool> failed{false};
    parallel_tasks(n_instances, workers, [&](uint64_t t) {
        try {
            Rng rng(seed, t);
            // Alternate No / Yes targets.
            const PromiseLabel want = (t % 2 == 0) ? PromiseLabel::No : PromiseLabel::Yes;
            SigmaSampler sampler(params, want, max_rejects);
            const SignVec z = sampler.sample(rng);
            attempts[t] = sampler.attempts();
            const XorKResult res = solve_xor_k(z, params, plan, rng);
            success[t] = (res.guess == label_value(want)) ? 1 : 0;
        } catch (const PromiseFailure&) {
            failed.store(true);
        }
    });
    if (failed.load())
        throw PromiseFailure("quantum_success_experiment: sigma sampling exhausted max_rejects");

    uint64_t hits = 0, total_attempts = 0;
    for (uint64_t t = 0; t < n_instances; ++t) {
        hits += success[t];
        total_attempts += attempts[t];
    }
    rep.success_rate = double(hits) / double(n_instances);
    rep.stderr_ = std::sqrt(rep.success_rate * (1.0 - rep.success_rate) / double(n_instances));
    rep.sigma_rejection_rate =
        total_attempts == 0 ? 0.0 : 1.0 - double(n_instances) / double(total_attempts);
    return rep;
}

}  // namespace forrlab
