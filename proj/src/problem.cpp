#include "forrlab/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "forrlab/dist.hpp"
#include "forrlab/wht.hpp"

namespace forrlab {

PromiseLabel label(std::span<const double> z, const ForrelationParams& params) {
    if (z.size() != params.copy_dim())
        throw std::invalid_argument("label: expected a 2N dimensional input");
    const double f = forr(z);
    if (f >= params.yes_threshold()) return PromiseLabel::Yes;
    if (f <= params.no_threshold()) return PromiseLabel::No;
    return PromiseLabel::Outside;
}

PromiseLabel label(const SignVec& z, const ForrelationParams& params) {
    return label(std::span<const double>(to_reals(z)), params);
}

PromiseLabel label_k(std::span<const double> z, const ForrelationParams& params) {
    if (z.size() != params.total_dim())
        throw std::invalid_argument("label_k: expected a 2kN dimensional input");
    int product = 1;
    for (uint32_t j = 0; j < params.k; ++j) {
        const PromiseLabel lj = label(z.subspan(j * params.copy_dim(), params.copy_dim()), params);
        if (lj == PromiseLabel::Outside) return PromiseLabel::Outside;
        product *= label_value(lj);
    }
    return product < 0 ? PromiseLabel::Yes : PromiseLabel::No;
}

PromiseLabel label_k(const SignVec& z, const ForrelationParams& params) {
    return label_k(std::span<const double>(to_reals(z)), params);
}

PromiseStats promise_statistics(const ForrelationParams& params, Parity parity, uint64_t n_samples,
                                Rng& rng) {
    if (n_samples < 1000) throw std::invalid_argument("promise_statistics: need n_samples >= 1000");
    const PromiseLabel expected = parity == Parity::Even ? PromiseLabel::No : PromiseLabel::Yes;
    uint64_t hits = 0;
    for (uint64_t s = 0; s < n_samples; ++s) {
        const MuSampleSigns sample = sample_mu_rounded(params, parity, rng);
        if (label_k(sample.z, params) == expected) ++hits;
    }
    PromiseStats st;
    st.expected = expected;
    st.n_samples = n_samples;
    st.fraction = double(hits) / double(n_samples);
    st.stderr_ = std::sqrt(st.fraction * (1.0 - st.fraction) / double(n_samples));
    return st;
}

}  // namespace forrlab
