#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "forrlab/params.hpp"
#include "forrlab/problem.hpp"
#include "forrlab/rng.hpp"

namespace forrlab {

// ---------------------------------------------------------------------------
// Truncation and probabilistic rounding
// ---------------------------------------------------------------------------

inline double trnc(double a) { return a > 1.0 ? 1.0 : (a < -1.0 ? -1.0 : a); }

inline void trnc_inplace(std::span<double> v) {
    for (double& x : v) x = trnc(x);
}

// Rounds one coordinate: +1 with probability (1 + trnc(zi)) / 2. Values at or
// beyond +-1 round deterministically.
inline int8_t round_coord(double zi, Rng& rng) {
    const double p = 0.5 * (1.0 + trnc(zi));
    return rng.uniform() < p ? int8_t(1) : int8_t(-1);
}

SignVec round_to_cube(std::span<const double> z, Rng& rng);

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

// One sample of the Gaussian Forrelation distribution: x ~ N(0, eps I_N),
// y = H_N x (computed by fwht, the matrix is never materialized).
RealVec sample_gaussian_forrelation(const ForrelationParams& params, Rng& rng);

// Rounded version (the Forrelation Distribution for k = 1).
SignVec sample_gaussian_forrelation_rounded(const ForrelationParams& params, Rng& rng);

SignVec sample_uniform_signs(uint64_t m, Rng& rng);

// Uniform subset of [k] with the requested parity, as a k-bit mask.
uint32_t sample_parity_mask(uint32_t k, Parity parity, Rng& rng);

struct MuSample {
    RealVec z;               // length 2kN; uniform copies are +-1 valued
    uint32_t gauss_mask = 0; // copies drawn from the Gaussian component
};

struct MuSampleSigns {
    SignVec z;
    uint32_t gauss_mask = 0;
};

// Sample of mu_0^(k) (parity even) or mu_1^(k) (parity odd).
MuSample sample_mu(const ForrelationParams& params, Parity parity, Rng& rng);

// Rounded (tilde) version.
MuSampleSigns sample_mu_rounded(const ForrelationParams& params, Parity parity, Rng& rng);

// Coupled pair (z0 ~ tilde-mu_0, z1 ~ tilde-mu_1) built from shared draws:
// copy membership agrees on the first k-1 copies and the rounding uniforms are
// shared coordinate-wise, which shrinks the variance of advantage estimates.
std::pair<MuSampleSigns, MuSampleSigns> sample_mu_rounded_coupled(const ForrelationParams& params,
                                                                  Rng& rng);

// Thrown when rejection sampling cannot reach the requested promise label.
struct PromiseFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rejection sampler for the sigma distributions: tilde-mu_0 conditioned on a
// No instance, tilde-mu_1 conditioned on a Yes instance. Keeps acceptance
// statistics so drivers can report the promise-rejection rate.
class SigmaSampler {
  public:
    SigmaSampler(const ForrelationParams& params, PromiseLabel want, uint64_t max_rejects = 10000)
        : params_(params), want_(want), max_rejects_(max_rejects) {
        if (want != PromiseLabel::Yes && want != PromiseLabel::No)
            throw std::invalid_argument("sigma: label must be yes or no");
    }

    SignVec sample(Rng& rng);

    uint64_t attempts() const { return attempts_; }
    uint64_t accepts() const { return accepts_; }
    double rejection_rate() const {
        return attempts_ == 0 ? 0.0 : 1.0 - double(accepts_) / double(attempts_);
    }

  private:
    ForrelationParams params_;
    PromiseLabel want_;
    uint64_t max_rejects_;
    uint64_t attempts_ = 0;
    uint64_t accepts_ = 0;
};

// ---------------------------------------------------------------------------
// Exact moment oracles
// ---------------------------------------------------------------------------

// Coordinates within one copy live in [0, 2N): x_i <-> i, y_j <-> N + j.
using CoordSet = std::vector<uint32_t>;

constexpr uint32_t kMomentGuard = 8;

// E_G[prod_{i in S} x_i prod_{j in T} y_j], computed by the Isserlis (Wick)
// pairing expansion over the covariance eps [[I, H], [H, I]].
// Guarded at |S| + |T| <= 8 (105 pairings).
double gaussian_moment_exact(const CoordSet& S, const CoordSet& T, const ForrelationParams& params);

// Same oracle with mixed coordinates in [0, 2N).
double gaussian_moment_exact_coords(const CoordSet& coords, const ForrelationParams& params);

struct MomentIndex {
    std::vector<CoordSet> per_copy;  // one coordinate set per copy, each within [0, 2N)

    uint64_t total_size() const {
        uint64_t s = 0;
        for (const auto& c : per_copy) s += c.size();
        return s;
    }
};

// Exact mu_0^(k)-hat(I) - mu_1^(k)-hat(I) via the product formula
// 2^{-(k-1)} prod_j (U-hat(I_j) - G-hat(I_j)) with U-hat(empty) = 1 and
// U-hat(J) = 0 otherwise. Guarded at |I| <= 8.
double mu_moment_difference(const MomentIndex& index, const ForrelationParams& params);

// Closed-form cap on the moment difference: 2^{-k+1} eps^i N^{-i/2} i!
// for |I| = 2i.
double mu_moment_difference_bound(uint64_t total_size, const ForrelationParams& params);

// ---------------------------------------------------------------------------
// Monte Carlo estimation
// ---------------------------------------------------------------------------

enum class DistId {
    Uniform,
    Gauss,
    GaussRounded,
    Mu0,
    Mu1,
    Mu0Rounded,
    Mu1Rounded,
};

DistId parse_dist_id(const std::string& name);
std::string dist_id_name(DistId id);

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    uint64_t n_samples = 0;
};

// Sample mean of prod_{i in I} z_i under the chosen distribution.
Estimate estimate_moment(DistId id, const MomentIndex& index, const ForrelationParams& params,
                         uint64_t n_samples, Rng& rng);

}  // namespace forrlab
