#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "forrlab/dist.hpp"
#include "forrlab/fourier.hpp"
#include "forrlab/params.hpp"
#include "forrlab/rng.hpp"

namespace forrlab {

// ---------------------------------------------------------------------------
// k-dimensional telescoping
// ---------------------------------------------------------------------------

// Coefficient of the grid point b in the unit-cell alternating sum: evaluates
// sum_{a in [T]^k} sum_{S subseteq [k]} 1{a-1+S=b} (-1)^|S| by direct
// enumeration (the oracle side; the closed corner form is what gets checked
// against it).
long long telescoping_coefficient(std::span<const uint32_t> b, uint32_t T);

// Closed form prod_j (1{b_j = 0} - 1{b_j = T}).
long long telescoping_corner_formula(std::span<const uint32_t> b, uint32_t T);

struct PathwiseReport {
    double lhs = 0.0;  // sum over unit cells of the alternating sums
    double rhs = 0.0;  // alternating sum over the corners
    double abs_dev = 0.0;
    bool pass = false;
};

// Pathwise telescoping identity for an arbitrary labeling g of the grid
// {0..T}^k. Holds exactly for every g and every T, which is strictly stronger
// than the expectation-level statement.
PathwiseReport check_telescoping_pathwise(uint32_t k, uint32_t T,
                                          const std::function<double(std::span<const uint32_t>)>& g,
                                          double tol = 1e-9);

// ---------------------------------------------------------------------------
// Walk grid
// ---------------------------------------------------------------------------

// Product of k random walks with increments drawn from p * G, p = 1/sqrt(T);
// the prefix at a = (T,...,T)*S is distributed as G on copies in S and as the
// zero vector elsewhere. Verified with tiny surrogate T: the telescoping
// structure is exact for every T.
class WalkGrid {
  public:
    WalkGrid(const ForrelationParams& params, uint32_t T, Rng& rng);

    uint32_t copies() const { return k_; }
    uint32_t steps() const { return T_; }

    // Increment z_j^{(t)}, t in [1..T].
    const RealVec& increment(uint32_t copy, uint32_t t) const;

    // Concatenated prefix z^{<=(a)} for a in {0..T}^k, one 2N block per copy.
    RealVec prefix(std::span<const uint32_t> a) const;

  private:
    uint32_t k_ = 0;
    uint32_t T_ = 0;
    uint64_t copy_dim_ = 0;
    std::vector<std::vector<RealVec>> incr_;  // [copy][t-1]
};

// ---------------------------------------------------------------------------
// Rounding law and concentration probes
// ---------------------------------------------------------------------------

struct RoundingLawReport {
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    double exact = 0.0;  // multilinear value at trnc(z)
    bool pass = false;
};

// E over roundings of H(z') versus H(trnc(z)); passes within sigmas * stderr.
RoundingLawReport check_rounding_law(const FourierTable& H, std::span<const double> z,
                                     uint64_t n_samples, Rng& rng, double sigmas = 4.0);

struct ConcentrationReport {
    uint64_t n_samples = 0;
    uint64_t low_tail = 0;       // forr <= 3 eps / 4
    uint64_t high_tail = 0;      // forr >= 5 eps / 4
    double tail_bound = 0.0;     // chi-square bound 2 exp(-N/128)
    double mean_forr = 0.0;
    double mean_stderr = 0.0;
    bool bound_respected = false;  // observed tail fraction <= bound (reported, hard only at large N)
};

ConcentrationReport check_gaussian_concentration(const ForrelationParams& params,
                                                 uint64_t n_samples, uint64_t seed,
                                                 uint32_t workers);

struct StabilityReport {
    uint64_t n_pairs = 0;
    uint64_t violations = 0;  // |forr(z) - forr(z0)| >= eps/4
    double violation_fraction = 0.0;
};

// Rounding stability: z0 ~ G truncated into the cube, z ~ rounding of z0.
StabilityReport check_rounding_stability(const ForrelationParams& params, uint64_t n_pairs,
                                         uint64_t seed, uint32_t workers);

// Measured truncation gap E|H(trnc(z0 + P.z)) - H(z0 + P.z)| in the
// single-step regime. The known bound is an unpinned constant times
// N^{-5k^2}, so the gap is reported, never asserted.
double probe_truncation_gap(const ForrelationParams& params, const FourierTable& H,
                            uint64_t n_samples, Rng& rng);

}  // namespace forrlab
