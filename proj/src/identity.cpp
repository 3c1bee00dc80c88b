#include "forrlab/identity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "forrlab/parallel.hpp"
#include "forrlab/wht.hpp"

namespace forrlab {

namespace {

void check_grid_guards(size_t k, uint32_t T) {
    if (k == 0 || k > 8 || T == 0 || T > 16)
        throw std::invalid_argument("telescoping: guard is k <= 8, T <= 16");
    double work = std::ldexp(1.0, int(k));  // 2^k subsets
    for (size_t j = 0; j < k; ++j) work *= double(T);
    if (work > 2e8) throw std::invalid_argument("telescoping: guard exceeded (T^k 2^k too large)");
}

// Odometer over [lo..hi]^k.
bool advance(std::vector<uint32_t>& a, uint32_t lo, uint32_t hi) {
    for (size_t j = 0; j < a.size(); ++j) {
        if (a[j] < hi) {
            ++a[j];
            return true;
        }
        a[j] = lo;
    }
    return false;
}

}  // namespace

long long telescoping_coefficient(std::span<const uint32_t> b, uint32_t T) {
    const size_t k = b.size();
    check_grid_guards(k, T);
    for (uint32_t bj : b)
        if (bj > T) throw std::invalid_argument("telescoping: b outside the grid");

    long long total = 0;
    std::vector<uint32_t> a(k, 1);
    do {
        for (uint32_t S = 0; S < (uint32_t(1) << k); ++S) {
            bool match = true;
            for (size_t j = 0; j < k && match; ++j) {
                const uint32_t shifted = a[j] - 1 + ((S >> j) & 1);
                match = shifted == b[j];
            }
            if (match) total += (std::popcount(S) & 1) ? -1 : 1;
        }
    } while (advance(a, 1, T));
    return total;
}

long long telescoping_corner_formula(std::span<const uint32_t> b, uint32_t T) {
    long long prod = 1;
    for (uint32_t bj : b) {
        const long long factor = (bj == 0 ? 1 : 0) - (bj == T ? 1 : 0);
        prod *= factor;
        if (prod == 0) return 0;
    }
    return prod;
}

PathwiseReport check_telescoping_pathwise(uint32_t k, uint32_t T,
                                          const std::function<double(std::span<const uint32_t>)>& g,
                                          double tol) {
    check_grid_guards(k, T);
    PathwiseReport rep;

    std::vector<uint32_t> a(k, 1), point(k);
    double lhs = 0.0;
    do {
        for (uint32_t S = 0; S < (uint32_t(1) << k); ++S) {
            for (uint32_t j = 0; j < k; ++j) point[j] = a[j] - 1 + ((S >> j) & 1);
            const double sign = (std::popcount(S) & 1) ? -1.0 : 1.0;
            lhs += sign * g(point);
        }
    } while (advance(a, 1, T));

    double rhs = 0.0;
    for (uint32_t B = 0; B < (uint32_t(1) << k); ++B) {
        for (uint32_t j = 0; j < k; ++j) point[j] = ((B >> j) & 1) ? T : 0;
        const double sign = (std::popcount(B) & 1) ? -1.0 : 1.0;
        rhs += sign * g(point);
    }

    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.abs_dev = std::fabs(lhs - rhs);
    rep.pass = rep.abs_dev < tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Walk grid
// ---------------------------------------------------------------------------

WalkGrid::WalkGrid(const ForrelationParams& params, uint32_t T, Rng& rng)
    : k_(params.k), T_(T), copy_dim_(params.copy_dim()) {
    if (T == 0 || T > 64) throw std::invalid_argument("WalkGrid: surrogate T must be in [1, 64]");
    const double p = 1.0 / std::sqrt(double(T));
    incr_.resize(k_);
    for (uint32_t j = 0; j < k_; ++j) {
        incr_[j].reserve(T);
        for (uint32_t t = 0; t < T; ++t) {
            RealVec z = sample_gaussian_forrelation(params, rng);
            for (double& v : z) v *= p;
            incr_[j].push_back(std::move(z));
        }
    }
}

const RealVec& WalkGrid::increment(uint32_t copy, uint32_t t) const {
    if (copy >= k_ || t == 0 || t > T_) throw std::out_of_range("WalkGrid: increment index");
    return incr_[copy][t - 1];
}

RealVec WalkGrid::prefix(std::span<const uint32_t> a) const {
    if (a.size() != k_) throw std::invalid_argument("WalkGrid: prefix index must have k entries");
    RealVec out(uint64_t(k_) * copy_dim_, 0.0);
    for (uint32_t j = 0; j < k_; ++j) {
        if (a[j] > T_) throw std::out_of_range("WalkGrid: prefix index");
        auto block = std::span<double>(out).subspan(uint64_t(j) * copy_dim_, copy_dim_);
        for (uint32_t t = 1; t <= a[j]; ++t) {
            const RealVec& z = incr_[j][t - 1];
            for (uint64_t i = 0; i < copy_dim_; ++i) block[i] += z[i];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rounding law and concentration
// ---------------------------------------------------------------------------

RoundingLawReport check_rounding_law(const FourierTable& H, std::span<const double> z,
                                     uint64_t n_samples, Rng& rng, double sigmas) {
    if (z.size() != H.arity()) throw std::invalid_argument("rounding law: dimension mismatch");
    if (H.arity() > 12) throw std::invalid_argument("rounding law: guarded at M <= 12");

    RealVec truncated(z.begin(), z.end());
    trnc_inplace(truncated);

    RoundingLawReport rep;
    rep.exact = H.eval_multilinear(truncated);

    double sum = 0.0, sumsq = 0.0;
    for (uint64_t s = 0; s < n_samples; ++s) {
        uint64_t mask = 0;
        for (uint32_t i = 0; i < H.arity(); ++i) {
            const double p = 0.5 * (1.0 + truncated[i]);
            if (!(rng.uniform() < p)) mask |= uint64_t(1) << i;
        }
        const double value = H.eval_point(mask);
        sum += value;
        sumsq += value * value;
    }
    rep.mc_mean = sum / double(n_samples);
    const double var = std::max(0.0, sumsq / double(n_samples) - rep.mc_mean * rep.mc_mean);
    rep.mc_stderr = std::sqrt(var / double(n_samples));
    rep.pass = std::fabs(rep.mc_mean - rep.exact) <= sigmas * std::max(rep.mc_stderr, 1e-15);
    return rep;
}

ConcentrationReport check_gaussian_concentration(const ForrelationParams& params,
                                                 uint64_t n_samples, uint64_t seed,
                                                 uint32_t workers) {
    ConcentrationReport rep;
    rep.n_samples = n_samples;
    rep.tail_bound = 2.0 * std::exp(-double(params.N) / 128.0);

    const double lo = 0.75 * params.eps;
    const double hi = 1.25 * params.eps;
    const uint64_t batch = 256;
    const uint64_t n_batches = (n_samples + batch - 1) / batch;
    std::vector<uint64_t> lows(n_batches, 0), highs(n_batches, 0);
    std::vector<double> sums(n_batches, 0.0);

    parallel_tasks(n_batches, workers, [&](uint64_t b) {
        Rng rng(seed, b);
        const uint64_t from = b * batch;
        const uint64_t to = std::min(n_samples, from + batch);
        const double stddev = std::sqrt(params.eps);
        uint64_t low = 0, high = 0;
        double acc = 0.0;
        for (uint64_t s = from; s < to; ++s) {
            // forr(x, Hx) = |x|^2 / N; the identity is verified exactly in the
            // transform suite, so the x block alone carries the statistic.
            double norm_sq = 0.0;
            for (uint64_t i = 0; i < params.N; ++i) {
                const double x = rng.gaussian(stddev);
                norm_sq += x * x;
            }
            const double f = norm_sq / double(params.N);
            acc += f;
            if (f <= lo) ++low;
            if (f >= hi) ++high;
        }
        lows[b] = low;
        highs[b] = high;
        sums[b] = acc;
    });

    double total = 0.0;
    for (uint64_t b = 0; b < n_batches; ++b) {
        rep.low_tail += lows[b];
        rep.high_tail += highs[b];
        total += sums[b];
    }
    rep.mean_forr = total / double(n_samples);
    // Chi-square: Var(forr) = 2 eps^2 / N.
    rep.mean_stderr = params.eps * std::sqrt(2.0 / double(params.N) / double(n_samples));
    const double observed = double(rep.low_tail + rep.high_tail) / double(n_samples);
    rep.bound_respected = observed <= rep.tail_bound;
    return rep;
}

StabilityReport check_rounding_stability(const ForrelationParams& params, uint64_t n_pairs,
                                         uint64_t seed, uint32_t workers) {
    StabilityReport rep;
    rep.n_pairs = n_pairs;
    const double threshold = params.eps / 4.0;

    const uint64_t batch = 64;
    const uint64_t n_batches = (n_pairs + batch - 1) / batch;
    std::vector<uint64_t> violations(n_batches, 0);

    parallel_tasks(n_batches, workers, [&](uint64_t b) {
        Rng rng(seed, b);
        const uint64_t from = b * batch;
        const uint64_t to = std::min(n_pairs, from + batch);
        uint64_t bad = 0;
        for (uint64_t s = from; s < to; ++s) {
            RealVec z0 = sample_gaussian_forrelation(params, rng);
            // Conditioning into the cube: truncate coordinates, then the
            // rounding is unbiased around z0 itself.
            trnc_inplace(z0);
            const double f0 = forr(z0);
            const SignVec z = round_to_cube(z0, rng);
            const double f = forr(std::span<const double>(to_reals(z)));
            if (std::fabs(f - f0) >= threshold) ++bad;
        }
        violations[b] = bad;
    });

    for (uint64_t v : violations) rep.violations += v;
    rep.violation_fraction = double(rep.violations) / double(n_pairs);
    return rep;
}

double probe_truncation_gap(const ForrelationParams& params, const FourierTable& H,
                            uint64_t n_samples, Rng& rng) {
    if (H.arity() != params.total_dim())
        throw std::invalid_argument("truncation probe: H must act on 2kN coordinates");
    const double p = 1.0 / (4.0 * std::pow(double(params.N), double(params.k)));
    RealVec z0(params.total_dim());
    for (double& v : z0) v = rng.uniform() - 0.5;  // z0 in [-1/2, 1/2]^{2kN}

    double acc = 0.0;
    RealVec w(params.total_dim());
    for (uint64_t s = 0; s < n_samples; ++s) {
        for (uint32_t j = 0; j < params.k; ++j) {
            const RealVec g = sample_gaussian_forrelation(params, rng);
            for (uint64_t i = 0; i < params.copy_dim(); ++i)
                w[j * params.copy_dim() + i] = z0[j * params.copy_dim() + i] + p * g[i];
        }
        const double raw = H.eval_multilinear(w);
        RealVec t(w);
        trnc_inplace(t);
        const double truncated = H.eval_multilinear(t);
        acc += std::fabs(truncated - raw);
    }
    return acc / double(n_samples);
}

}  // namespace forrlab
