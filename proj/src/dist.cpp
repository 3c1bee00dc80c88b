#include "forrlab/dist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "forrlab/wht.hpp"

namespace forrlab {

SignVec round_to_cube(std::span<const double> z, Rng& rng) {
    SignVec out(z.size());
    for (size_t i = 0; i < z.size(); ++i) out[i] = round_coord(z[i], rng);
    return out;
}

RealVec sample_gaussian_forrelation(const ForrelationParams& params, Rng& rng) {
    const uint64_t N = params.N;
    const double stddev = std::sqrt(params.eps);
    RealVec z(2 * N);
    for (uint64_t i = 0; i < N; ++i) z[i] = rng.gaussian(stddev);
    std::copy(z.begin(), z.begin() + N, z.begin() + N);
    fwht_inplace(std::span<double>(z).subspan(N, N));
    return z;
}

SignVec sample_gaussian_forrelation_rounded(const ForrelationParams& params, Rng& rng) {
    const RealVec z = sample_gaussian_forrelation(params, rng);
    return round_to_cube(z, rng);
}

SignVec sample_uniform_signs(uint64_t m, Rng& rng) {
    SignVec out(m);
    for (auto& s : out) s = rng.sign();
    return out;
}

uint32_t sample_parity_mask(uint32_t k, Parity parity, Rng& rng) {
    uint32_t mask = 0;
    for (uint32_t j = 0; j + 1 < k; ++j)
        if (rng.bits() & 1) mask |= uint32_t(1) << j;
    const bool odd_so_far = std::popcount(mask) & 1;
    const bool want_odd = parity == Parity::Odd;
    if (odd_so_far != want_odd) mask |= uint32_t(1) << (k - 1);
    return mask;
}

MuSample sample_mu(const ForrelationParams& params, Parity parity, Rng& rng) {
    MuSample out;
    out.gauss_mask = sample_parity_mask(params.k, parity, rng);
    out.z.resize(params.total_dim());
    const uint64_t d = params.copy_dim();
    for (uint32_t j = 0; j < params.k; ++j) {
        auto block = std::span<double>(out.z).subspan(j * d, d);
        if (out.gauss_mask & (uint32_t(1) << j)) {
            const RealVec g = sample_gaussian_forrelation(params, rng);
            std::copy(g.begin(), g.end(), block.begin());
        } else {
            for (auto& v : block) v = double(rng.sign());
        }
    }
    return out;
}

namespace {

// Writes one rounded copy into dst: base is trnc(gaussian sample) for Gaussian
// copies and zero for uniform copies, so a shared uniform stream yields the
// exact tilde-G / U marginals while coupling paired samples coordinate-wise.
void fill_rounded_copy(std::span<int8_t> dst, std::span<const double> base,
                       std::span<const double> unif) {
    for (size_t i = 0; i < dst.size(); ++i) {
        const double p = 0.5 * (1.0 + trnc(base[i]));
        dst[i] = unif[i] < p ? int8_t(1) : int8_t(-1);
    }
}

}  // namespace

MuSampleSigns sample_mu_rounded(const ForrelationParams& params, Parity parity, Rng& rng) {
    MuSampleSigns out;
    out.gauss_mask = sample_parity_mask(params.k, parity, rng);
    out.z.resize(params.total_dim());
    const uint64_t d = params.copy_dim();
    for (uint32_t j = 0; j < params.k; ++j) {
        auto block = std::span<int8_t>(out.z).subspan(j * d, d);
        if (out.gauss_mask & (uint32_t(1) << j)) {
            const RealVec g = sample_gaussian_forrelation(params, rng);
            for (size_t i = 0; i < block.size(); ++i) block[i] = round_coord(g[i], rng);
        } else {
            for (auto& s : block) s = rng.sign();
        }
    }
    return out;
}

std::pair<MuSampleSigns, MuSampleSigns> sample_mu_rounded_coupled(const ForrelationParams& params,
                                                                  Rng& rng) {
    const uint32_t k = params.k;
    const uint64_t d = params.copy_dim();

    // Shared membership prefix; the final copy fixes the parity on each side,
    // so the two instances differ in at most that copy.
    uint32_t prefix = 0;
    for (uint32_t j = 0; j + 1 < k; ++j)
        if (rng.bits() & 1) prefix |= uint32_t(1) << j;
    const bool prefix_odd = std::popcount(prefix) & 1;
    const uint32_t top = uint32_t(1) << (k - 1);
    const uint32_t mask_even = prefix | (prefix_odd ? top : 0);
    const uint32_t mask_odd = prefix | (prefix_odd ? 0 : top);

    MuSampleSigns even_side, odd_side;
    even_side.gauss_mask = mask_even;
    odd_side.gauss_mask = mask_odd;
    even_side.z.resize(params.total_dim());
    odd_side.z.resize(params.total_dim());

    RealVec zeros(d, 0.0);
    RealVec unif(d);
    for (uint32_t j = 0; j < k; ++j) {
        const bool in_even = mask_even & (uint32_t(1) << j);
        const bool in_odd = mask_odd & (uint32_t(1) << j);
        // One Gaussian draw and one uniform block per copy, consumed on both
        // sides, keeps the streams aligned.
        const RealVec g = sample_gaussian_forrelation(params, rng);
        for (auto& u : unif) u = rng.uniform();
        auto even_block = std::span<int8_t>(even_side.z).subspan(j * d, d);
        auto odd_block = std::span<int8_t>(odd_side.z).subspan(j * d, d);
        fill_rounded_copy(even_block, in_even ? std::span<const double>(g) : zeros, unif);
        fill_rounded_copy(odd_block, in_odd ? std::span<const double>(g) : zeros, unif);
    }
    return {std::move(even_side), std::move(odd_side)};
}

SignVec SigmaSampler::sample(Rng& rng) {
    const Parity parity = want_ == PromiseLabel::Yes ? Parity::Odd : Parity::Even;
    for (uint64_t tries = 0; tries < max_rejects_; ++tries) {
        ++attempts_;
        MuSampleSigns s = sample_mu_rounded(params_, parity, rng);
        if (label_k(s.z, params_) == want_) {
            ++accepts_;
            return std::move(s.z);
        }
    }
    throw PromiseFailure("sigma: promise label unreachable within " + std::to_string(max_rejects_) +
                         " draws (rejection rate " + std::to_string(rejection_rate()) +
                         "); params too small for concentration");
}

// ---------------------------------------------------------------------------
// Exact moment oracles
// ---------------------------------------------------------------------------

namespace {

// Covariance of two coordinates of G, coordinates in [0, 2N).
double coord_covariance(uint32_t a, uint32_t b, const ForrelationParams& params) {
    const uint64_t N = params.N;
    const bool ax = a < N, bx = b < N;
    const uint64_t ai = ax ? a : a - N;
    const uint64_t bi = bx ? b : b - N;
    if (ax == bx) return ai == bi ? params.eps : 0.0;
    const double sign = mod2_inner(ai, bi) ? -1.0 : 1.0;
    return params.eps * sign / std::sqrt(double(N));
}

double isserlis_sum(std::vector<uint32_t>& coords, const ForrelationParams& params) {
    const size_t m = coords.size();
    if (m == 0) return 1.0;
    if (m % 2 != 0) return 0.0;
    // Pair the first coordinate with each partner and recurse.
    const uint32_t head = coords[0];
    double total = 0.0;
    for (size_t p = 1; p < m; ++p) {
        const double cov = coord_covariance(head, coords[p], params);
        if (cov == 0.0) continue;
        std::vector<uint32_t> rest;
        rest.reserve(m - 2);
        for (size_t q = 1; q < m; ++q)
            if (q != p) rest.push_back(coords[q]);
        total += cov * isserlis_sum(rest, params);
    }
    return total;
}

void check_coord_range(const CoordSet& coords, const ForrelationParams& params, const char* who) {
    for (uint32_t c : coords)
        if (c >= params.copy_dim()) throw std::invalid_argument(std::string(who) + ": coordinate out of range");
}

}  // namespace

double gaussian_moment_exact_coords(const CoordSet& coords, const ForrelationParams& params) {
    if (coords.size() > kMomentGuard)
        throw std::invalid_argument("gaussian_moment_exact: total size above guard");
    check_coord_range(coords, params, "gaussian_moment_exact");
    std::vector<uint32_t> work(coords);
    return isserlis_sum(work, params);
}

double gaussian_moment_exact(const CoordSet& S, const CoordSet& T, const ForrelationParams& params) {
    if (S.size() + T.size() > kMomentGuard)
        throw std::invalid_argument("gaussian_moment_exact: total size above guard");
    CoordSet coords;
    coords.reserve(S.size() + T.size());
    for (uint32_t i : S) {
        if (i >= params.N) throw std::invalid_argument("gaussian_moment_exact: x index out of range");
        coords.push_back(i);
    }
    for (uint32_t j : T) {
        if (j >= params.N) throw std::invalid_argument("gaussian_moment_exact: y index out of range");
        coords.push_back(uint32_t(params.N) + j);
    }
    return gaussian_moment_exact_coords(coords, params);
}

double mu_moment_difference(const MomentIndex& index, const ForrelationParams& params) {
    if (index.per_copy.size() != params.k)
        throw std::invalid_argument("mu_moment_difference: index must have k components");
    if (index.total_size() > kMomentGuard)
        throw std::invalid_argument("mu_moment_difference: total size above guard");
    double product = std::ldexp(1.0, -int(params.k) + 1);  // 2^{-(k-1)}
    for (const CoordSet& I_j : index.per_copy) {
        const double u_hat = I_j.empty() ? 1.0 : 0.0;
        const double g_hat = gaussian_moment_exact_coords(I_j, params);
        product *= (u_hat - g_hat);
        if (product == 0.0) return 0.0;
    }
    return product;
}

double mu_moment_difference_bound(uint64_t total_size, const ForrelationParams& params) {
    if (total_size % 2 != 0) return 0.0;
    const uint64_t i = total_size / 2;
    double factorial = 1.0;
    for (uint64_t t = 2; t <= i; ++t) factorial *= double(t);
    return std::ldexp(1.0, -int(params.k) + 1) * std::pow(params.eps, double(i)) *
           std::pow(double(params.N), -double(i) / 2.0) * factorial;
}

// ---------------------------------------------------------------------------
// Monte Carlo cross-check
// ---------------------------------------------------------------------------

DistId parse_dist_id(const std::string& name) {
    if (name == "u" || name == "uniform") return DistId::Uniform;
    if (name == "g" || name == "gauss") return DistId::Gauss;
    if (name == "gt" || name == "gauss-rounded") return DistId::GaussRounded;
    if (name == "mu0") return DistId::Mu0;
    if (name == "mu1") return DistId::Mu1;
    if (name == "mu0t" || name == "mu0-rounded") return DistId::Mu0Rounded;
    if (name == "mu1t" || name == "mu1-rounded") return DistId::Mu1Rounded;
    throw std::invalid_argument("unknown distribution id: " + name);
}

std::string dist_id_name(DistId id) {
    switch (id) {
        case DistId::Uniform: return "u";
        case DistId::Gauss: return "g";
        case DistId::GaussRounded: return "gt";
        case DistId::Mu0: return "mu0";
        case DistId::Mu1: return "mu1";
        case DistId::Mu0Rounded: return "mu0t";
        case DistId::Mu1Rounded: return "mu1t";
    }
    return "?";
}

Estimate estimate_moment(DistId id, const MomentIndex& index, const ForrelationParams& params,
                         uint64_t n_samples, Rng& rng) {
    if (n_samples < 1000) throw std::invalid_argument("estimate_moment: need n_samples >= 1000");
    const uint64_t d = params.copy_dim();
    const uint32_t k = params.k;
    if (index.per_copy.size() != k)
        throw std::invalid_argument("estimate_moment: index must have k components");
    for (const auto& c : index.per_copy) check_coord_range(c, params, "estimate_moment");

    // Flattened coordinates into [0, 2kN).
    std::vector<uint64_t> flat;
    for (uint32_t j = 0; j < k; ++j)
        for (uint32_t c : index.per_copy[j]) flat.push_back(uint64_t(j) * d + c);

    double sum = 0.0, sumsq = 0.0;
    RealVec z;
    for (uint64_t s = 0; s < n_samples; ++s) {
        switch (id) {
            case DistId::Uniform: {
                z.resize(params.total_dim());
                for (auto& v : z) v = double(rng.sign());
                break;
            }
            case DistId::Gauss: {
                if (k != 1) throw std::invalid_argument("estimate_moment: g is a single-copy distribution");
                z = sample_gaussian_forrelation(params, rng);
                break;
            }
            case DistId::GaussRounded: {
                if (k != 1) throw std::invalid_argument("estimate_moment: gt is a single-copy distribution");
                z = to_reals(sample_gaussian_forrelation_rounded(params, rng));
                break;
            }
            case DistId::Mu0: z = sample_mu(params, Parity::Even, rng).z; break;
            case DistId::Mu1: z = sample_mu(params, Parity::Odd, rng).z; break;
            case DistId::Mu0Rounded: z = to_reals(sample_mu_rounded(params, Parity::Even, rng).z); break;
            case DistId::Mu1Rounded: z = to_reals(sample_mu_rounded(params, Parity::Odd, rng).z); break;
        }
        double prod = 1.0;
        for (uint64_t c : flat) prod *= z[c];
        sum += prod;
        sumsq += prod * prod;
    }
    Estimate e;
    e.n_samples = n_samples;
    e.value = sum / double(n_samples);
    const double var = std::max(0.0, sumsq / double(n_samples) - e.value * e.value);
    e.stderr_ = std::sqrt(var / double(n_samples));
    return e;
}

}  // namespace forrlab
