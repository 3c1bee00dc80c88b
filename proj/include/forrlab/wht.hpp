#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace forrlab {

inline bool is_power_of_two(uint64_t n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place normalized Walsh-Hadamard transform, v <- H_N v, where
// H_N(i, j) = (-1)^{<i,j>_2} / sqrt(N) with bit expansions taken LSB-first.
// Each butterfly stage divides by sqrt(2), so intermediate magnitudes stay
// bounded and applying the transform twice restores the input.
inline void fwht_inplace(std::span<double> v) {
    const size_t n = v.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("fwht: length must be a power of two");
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    for (size_t h = 1; h < n; h <<= 1) {
        for (size_t i = 0; i < n; i += 2 * h) {
            for (size_t j = i; j < i + h; ++j) {
                const double a = v[j];
                const double b = v[j + h];
                v[j] = (a + b) * kInvSqrt2;
                v[j + h] = (a - b) * kInvSqrt2;
            }
        }
    }
}

inline std::vector<double> fwht(std::vector<double> v) {
    fwht_inplace(v);
    return v;
}

// Mod-2 inner product of the LSB-first bit expansions of a and b.
inline int mod2_inner(uint64_t a, uint64_t b) { return std::popcount(a & b) & 1; }

// O(N^2) reference apply of the normalized Hadamard matrix. Guarded against
// quadratic blowup; exists only to cross-check fwht.
inline std::vector<double> naive_hadamard_apply(std::span<const double> v) {
    const size_t n = v.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("naive_hadamard_apply: length must be a power of two");
    if (n > (size_t(1) << 12)) throw std::invalid_argument("naive_hadamard_apply: refusing length > 2^12");
    const double scale = 1.0 / std::sqrt(double(n));
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < n; ++j) acc += (mod2_inner(i, j) ? -v[j] : v[j]);
        out[i] = acc * scale;
    }
    return out;
}

// forr(z) = <x, H_N y> / N for z = (x, y) of length 2N.
inline double forr(std::span<const double> z) {
    const size_t len = z.size();
    if (len % 2 != 0 || !is_power_of_two(len / 2))
        throw std::invalid_argument("forr: length must be 2N with N a power of two");
    const size_t n = len / 2;
    std::vector<double> hy(z.begin() + n, z.end());
    fwht_inplace(hy);
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += z[i] * hy[i];
    return acc / double(n);
}

inline double forr(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("forr: halves must have equal length");
    std::vector<double> z(x.begin(), x.end());
    z.insert(z.end(), y.begin(), y.end());
    return forr(z);
}

}  // namespace forrlab
