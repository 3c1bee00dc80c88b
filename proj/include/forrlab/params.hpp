#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "forrlab/wht.hpp"

namespace forrlab {

enum class Parity { Even, Odd };

// Problem parameters. The default epsilon follows 1 / (60 k^2 ln N); desk
// scale experiments override it (typically eps = 0.2) because the promise gap
// at the default value is only resolvable at astronomically large N.
struct ForrelationParams {
    uint64_t N = 0;    // power of two
    uint32_t n = 0;    // log2 N
    uint32_t k = 1;    // number of copies
    double eps = 0.0;  // promise scale, in (0, 1)

    static double default_epsilon(uint64_t N, uint32_t k) {
        return 1.0 / (60.0 * double(k) * double(k) * std::log(double(N)));
    }

    // eps == 0 selects the default epsilon.
    static ForrelationParams make(uint64_t N, uint32_t k, double eps = 0.0) {
        if (!is_power_of_two(N) || N < 2)
            throw std::invalid_argument("params: N must be a power of two, N >= 2");
        if (k < 1) throw std::invalid_argument("params: k must be >= 1");
        ForrelationParams p;
        p.N = N;
        p.n = uint32_t(std::countr_zero(N));
        p.k = k;
        p.eps = (eps == 0.0) ? default_epsilon(N, k) : eps;
        if (!(p.eps > 0.0 && p.eps < 1.0)) throw std::invalid_argument("params: eps must lie in (0, 1)");
        return p;
    }

    double yes_threshold() const { return eps / 2.0; }  // forr >= eps/2 -> yes
    double no_threshold() const { return eps / 4.0; }   // forr <= eps/4 -> no

    uint64_t copy_dim() const { return 2 * N; }
    uint64_t total_dim() const { return 2 * uint64_t(k) * N; }
};

}  // namespace forrlab
