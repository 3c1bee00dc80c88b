#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "forrlab/params.hpp"
#include "forrlab/rng.hpp"

namespace forrlab {

using RealVec = std::vector<double>;
using SignVec = std::vector<int8_t>;  // entries are +1 / -1

inline RealVec to_reals(const SignVec& s) { return RealVec(s.begin(), s.end()); }

// Partial-function label. Yes carries the numeric value -1, No carries +1;
// Outside is never coerced to a sign.
enum class PromiseLabel : int8_t { Yes = -1, No = +1, Outside = 0 };

inline int label_value(PromiseLabel l) { return int(l); }

PromiseLabel label(std::span<const double> z, const ForrelationParams& params);
PromiseLabel label(const SignVec& z, const ForrelationParams& params);

// XOR of the per-copy labels on a 2kN input; Outside propagates.
PromiseLabel label_k(std::span<const double> z, const ForrelationParams& params);
PromiseLabel label_k(const SignVec& z, const ForrelationParams& params);

struct PromiseStats {
    double fraction = 0.0;  // samples landing on the expected label
    double stderr_ = 0.0;
    uint64_t n_samples = 0;
    PromiseLabel expected = PromiseLabel::Outside;
};

// Fraction of tilde-mu samples of the given parity that land on the label the
// construction aims for (even -> No, odd -> Yes).
PromiseStats promise_statistics(const ForrelationParams& params, Parity parity, uint64_t n_samples,
                                Rng& rng);

}  // namespace forrlab
