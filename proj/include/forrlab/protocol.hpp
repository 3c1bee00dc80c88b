#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "forrlab/fourier.hpp"
#include "forrlab/pointset.hpp"
#include "forrlab/rng.hpp"

namespace forrlab {

// Two-party rectangle protocols, represented extensionally: an explicit
// partition of {-1,1}^M x {-1,1}^M into labeled rectangles.
struct Rectangle {
    PointSet alice;
    PointSet bob;
    int8_t label = 1;
};

struct RectangleProtocol {
    uint32_t arity = 0;     // M
    uint32_t cost = 0;      // communication bits; rectangle count <= 2^cost
    uint32_t min_cost = 0;  // declared l: every side has measure <= 2^-l
    std::vector<Rectangle> rects;

    static RectangleProtocol constant(uint32_t arity, int8_t label);

    int8_t eval(uint64_t x, uint64_t y) const;

    // Exhaustive partition check (pairwise disjointness plus total measure).
    // Also verifies the declared cost and min-cost. Guarded at M <= 16.
    void validate() const;

    // Largest l such that every rectangle side has at most 2^{M-l} points.
    uint32_t measured_min_cost() const;
};

// H_C(z) = E_{x ~ U_M}[C(x, x.z)], evaluated exactly at one point (M <= 22).
double xor_lift_value(const RectangleProtocol& C, uint64_t z_mask);

// Full truth table of H_C; needs 4^M protocol evaluations, guarded at M <= 13.
std::vector<double> xor_lift_table(const RectangleProtocol& C);

// Expected lift spectrum from the rectangle structure:
// H-hat(S) = sum_R label_R * 1A-hat(S) * 1B-hat(S).
std::vector<double> lift_spectrum_from_rectangles(const RectangleProtocol& C);

// ext^l(C): both players declare l junk bits, then follow C. Cost grows by
// 2l, min-cost becomes at least l, rectangle count is multiplied by 2^{2l}.
RectangleProtocol extend_protocol(const RectangleProtocol& C, uint32_t l);

// Restriction vector over [M]: entries in {-1, 0, +1}; nonzero entries fix
// coordinates.
using Restriction = std::vector<int8_t>;

inline uint64_t apply_restriction_mask(const Restriction& v, uint64_t z_mask) {
    uint64_t out = z_mask;
    for (size_t j = 0; j < v.size(); ++j) {
        if (v[j] == 0) continue;
        if (v[j] < 0) out |= uint64_t(1) << j;   // fix to -1
        else out &= ~(uint64_t(1) << j);         // fix to +1
    }
    return out;
}

// Uniform distribution over deterministic protocols realizing the restricted
// xor-lift: for each assignment a of the fixed coordinates, Alice overwrites
// with a and Bob with a.v.
struct ProtocolDistribution {
    std::vector<RectangleProtocol> protocols;  // uniform weights

    double lift_value(uint64_t z_mask) const;  // E_C[H_C(z)]
};

ProtocolDistribution restrict_xor_protocol(const RectangleProtocol& C, const Restriction& v);

// Random protocol built by recursive random set splitting with random leaf
// labels; at most 2^cost_budget rectangles.
RectangleProtocol random_protocol(uint32_t arity, uint32_t cost_budget, Rng& rng);

// Structured text format: lists rectangles as explicit point-index sets.
void write_protocol(std::ostream& os, const RectangleProtocol& C);
RectangleProtocol read_protocol(std::istream& is);
void save_protocol(const std::string& path, const RectangleProtocol& C);
RectangleProtocol load_protocol(const std::string& path);

}  // namespace forrlab
