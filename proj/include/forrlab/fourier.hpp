#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "forrlab/pointset.hpp"

namespace forrlab {

constexpr uint32_t kFourierArityGuard = 22;

// Dense Fourier spectrum of a function on {-1,1}^M. Truth tables and
// coefficient vectors are indexed by masks: point u has z_i = -1 iff bit i of
// u is set; coefficient slot S holds f-hat(S) for the subset with bit mask S.
// The transform reuses the Walsh-Hadamard kernel (the character basis is the
// Hadamard basis).
class FourierTable {
  public:
    FourierTable() = default;

    static FourierTable from_truth_table(std::span<const double> values);
    static FourierTable from_coefficients(uint32_t arity, std::vector<double> coeffs);

    uint32_t arity() const { return arity_; }
    uint64_t size() const { return uint64_t(1) << arity_; }

    double coefficient(uint64_t subset_mask) const { return coeff_[subset_mask]; }
    std::span<const double> coefficients() const { return coeff_; }

    std::vector<double> truth_table() const;

    // L_level(f) = sum of |f-hat(S)| over |S| = level.
    double level_mass(uint32_t level) const;
    std::vector<double> level_masses() const;

    double parseval_total() const;  // sum of squared coefficients

    // Multilinear extension at an arbitrary real point (length M). Agrees with
    // the truth table on +-1 points.
    double eval_multilinear(std::span<const double> z) const;

    // Exact truth-table value at a point index. The first call materializes
    // the table; share a table across threads only after that.
    double eval_point(uint64_t u) const;

  private:
    uint32_t arity_ = 0;
    std::vector<double> coeff_;
    mutable std::vector<double> table_cache_;
};

// Coefficient-wise product spectrum, the Fourier side of f*g.
FourierTable convolve_spectra(const FourierTable& f, const FourierTable& g);

// (f*g)(z) = E_x[f(x) g(x.z)] computed from the definition; O(4^M), M <= 12.
std::vector<double> convolution_truth_table(std::span<const double> f, std::span<const double> g);

struct ConvolutionReport {
    double max_coeff_deviation = 0.0;
    bool pass = false;
};

// Compares the spectrum of the definitional convolution with the
// coefficient-wise product.
ConvolutionReport check_convolution(std::span<const double> f, std::span<const double> g,
                                    double tol = 1e-10);

struct LevelKReport {
    bool applicable = false;  // requires nonempty proper A and k <= 2 ln(1/alpha)
    bool pass = false;
    double alpha = 0.0;
    double lhs = 0.0;  // sum of squared level-k coefficients of the indicator
    double rhs = 0.0;  // alpha^2 (2e ln(1/alpha) / k)^k
};

// Level-k inequality check for the {0,1} indicator of A.
LevelKReport check_level_k_inequality(const PointSet& A, uint32_t level);

// Reference scales for the level-2k mass of bounded computation classes,
// used in report notes only. Multiplicative constants are unpinned.
double tree_level_mass_scale(uint32_t depth, uint32_t k, uint64_t N);       // (d log2(kN))^k
double ac0_level_mass_scale(double log2_size, uint32_t circuit_depth, uint32_t k);

}  // namespace forrlab
