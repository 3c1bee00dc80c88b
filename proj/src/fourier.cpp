#include "forrlab/fourier.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "forrlab/wht.hpp"

namespace forrlab {

namespace {

uint32_t arity_of(size_t table_size, const char* who) {
    if (!is_power_of_two(table_size))
        throw std::invalid_argument(std::string(who) + ": table length must be a power of two");
    const uint32_t m = uint32_t(std::countr_zero(uint64_t(table_size)));
    if (m > kFourierArityGuard)
        throw std::invalid_argument(std::string(who) + ": arity above guard");
    return m;
}

}  // namespace

FourierTable FourierTable::from_truth_table(std::span<const double> values) {
    FourierTable t;
    t.arity_ = arity_of(values.size(), "brute_fourier");
    t.coeff_.assign(values.begin(), values.end());
    fwht_inplace(t.coeff_);
    // The character basis is the Hadamard basis: f-hat = H f / sqrt(2^M).
    const double scale = std::pow(2.0, -double(t.arity_) / 2.0);
    for (double& c : t.coeff_) c *= scale;
    return t;
}

FourierTable FourierTable::from_coefficients(uint32_t arity, std::vector<double> coeffs) {
    if (coeffs.size() != (uint64_t(1) << arity))
        throw std::invalid_argument("FourierTable: coefficient count must be 2^arity");
    if (arity > kFourierArityGuard) throw std::invalid_argument("FourierTable: arity above guard");
    FourierTable t;
    t.arity_ = arity;
    t.coeff_ = std::move(coeffs);
    return t;
}

std::vector<double> FourierTable::truth_table() const {
    std::vector<double> table(coeff_);
    fwht_inplace(table);
    const double scale = std::pow(2.0, double(arity_) / 2.0);
    for (double& v : table) v *= scale;
    return table;
}

double FourierTable::level_mass(uint32_t level) const {
    if (level > arity_) throw std::invalid_argument("level_mass: level above arity");
    double mass = 0.0;
    for (uint64_t s = 0; s < coeff_.size(); ++s)
        if (uint32_t(std::popcount(s)) == level) mass += std::fabs(coeff_[s]);
    return mass;
}

std::vector<double> FourierTable::level_masses() const {
    std::vector<double> mass(arity_ + 1, 0.0);
    for (uint64_t s = 0; s < coeff_.size(); ++s) mass[std::popcount(s)] += std::fabs(coeff_[s]);
    return mass;
}

double FourierTable::parseval_total() const {
    double acc = 0.0;
    for (double c : coeff_) acc += c * c;
    return acc;
}

double FourierTable::eval_multilinear(std::span<const double> z) const {
    if (z.size() != arity_) throw std::invalid_argument("eval_multilinear: point has wrong arity");
    // Contract one coordinate at a time: c[S] + z_i c[S u {i}].
    std::vector<double> work(coeff_);
    uint64_t len = work.size();
    for (uint32_t i = arity_; i-- > 0;) {
        len >>= 1;
        const double zi = z[i];
        for (uint64_t s = 0; s < len; ++s) work[s] += zi * work[s | len];
        work.resize(len);
    }
    return work[0];
}

double FourierTable::eval_point(uint64_t u) const {
    if (table_cache_.empty()) table_cache_ = truth_table();
    return table_cache_[u];
}

FourierTable convolve_spectra(const FourierTable& f, const FourierTable& g) {
    if (f.arity() != g.arity()) throw std::invalid_argument("convolve: arity mismatch");
    std::vector<double> prod(f.size());
    for (uint64_t s = 0; s < prod.size(); ++s) prod[s] = f.coefficient(s) * g.coefficient(s);
    return FourierTable::from_coefficients(f.arity(), std::move(prod));
}

std::vector<double> convolution_truth_table(std::span<const double> f, std::span<const double> g) {
    const uint32_t m = arity_of(f.size(), "convolution");
    if (g.size() != f.size()) throw std::invalid_argument("convolution: size mismatch");
    if (m > 12) throw std::invalid_argument("convolution: definitional form guarded at M <= 12");
    const uint64_t size = uint64_t(1) << m;
    std::vector<double> out(size, 0.0);
    for (uint64_t w = 0; w < size; ++w) {
        double acc = 0.0;
        for (uint64_t u = 0; u < size; ++u) acc += f[u] * g[u ^ w];
        out[w] = acc / double(size);
    }
    return out;
}

ConvolutionReport check_convolution(std::span<const double> f, std::span<const double> g,
                                    double tol) {
    const FourierTable ft = FourierTable::from_truth_table(f);
    const FourierTable gt = FourierTable::from_truth_table(g);
    const FourierTable direct = FourierTable::from_truth_table(convolution_truth_table(f, g));
    ConvolutionReport rep;
    for (uint64_t s = 0; s < ft.size(); ++s) {
        const double dev = std::fabs(direct.coefficient(s) - ft.coefficient(s) * gt.coefficient(s));
        rep.max_coeff_deviation = std::max(rep.max_coeff_deviation, dev);
    }
    rep.pass = rep.max_coeff_deviation < tol;
    return rep;
}

double tree_level_mass_scale(uint32_t depth, uint32_t k, uint64_t N) {
    return std::pow(double(depth) * std::log2(double(k) * double(N)), double(k));
}

double ac0_level_mass_scale(double log2_size, uint32_t circuit_depth, uint32_t k) {
    return std::pow(std::pow(log2_size, double(circuit_depth) - 1.0), 2.0 * double(k));
}

LevelKReport check_level_k_inequality(const PointSet& A, uint32_t level) {
    LevelKReport rep;
    const uint64_t size = A.domain_size();
    const uint64_t cnt = A.count();
    rep.alpha = double(cnt) / double(size);
    if (cnt == 0 || cnt == size) return rep;  // alpha in {0,1}: inapplicable
    const double log_inv = std::log(1.0 / rep.alpha);
    if (double(level) > 2.0 * log_inv || level == 0) return rep;
    rep.applicable = true;

    std::vector<double> indicator(size, 0.0);
    for (uint64_t u = 0; u < size; ++u)
        if (A.test(u)) indicator[u] = 1.0;
    const FourierTable t = FourierTable::from_truth_table(indicator);
    double lhs = 0.0;
    for (uint64_t s = 0; s < size; ++s)
        if (uint32_t(std::popcount(s)) == level) lhs += t.coefficient(s) * t.coefficient(s);
    rep.lhs = lhs;
    rep.rhs = rep.alpha * rep.alpha *
              std::pow(2.0 * std::exp(1.0) * log_inv / double(level), double(level));
    rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-12);
    return rep;
}

}  // namespace forrlab
