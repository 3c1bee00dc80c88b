#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "forrlab/identity.hpp"
#include "forrlab/rng.hpp"
#include "forrlab/wht.hpp"

using namespace forrlab;

namespace {

// Odometer over {0..T}^k.
bool next_point(std::vector<uint32_t>& b, uint32_t T) {
    for (auto& v : b) {
        if (v < T) {
            ++v;
            return true;
        }
        v = 0;
    }
    return false;
}

}  // namespace

TEST_CASE("telescoping coefficients match the corner formula exhaustively") {
    for (uint32_t k = 1; k <= 3; ++k) {
        for (uint32_t T = 1; T <= 4; ++T) {
            std::vector<uint32_t> b(k, 0);
            do {
                CHECK(telescoping_coefficient(b, T) == telescoping_corner_formula(b, T));
            } while (next_point(b, T));
        }
    }
}

TEST_CASE("telescoping coefficient spot values") {
    // Interior points vanish.
    std::vector<uint32_t> interior{1, 2};
    CHECK(telescoping_coefficient(interior, 3) == 0);
    // The origin gets +1.
    std::vector<uint32_t> origin{0, 0, 0};
    CHECK(telescoping_coefficient(origin, 4) == 1);
    // Corners b = T*B carry (-1)^{|B|}; k=3, T=4 exhaustively.
    for (uint32_t B = 0; B < 8; ++B) {
        std::vector<uint32_t> b(3, 0);
        for (uint32_t j = 0; j < 3; ++j)
            if (B & (1u << j)) b[j] = 4;
        const long long want = (std::popcount(B) & 1) ? -1 : 1;
        CHECK(telescoping_coefficient(b, 4) == want);
    }
}

TEST_CASE("telescoping guards") {
    std::vector<uint32_t> b(9, 0);
    CHECK_THROWS_AS(telescoping_coefficient(b, 4), std::invalid_argument);
    std::vector<uint32_t> b2{0, 0};
    CHECK_THROWS_AS(telescoping_coefficient(b2, 17), std::invalid_argument);
    std::vector<uint32_t> out_of_grid{5, 0};
    CHECK_THROWS_AS(telescoping_coefficient(out_of_grid, 4), std::invalid_argument);
}

TEST_CASE("pathwise telescoping: one dimension is plain telescoping") {
    Rng rng(81);
    std::vector<double> g(5);
    for (auto& v : g) v = 2.0 * rng.uniform() - 1.0;
    const auto rep = check_telescoping_pathwise(
        1, 4, [&](std::span<const uint32_t> a) { return g[a[0]]; }, 1e-12);
    CHECK(rep.pass);
    CHECK(rep.rhs == doctest::Approx(g[0] - g[4]).epsilon(1e-12));
}

TEST_CASE("pathwise telescoping holds for random grid labelings") {
    Rng rng(82);
    for (uint32_t k : {1u, 2u, 3u}) {
        for (uint32_t T : {2u, 3u, 4u}) {
            for (int rep = 0; rep < 100; ++rep) {
                // Random labeling over the grid, keyed by the point.
                std::map<std::vector<uint32_t>, double> g;
                const auto result = check_telescoping_pathwise(
                    k, T,
                    [&](std::span<const uint32_t> a) {
                        std::vector<uint32_t> key(a.begin(), a.end());
                        auto it = g.find(key);
                        if (it == g.end()) it = g.emplace(key, 2.0 * rng.uniform() - 1.0).first;
                        return it->second;
                    },
                    1e-12);
                CHECK(result.pass);
            }
        }
    }
}

TEST_CASE("pathwise telescoping on constants cancels") {
    const auto rep = check_telescoping_pathwise(
        2, 3, [](std::span<const uint32_t>) { return 0.37; }, 1e-12);
    CHECK(rep.pass);
    CHECK(std::fabs(rep.lhs) < 1e-12);
    CHECK(std::fabs(rep.rhs) < 1e-12);
}

TEST_CASE("walk grid prefixes have the advertised marginals") {
    const auto params = ForrelationParams::make(8, 2, 0.2);
    const uint32_t T = 3;
    Rng rng(83);
    const uint64_t n_grids = 100000;

    // Accumulate covariance statistics of the full prefix z^{<=(T,0)}: the
    // first copy should look like G, the second copy is exactly zero.
    double sxx = 0, sxy = 0, syy = 0;
    bool off_copy_zero = true;
    const std::vector<uint32_t> corner{T, 0};
    for (uint64_t it = 0; it < n_grids; ++it) {
        const WalkGrid grid(params, T, rng);
        const RealVec z = grid.prefix(corner);
        const double x0 = z[0];
        const double y0 = z[8];
        sxx += x0 * x0;
        sxy += x0 * y0;
        syy += y0 * y0;
        for (uint64_t i = 16; i < 32; ++i)
            if (z[i] != 0.0) off_copy_zero = false;
    }
    CHECK(off_copy_zero);
    const double n = double(n_grids);
    const double eps = params.eps;
    const double cov_expected = eps / std::sqrt(8.0);
    // Var of a squared-gaussian mean estimator: 2 eps^2 / n.
    CHECK(std::fabs(sxx / n - eps) < 3.0 * eps * std::sqrt(2.0 / n));
    CHECK(std::fabs(syy / n - eps) < 3.0 * eps * std::sqrt(2.0 / n));
    CHECK(std::fabs(sxy / n - cov_expected) < 3.0 * eps * std::sqrt(2.0 / n));
}

TEST_CASE("walk grid increments scale with p") {
    const auto params = ForrelationParams::make(16, 1, 0.2);
    Rng rng(84);
    const WalkGrid grid(params, 4, rng);
    // Full prefix equals the sum of all increments.
    const std::vector<uint32_t> full{4};
    const RealVec z = grid.prefix(full);
    RealVec manual(32, 0.0);
    for (uint32_t t = 1; t <= 4; ++t) {
        const RealVec& inc = grid.increment(0, t);
        for (size_t i = 0; i < 32; ++i) manual[i] += inc[i];
    }
    for (size_t i = 0; i < 32; ++i) CHECK(z[i] == doctest::Approx(manual[i]).epsilon(1e-14));
}

TEST_CASE("rounding law: empty character is exact") {
    const auto H = FourierTable::from_coefficients(4, {1.0, 0, 0, 0, 0, 0, 0, 0,
                                                       0, 0, 0, 0, 0, 0, 0, 0});
    Rng rng(85);
    const std::vector<double> z{0.2, -0.7, 1.4, 0.0};
    const auto rep = check_rounding_law(H, z, 2000, rng);
    CHECK(rep.pass);
    CHECK(rep.exact == doctest::Approx(1.0));
    CHECK(rep.mc_mean == doctest::Approx(1.0));
}

TEST_CASE("rounding law for random low-degree multilinears") {
    Rng rng(86);
    const uint32_t m = 8;
    for (int rep = 0; rep < 5; ++rep) {
        // Random degree <= 3 coefficients.
        std::vector<double> coeffs(uint64_t(1) << m, 0.0);
        for (uint64_t s = 0; s < coeffs.size(); ++s)
            if (std::popcount(s) <= 3) coeffs[s] = (2.0 * rng.uniform() - 1.0) / 16.0;
        const auto H = FourierTable::from_coefficients(m, std::move(coeffs));
        std::vector<double> z(m);
        for (auto& v : z) v = 4.0 * rng.uniform() - 2.0;  // in [-2, 2]
        const auto result = check_rounding_law(H, z, 100000, rng);
        CHECK(result.pass);
    }
}

TEST_CASE("gaussian concentration at small N keeps the advertised shape") {
    const auto params = ForrelationParams::make(256, 1, 0.2);
    const auto rep = check_gaussian_concentration(params, 20000, 87, 2);
    CHECK(rep.n_samples == 20000);
    CHECK(std::fabs(rep.mean_forr - params.eps) < 3.0 * rep.mean_stderr);
    // At this N the chi-square bound is loose; the observed tail respects it.
    CHECK(rep.bound_respected);
}

TEST_CASE("gaussian concentration at tiny N reports both numbers without asserting") {
    // The bound is asymptotic; at N = 16 it exceeds 1 and carries no content.
    // The check reports the observed tail and the bound side by side.
    const auto params = ForrelationParams::make(16, 1, 0.2);
    const auto rep = check_gaussian_concentration(params, 5000, 95, 2);
    CHECK(rep.tail_bound == doctest::Approx(2.0 * std::exp(-16.0 / 128.0)));
    CHECK(rep.low_tail + rep.high_tail <= rep.n_samples);
    CHECK(rep.bound_respected);  // vacuous at this N: the bound exceeds 1
}

TEST_CASE("rounding a corner vector changes nothing") {
    Rng rng(88);
    SignVec corner(128);
    for (auto& v : corner) v = rng.sign();
    const RealVec z0 = to_reals(corner);
    const SignVec z = round_to_cube(z0, rng);
    CHECK(z == corner);
    CHECK(forr(std::span<const double>(to_reals(z))) == forr(z0));
}

TEST_CASE("rounding stability shrinks with N") {
    // At N = 2^10 the eps/4 threshold is only ~1.6 sigma of the rounding
    // fluctuation; by N = 2^12 it is ~3.3 sigma and violations die out.
    const auto coarse = ForrelationParams::make(uint64_t(1) << 10, 1, 0.2);
    const auto fine = ForrelationParams::make(uint64_t(1) << 12, 1, 0.2);
    const auto rep_coarse = check_rounding_stability(coarse, 2000, 89, 2);
    const auto rep_fine = check_rounding_stability(fine, 2000, 89, 2);
    CHECK(rep_fine.violation_fraction <= 0.01);
    CHECK(rep_fine.violation_fraction <= rep_coarse.violation_fraction);
}

TEST_CASE("truncation gap probe stays tiny in the single-step regime") {
    const auto params = ForrelationParams::make(4, 1, 0.25);
    Rng rng(90);
    std::vector<double> table(uint64_t(1) << 8);
    for (auto& v : table) v = rng.bits() & 1 ? 1.0 : -1.0;
    const auto H = FourierTable::from_truth_table(table);
    const double gap = probe_truncation_gap(params, H, 2000, rng);
    CHECK(gap >= 0.0);
    CHECK(gap < 1e-3);  // reported; the bound's constant is unpinned
}
