// Acceptance suite: runs every quantitative gate at its stated scale and
// tolerance and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "forrlab/correlation.hpp"
#include "forrlab/dist.hpp"
#include "forrlab/fourier.hpp"
#include "forrlab/identity.hpp"
#include "forrlab/parallel.hpp"
#include "forrlab/problem.hpp"
#include "forrlab/protocol.hpp"
#include "forrlab/quantum.hpp"
#include "forrlab/rng.hpp"
#include "forrlab/tree.hpp"
#include "forrlab/wht.hpp"

using namespace forrlab;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// --------------------------------------------------------------------------
// 1. WHT oracle equivalence, involution at N = 2^20, runtime < 5 s.
// --------------------------------------------------------------------------
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    double worst = 0.0;
    for (uint64_t n = 2; n <= (uint64_t(1) << 10); n <<= 1) {
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> v(n);
            for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
            const auto fast = fwht(v);
            const auto slow = naive_hadamard_apply(v);
            for (uint64_t i = 0; i < n; ++i) worst = std::max(worst, std::fabs(fast[i] - slow[i]));
        }
    }
    double inv_dev = 0.0;
    {
        std::vector<double> v(uint64_t(1) << 20);
        for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
        auto w = v;
        fwht_inplace(w);
        fwht_inplace(w);
        for (uint64_t i = 0; i < v.size(); ++i) inv_dev = std::max(inv_dev, std::fabs(w[i] - v[i]));
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst < 1e-10 && inv_dev < 1e-10 && elapsed < 5.0;
    report(1, pass, "fwht vs naive oracle and 2^20 involution",
           fmt("max oracle dev %.2e, involution dev %.2e, %.2f s", worst, inv_dev, elapsed));
}

// --------------------------------------------------------------------------
// 2. Gaussian moment oracle vs the closed forms and Monte Carlo.
// --------------------------------------------------------------------------
void criterion_2() {
    bool pass = true;
    std::string detail;

    for (uint64_t N : {uint64_t(2), uint64_t(4), uint64_t(8)}) {
        const auto params = ForrelationParams::make(N, 1, 0.1);
        for (uint32_t i = 0; i < N && pass; ++i) {
            for (uint32_t j = 0; j < N; ++j) {
                const double expected =
                    params.eps / std::sqrt(double(N)) * (mod2_inner(i, j) ? -1.0 : 1.0);
                if (std::fabs(gaussian_moment_exact({i}, {j}, params) - expected) > 1e-15) {
                    pass = false;
                    detail = fmt("first-moment mismatch at N=%llu i=%u j=%u",
                                 (unsigned long long)N, i, j);
                    break;
                }
            }
        }
        if (!pass) break;

        // Mismatched sizes and odd totals vanish, up to total size 6.
        for (uint32_t ms = 0; ms < (1u << N) && pass; ++ms) {
            for (uint32_t mt = 0; mt < (1u << N); ++mt) {
                const uint32_t a = uint32_t(std::popcount(ms)), b = uint32_t(std::popcount(mt));
                if (a + b > 6 || a == b) continue;
                CoordSet S, T;
                for (uint32_t c = 0; c < N; ++c) {
                    if (ms & (1u << c)) S.push_back(c);
                    if (mt & (1u << c)) T.push_back(c);
                }
                if (gaussian_moment_exact(S, T, params) != 0.0) {
                    pass = false;
                    detail = fmt("nonzero mismatched moment at N=%llu", (unsigned long long)N);
                    break;
                }
            }
        }
        if (!pass) break;

        // Degree-4 bound eps^2 2! / N.
        const double bound = params.eps * params.eps * 2.0 / double(N) + 1e-15;
        for (uint32_t ms = 0; ms < (1u << N) && pass; ++ms) {
            if (std::popcount(ms) != 2) continue;
            for (uint32_t mt = 0; mt < (1u << N); ++mt) {
                if (std::popcount(mt) != 2) continue;
                CoordSet S, T;
                for (uint32_t c = 0; c < N; ++c) {
                    if (ms & (1u << c)) S.push_back(c);
                    if (mt & (1u << c)) T.push_back(c);
                }
                if (std::fabs(gaussian_moment_exact(S, T, params)) > bound) {
                    pass = false;
                    detail = fmt("degree-4 bound violated at N=%llu", (unsigned long long)N);
                    break;
                }
            }
        }
        if (!pass) break;
    }

    // Monte Carlo agreement on 20 random index sets at N = 16, one shared
    // stream of 10^6 samples.
    double worst_sigmas = 0.0;
    if (pass) {
        const auto params = ForrelationParams::make(16, 1, 0.1);
        Rng pick(102);
        std::vector<CoordSet> indices;
        while (indices.size() < 20) {
            CoordSet s;
            const uint32_t size = pick.bits() & 1 ? 2 : 4;
            while (s.size() < size) {
                const uint32_t c = uint32_t(pick.below(32));
                bool dup = false;
                for (uint32_t e : s) dup = dup || e == c;
                if (!dup) s.push_back(c);
            }
            indices.push_back(std::move(s));
        }
        const uint64_t n = 1000000;
        std::vector<double> sums(20, 0.0), sums_sq(20, 0.0);
        Rng rng(103);
        for (uint64_t t = 0; t < n; ++t) {
            const RealVec z = sample_gaussian_forrelation(params, rng);
            for (size_t q = 0; q < 20; ++q) {
                double prod = 1.0;
                for (uint32_t c : indices[q]) prod *= z[c];
                sums[q] += prod;
                sums_sq[q] += prod * prod;
            }
        }
        for (size_t q = 0; q < 20; ++q) {
            const double mean = sums[q] / double(n);
            const double var = std::max(0.0, sums_sq[q] / double(n) - mean * mean);
            const double se = std::sqrt(var / double(n));
            const double exact = gaussian_moment_exact_coords(indices[q], params);
            const double sigmas = std::fabs(mean - exact) / std::max(se, 1e-15);
            worst_sigmas = std::max(worst_sigmas, sigmas);
            if (sigmas > 3.0) {
                pass = false;
                detail = fmt("monte carlo off by %.2f sigma on index %zu", sigmas, q);
            }
        }
    }
    if (pass) detail = fmt("closed forms exact; worst MC deviation %.2f sigma", worst_sigmas);
    report(2, pass, "gaussian moment oracle", detail);
}

// --------------------------------------------------------------------------
// 3. Moment-difference suite, exhaustive at k=2 over N in {2, 4}.
// --------------------------------------------------------------------------
void criterion_3() {
    bool pass = true;
    std::string detail = "zero classes exact, factorial bound respected";
    for (uint64_t N : {uint64_t(2), uint64_t(4)}) {
        const auto params = ForrelationParams::make(N, 2, 0.3);
        const uint32_t d = uint32_t(2 * N);
        for (uint32_t m1 = 0; m1 < (1u << d) && pass; ++m1) {
            for (uint32_t m2 = 0; m2 < (1u << d); ++m2) {
                const uint32_t total = uint32_t(std::popcount(m1) + std::popcount(m2));
                if (total > 6) continue;
                MomentIndex idx;
                idx.per_copy.resize(2);
                for (uint32_t c = 0; c < d; ++c) {
                    if (m1 & (1u << c)) idx.per_copy[0].push_back(c);
                    if (m2 & (1u << c)) idx.per_copy[1].push_back(c);
                }
                const double diff = mu_moment_difference(idx, params);
                const bool degenerate = total < 4 || idx.per_copy[0].empty() ||
                                        idx.per_copy[1].empty() ||
                                        idx.per_copy[0].size() % 2 == 1 ||
                                        idx.per_copy[1].size() % 2 == 1;
                if (degenerate && diff != 0.0) {
                    pass = false;
                    detail = fmt("degenerate index with nonzero difference at N=%llu",
                                 (unsigned long long)N);
                    break;
                }
                if (total % 2 == 0 &&
                    std::fabs(diff) > mu_moment_difference_bound(total, params) + 1e-15) {
                    pass = false;
                    detail = fmt("bound violated at N=%llu", (unsigned long long)N);
                    break;
                }
            }
        }
    }
    report(3, pass, "mu moment difference suite (k=2, N in {2,4}, |I| <= 6)", detail);
}

// --------------------------------------------------------------------------
// 4. Telescoping, exhaustive coefficients and 100 random pathwise labelings.
// --------------------------------------------------------------------------
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;

    for (uint32_t k = 1; k <= 3 && pass; ++k) {
        for (uint32_t T = 1; T <= 4 && pass; ++T) {
            std::vector<uint32_t> b(k, 0);
            for (;;) {
                if (telescoping_coefficient(b, T) != telescoping_corner_formula(b, T)) {
                    pass = false;
                    detail = fmt("coefficient mismatch at k=%u T=%u", k, T);
                    break;
                }
                uint32_t j = 0;
                for (; j < k; ++j) {
                    if (b[j] < T) {
                        ++b[j];
                        break;
                    }
                    b[j] = 0;
                }
                if (j == k) break;
            }
        }
    }

    Rng rng(104);
    double worst = 0.0;
    for (const auto& [k, T] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 3}, {3, 4}}) {
        for (int rep = 0; rep < 100 && pass; ++rep) {
            std::vector<double> labels(size_t(std::pow(double(T + 1), double(k))));
            for (auto& v : labels) v = 2.0 * rng.uniform() - 1.0;
            const auto res = check_telescoping_pathwise(
                k, T,
                [&](std::span<const uint32_t> a) {
                    uint64_t at = 0;
                    for (uint32_t j = 0; j < k; ++j) at = at * (T + 1) + a[j];
                    return labels[at];
                },
                1e-12);
            worst = std::max(worst, res.abs_dev);
            if (!res.pass) {
                pass = false;
                detail = fmt("pathwise deviation %.2e at k=%u T=%u", res.abs_dev, k, T);
            }
        }
    }
    const double elapsed = seconds_since(t0);
    if (elapsed >= 1.0) pass = false;
    if (pass) detail = fmt("exhaustive coefficients ok, worst pathwise dev %.1e, %.3f s", worst, elapsed);
    report(4, pass, "k-dimensional telescoping", detail);
}

// --------------------------------------------------------------------------
// 5. Rounding law at 4 sigma on 50 random (H, z), M = 8, 1e6 roundings each.
// --------------------------------------------------------------------------
void criterion_5() {
    const uint32_t m = 8;
    const int cases = 50;
    std::vector<uint8_t> ok(cases, 0);
    std::vector<double> sigmas(cases, 0.0);
    parallel_tasks(cases, default_workers(), [&](uint64_t c) {
        Rng rng(105, c);
        // Random +-1 truth table (full-degree multilinear) and a point in
        // [-2, 2]^M, the regime the rounding law is stated for.
        std::vector<double> table(uint64_t(1) << m);
        for (auto& v : table) v = rng.bits() & 1 ? 1.0 : -1.0;
        const auto H = FourierTable::from_truth_table(table);
        std::vector<double> z(m);
        for (auto& v : z) v = 4.0 * rng.uniform() - 2.0;
        const auto rep = check_rounding_law(H, z, 1000000, rng, 4.0);
        ok[c] = rep.pass ? 1 : 0;
        sigmas[c] = std::fabs(rep.mc_mean - rep.exact) / std::max(rep.mc_stderr, 1e-15);
    });
    bool pass = true;
    double worst = 0.0;
    for (int c = 0; c < cases; ++c) {
        pass = pass && ok[c];
        worst = std::max(worst, sigmas[c]);
    }
    report(5, pass, "rounding law on 50 random (H, z) at 1e6 roundings",
           fmt("worst deviation %.2f sigma (gate 4)", worst));
}

// --------------------------------------------------------------------------
// 6. Quantum solver success on sigma instances at N = 2^12, k = 2.
// --------------------------------------------------------------------------
void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto params = ForrelationParams::make(uint64_t(1) << 12, 2, 0.2);
    const AmplificationPlan plan = make_plan(params);
    const auto rep = quantum_success_experiment(params, plan, 1000, 106, default_workers());
    const double elapsed = seconds_since(t0);
    const bool pass =
        rep.success_rate >= 0.85 && rep.sigma_rejection_rate <= 0.05 && elapsed < 300.0;
    report(6, pass, "quantum success at N=4096 k=2 over 1000 sigma instances",
           fmt("success %.3f (gate 0.85), sigma rejection %.4f (gate 0.05), r=%llu, %.1f s",
               rep.success_rate, rep.sigma_rejection_rate,
               (unsigned long long)plan.repetitions, elapsed));
}

// --------------------------------------------------------------------------
// 7. Correlation tester scaling in N and the k=2 product structure.
// --------------------------------------------------------------------------
void criterion_7() {
    const std::vector<uint64_t> sizes{16, 64, 256, 1024};
    std::vector<double> lx, ly;
    double adv_16 = 0.0;
    bool pass = true;
    for (uint64_t N : sizes) {
        const auto params = ForrelationParams::make(N, 1, 0.2);
        const CoordPair pr{0, 0};
        const auto rep = correlation_advantage(params, std::span<const CoordPair>(&pr, 1),
                                               10000000, 107, default_workers(), true);
        if (N == 16) adv_16 = rep.advantage;
        lx.push_back(std::log(double(N)));
        ly.push_back(std::log(rep.advantage));
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(lx.size());
    my /= double(ly.size());
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    pass = pass && std::fabs(slope + 0.5) <= 0.1;

    // k = 2 at N = 16: product structure, within a factor of 2 of the square.
    const auto params2 = ForrelationParams::make(16, 2, 0.2);
    const std::vector<CoordPair> pairs{{0, 0}, {0, 0}};
    const auto rep2 =
        correlation_advantage(params2, pairs, 100000000, 108, default_workers(), true);
    const double predicted = adv_16 * adv_16;
    const double ratio = rep2.advantage / predicted;
    pass = pass && ratio >= 0.5 && ratio <= 2.0;

    report(7, pass, "correlation tester scaling",
           fmt("log-log slope %.3f (gate -0.5 +- 0.1); k=2/k=1^2 ratio %.2f (gate [0.5, 2])",
               slope, ratio));
}

// --------------------------------------------------------------------------
// 8. Exhaustive tree scan on the micro instance: finite, reproducible,
//    monotone in depth.
// --------------------------------------------------------------------------
void criterion_8() {
    const auto params = ForrelationParams::make(4, 1, 0.3);
    const auto a = tree_advantage_scan(params, 2, ScanStrategy::Exhaustive, 20000, 109);
    const auto b = tree_advantage_scan(params, 2, ScanStrategy::Exhaustive, 20000, 109);
    const auto deeper = tree_advantage_scan(params, 3, ScanStrategy::Exhaustive, 20000, 109);
    const bool finite = std::isfinite(a.max_gap) && a.max_gap >= 0.0 && a.max_gap <= 2.0;
    const bool reproducible = a.max_gap == b.max_gap;
    const bool monotone = a.max_gap < deeper.max_gap;
    report(8, finite && reproducible && monotone,
           "exhaustive depth-2 tree scan on the N=4 micro instance",
           fmt("max gap %.6f, rerun identical=%s, depth-3 gap %.6f strictly larger=%s",
               a.max_gap, reproducible ? "yes" : "no", deeper.max_gap, monotone ? "yes" : "no"));
}

// --------------------------------------------------------------------------
// 9. Restricted-protocol lift identity, exact over all z at M=6, l=1.
// --------------------------------------------------------------------------
void criterion_9() {
    const uint32_t m = 6, l = 1;
    Rng rng(110);
    double worst = 0.0;
    bool pass = true;
    for (int rep = 0; rep < 20 && pass; ++rep) {
        RectangleProtocol C;
        do {
            C = random_protocol(m, 4, rng);
        } while (C.rects.size() < 2);
        C.validate();
        Restriction v(m, 0);
        for (uint32_t j = 0; j < m; ++j) {
            const double r = rng.uniform();
            v[j] = r < 0.3 ? int8_t(1) : (r < 0.6 ? int8_t(-1) : int8_t(0));
        }
        const auto dist = restrict_xor_protocol(C, v);
        const auto ext_base = extend_protocol(C, l);
        std::vector<RectangleProtocol> ext_restricted;
        ext_restricted.reserve(dist.protocols.size());
        for (const auto& p : dist.protocols) ext_restricted.push_back(extend_protocol(p, l));

        for (uint64_t z = 0; z < (uint64_t(1) << m); ++z) {
            double lhs = 0.0;
            for (const auto& p : ext_restricted)
                for (uint64_t zj = 0; zj < (uint64_t(1) << l); ++zj)
                    lhs += xor_lift_value(p, z | (zj << m));
            lhs /= double(ext_restricted.size() << l);
            const uint64_t rz = apply_restriction_mask(v, z);
            double rhs = 0.0;
            for (uint64_t zj = 0; zj < (uint64_t(1) << l); ++zj)
                rhs += xor_lift_value(ext_base, rz | (zj << m));
            rhs /= double(uint64_t(1) << l);
            worst = std::max(worst, std::fabs(lhs - rhs));
            if (std::fabs(lhs - rhs) > 1e-11) pass = false;
        }
    }
    report(9, pass, "restriction identity over all z, 20 random restrictions (M=6, l=1)",
           fmt("worst |lhs - rhs| = %.2e", worst));
}

// --------------------------------------------------------------------------
// 10. Level-2k mass of lifted extended protocols and level-k inequalities.
// --------------------------------------------------------------------------
void criterion_10() {
    Rng rng(111);
    bool pass = true;
    double worst_ratio = 0.0;
    uint32_t max_total_cost_k1 = 0;

    // Random base protocols extended by l = ceil(2k log2 e), which enforces
    // min-cost >= l; the mass bound is checked against the extended cost
    // c0 + 2l. A min-cost of l pigeonholes at least 2^{2l} rectangles, so at
    // k=2 the extended cost cannot sit under 8; the k=1 family honors the
    // stated cost budget and the k=2 family runs at the minimum feasible cost.
    for (uint32_t k : {1u, 2u}) {
        const uint32_t l = uint32_t(std::ceil(2.0 * double(k) * std::log2(std::exp(1.0))));
        const uint32_t base_arity = k == 1 ? 7 : 4;  // lifted arity 10 both
        for (int rep = 0; rep < 10; ++rep) {
            RectangleProtocol base;
            do {
                base = random_protocol(base_arity, 2, rng);
            } while (base.rects.size() < 3);
            base.validate();
            const uint32_t base_cost = uint32_t(std::ceil(std::log2(double(base.rects.size()))));
            const uint32_t total_cost = base_cost + 2 * l;
            if (k == 1) {
                max_total_cost_k1 = std::max(max_total_cost_k1, total_cost);
                if (total_cost > 8) pass = false;
            }
            const auto ext = extend_protocol(base, l);
            if (ext.measured_min_cost() < l) {
                pass = false;
                continue;
            }
            const auto table = FourierTable::from_truth_table(xor_lift_table(ext));
            const double mass = table.level_mass(2 * k);
            const double denom =
                std::pow(std::exp(1.0) / double(k), 2.0 * double(k)) *
                std::pow(double(total_cost), 2.0 * double(k));
            const double ratio = mass / denom;
            worst_ratio = std::max(worst_ratio, ratio);
            if (ratio > 4.0) pass = false;
        }
    }

    // Level-k inequality on 200 random in-range (A, level) pairs at M <= 10.
    int tested = 0;
    double worst_slack = 0.0;
    while (tested < 200) {
        const uint32_t m = 4 + uint32_t(rng.below(7));  // 4..10
        PointSet A(m);
        const double density = 0.01 + 0.35 * rng.uniform();
        for (uint64_t u = 0; u < (uint64_t(1) << m); ++u)
            if (rng.uniform() < density) A.set(u);
        if (A.empty() || A.count() == A.domain_size()) continue;
        const double alpha = A.measure();
        const uint32_t max_level = uint32_t(2.0 * std::log(1.0 / alpha));
        if (max_level == 0) continue;
        const uint32_t level = 1 + uint32_t(rng.below(std::min(max_level, m)));
        const auto rep = check_level_k_inequality(A, level);
        if (!rep.applicable) continue;
        if (!rep.pass) pass = false;
        worst_slack = std::max(worst_slack, rep.lhs / rep.rhs);
        ++tested;
    }

    report(10, pass, "level-2k lift mass probe and level-k inequalities",
           fmt("probed constant %.2e (gate 4, k=1 cost <= %u); worst inequality lhs/rhs %.3f over 200 sets",
               worst_ratio, max_total_cost_k1, worst_slack));
}

// --------------------------------------------------------------------------
// 11. Concentration of forr under G and rounding stability at N = 2^12.
// --------------------------------------------------------------------------
void criterion_11() {
    const auto params = ForrelationParams::make(uint64_t(1) << 12, 1, 0.2);
    const auto conc = check_gaussian_concentration(params, 100000, 112, default_workers());
    const auto stab = check_rounding_stability(params, 10000, 113, default_workers());
    const bool pass = conc.low_tail == 0 && stab.violation_fraction <= 0.01;
    report(11, pass, "gaussian concentration and rounding stability at N=4096",
           fmt("low-tail violations %llu / 1e5 (gate 0), stability violations %.4f (gate 0.01)",
               (unsigned long long)conc.low_tail, stab.violation_fraction));
}

// --------------------------------------------------------------------------
// 12. CLI reproducibility: identical (config, seed, workers) -> identical
//     bytes.
// --------------------------------------------------------------------------
std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void criterion_12() {
#ifndef FORRLAB_CLI_PATH
    report(12, false, "CLI reproducibility", "CLI path not configured");
#else
    const std::string cli = FORRLAB_CLI_PATH;
    const std::string base = "/tmp/forrlab_accept_repro";
    const std::string args = " quantum-success --N 512 --k 1 --eps 0.2 --trials 100 --seed 31";
    bool pass = true;
    std::string detail;
    for (int run = 0; run < 2; ++run) {
        const std::string out = base + std::to_string(run) + ".jsonl";
        const std::string cmd = cli + args + " --workers 2 > " + out + " 2>/dev/null";
        if (std::system(cmd.c_str()) < 0) {
            pass = false;
            detail = "failed to launch CLI";
        }
    }
    const std::string a = slurp(base + "0.jsonl");
    const std::string b = slurp(base + "1.jsonl");
    if (a.empty() || a != b) {
        pass = false;
        detail = "outputs differ or empty";
    }
    // Per-task streams also make the rows independent of the worker count.
    const std::string out3 = base + "2.jsonl";
    std::ignore = std::system((cli + args + " --workers 1 > " + out3 + " 2>/dev/null").c_str());
    const std::string c = slurp(out3);

    // A second subcommand with Monte Carlo internals.
    std::string v0, v1;
    for (int run = 0; run < 2; ++run) {
        const std::string out = base + "_verify" + std::to_string(run) + ".jsonl";
        std::ignore = std::system(
            (cli + " verify --quick --seed 5 --workers 2 > " + out + " 2>/dev/null").c_str());
        (run == 0 ? v0 : v1) = slurp(out);
    }
    if (pass) {
        const bool verify_same = !v0.empty() && v0 == v1;
        detail = fmt("quantum rows byte-identical (%zu bytes); worker-count invariant: %s; "
                     "verify rows byte-identical: %s",
                     a.size(), a == c ? "yes" : "no", verify_same ? "yes" : "no");
        pass = a == c && verify_same;
    }
    report(12, pass, "CLI reproducibility", detail);
#endif
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    std::printf("%d/12 criteria passed in %.1f s\n", 12 - g_failures, seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
