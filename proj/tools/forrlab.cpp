// Command line front end: experiment orchestration and report emission.
//
// Exit codes: 0 success, 1 assertion/check failure, 2 usage or input error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "forrlab/correlation.hpp"
#include "forrlab/dist.hpp"
#include "forrlab/fourier.hpp"
#include "forrlab/identity.hpp"
#include "forrlab/instance_io.hpp"
#include "forrlab/parallel.hpp"
#include "forrlab/problem.hpp"
#include "forrlab/protocol.hpp"
#include "forrlab/quantum.hpp"
#include "forrlab/report.hpp"
#include "forrlab/tree.hpp"
#include "forrlab/wht.hpp"

namespace {

using namespace forrlab;

struct GlobalOptions {
    uint64_t seed = 0;
    uint32_t workers = 0;  // 0 -> hardware
    std::string format = "json-lines";
    std::string out;  // optional report sink
};

struct Sink {
    EmitFormat format;
    std::ofstream file;
    bool use_file = false;
    bool header_done = false;

    void row(const ExperimentReport& r) {
        const std::string line = emit(r, format);
        if (format == EmitFormat::Csv && !header_done) {
            if (use_file) file << csv_header() << "\n";
            else std::cout << csv_header() << "\n";
            header_done = true;
        }
        if (use_file) {
            file << line << "\n";
            if (!file) throw std::runtime_error("report sink write failed");
        } else {
            std::cout << line << "\n";
        }
    }
};

// Relative output paths resolve against FORRLAB_OUT_DIR when set.
std::string resolve_out(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* base = std::getenv("FORRLAB_OUT_DIR");
    if (base == nullptr || *base == '\0') return path;
    std::string joined(base);
    if (joined.back() != '/') joined += '/';
    return joined + path;
}

Sink make_sink(const GlobalOptions& g) {
    Sink s{parse_emit_format(g.format), {}, false, false};
    if (!g.out.empty()) {
        const std::string path = resolve_out(g.out);
        s.file.open(path);
        if (!s.file) throw std::runtime_error("cannot open report sink " + path);
        s.use_file = true;
    }
    return s;
}

uint32_t effective_workers(const GlobalOptions& g) {
    return g.workers == 0 ? default_workers() : g.workers;
}

// "x0 y3 | x1" -> per-copy coordinate sets.
MomentIndex parse_index(const std::string& text, const ForrelationParams& params) {
    MomentIndex idx;
    idx.per_copy.resize(params.k);
    std::string normalized(text);
    for (char& c : normalized)
        if (c == ';') c = '|';
    std::istringstream copies(normalized);
    std::string copy_text;
    uint32_t copy = 0;
    while (std::getline(copies, copy_text, '|')) {
        if (copy >= params.k) throw std::invalid_argument("index has more copies than k");
        std::istringstream coords(copy_text);
        std::string tok;
        while (coords >> tok) {
            if (tok.size() < 2 || (tok[0] != 'x' && tok[0] != 'y'))
                throw std::invalid_argument("bad coordinate token: " + tok);
            const uint64_t i = std::stoull(tok.substr(1));
            if (i >= params.N) throw std::invalid_argument("coordinate index out of range: " + tok);
            idx.per_copy[copy].push_back(uint32_t(tok[0] == 'x' ? i : params.N + i));
        }
        ++copy;
    }
    return idx;
}

std::vector<double> load_table(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open table " + path);
    std::vector<double> t;
    double v;
    while (is >> v) t.push_back(v);
    if (!is_power_of_two(t.size())) throw std::invalid_argument("table length must be a power of two");
    return t;
}

int run_verify(const GlobalOptions& g, bool quick, Sink& sink) {
    const uint32_t workers = effective_workers(g);
    bool all_pass = true;
    auto row = [&](const std::string& id, const ForrelationParams& p, double estimate,
                   double stderr_, uint64_t n, bool pass, const std::string& note) {
        ExperimentReport r = ExperimentReport::base(id, p, g.seed);
        r.estimate = estimate;
        r.stderr_ = stderr_;
        r.n_samples = n;
        r.pass = pass;
        r.note = note;
        sink.row(r);
        all_pass = all_pass && pass;
    };
    const auto p_unit = ForrelationParams::make(2, 1, 0.5);

    // Telescoping coefficients, exhaustively over k <= 3, T <= 4.
    {
        bool ok = true;
        uint64_t checked = 0;
        for (uint32_t k = 1; k <= 3; ++k) {
            for (uint32_t T = 1; T <= 4; ++T) {
                std::vector<uint32_t> b(k, 0);
                for (;;) {
                    ok = ok && telescoping_coefficient(b, T) == telescoping_corner_formula(b, T);
                    ++checked;
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
        row("verify.telescoping-coefficients", p_unit, ok ? 1.0 : 0.0, 0.0, checked, ok,
            "direct double sum vs corner formula, exhaustive k<=3 T<=4");
    }

    // Pathwise telescoping on random labelings.
    {
        Rng rng(g.seed, 1001);
        bool ok = true;
        double worst = 0.0;
        const int reps = quick ? 10 : 100;
        for (const auto& [k, T] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 3}, {3, 4}}) {
            for (int r = 0; r < reps; ++r) {
                std::vector<double> labels(1);
                labels.resize(size_t(std::pow(double(T + 1), double(k))));
                for (auto& v : labels) v = 2.0 * rng.uniform() - 1.0;
                auto g_fun = [&](std::span<const uint32_t> a) {
                    uint64_t at = 0;
                    for (uint32_t j = 0; j < k; ++j) at = at * (T + 1) + a[j];
                    return labels[at];
                };
                const auto rep = check_telescoping_pathwise(k, T, g_fun, 1e-12);
                ok = ok && rep.pass;
                worst = std::max(worst, rep.abs_dev);
            }
        }
        row("verify.telescoping-pathwise", p_unit, worst, 0.0, uint64_t(2 * reps), ok,
            "random grid labelings at (k,T)=(2,3),(3,4); tolerance 1e-12");
    }

    // Rounding law on random low-degree multilinears.
    {
        Rng rng(g.seed, 1002);
        bool ok = true;
        const int cases = quick ? 5 : 20;
        const uint64_t n = quick ? 20000 : 200000;
        for (int c = 0; c < cases; ++c) {
            std::vector<double> coeffs(uint64_t(1) << 8, 0.0);
            for (uint64_t s = 0; s < coeffs.size(); ++s)
                if (std::popcount(s) <= 3) coeffs[s] = (2.0 * rng.uniform() - 1.0) / 16.0;
            const auto H = FourierTable::from_coefficients(8, std::move(coeffs));
            std::vector<double> z(8);
            for (auto& v : z) v = 4.0 * rng.uniform() - 2.0;
            ok = ok && check_rounding_law(H, z, n, rng).pass;
        }
        row("verify.rounding-law", p_unit, ok ? 1.0 : 0.0, 0.0, uint64_t(cases) * n, ok,
            "monte carlo rounding mean vs multilinear at trnc(z), 4 sigma");
    }

    // Gaussian concentration of forr.
    {
        const auto params = ForrelationParams::make(quick ? 1024 : 4096, 1, 0.2);
        const uint64_t n = quick ? 20000 : 100000;
        const auto rep = check_gaussian_concentration(params, n, g.seed + 3, workers);
        const bool ok = rep.bound_respected &&
                        std::fabs(rep.mean_forr - params.eps) < 3.0 * rep.mean_stderr;
        row("verify.gaussian-concentration", params,
            double(rep.low_tail + rep.high_tail) / double(n), rep.mean_stderr, n, ok,
            "tail fraction outside [3eps/4, 5eps/4] vs bound " + format_real(rep.tail_bound));
    }

    // Rounding stability.
    {
        const auto params = ForrelationParams::make(4096, 1, 0.2);
        const uint64_t n = quick ? 1000 : 10000;
        const auto rep = check_rounding_stability(params, n, g.seed + 4, workers);
        const bool ok = rep.violation_fraction <= 0.01;
        row("verify.rounding-stability", params, rep.violation_fraction, 0.0, n, ok,
            "|forr(z) - forr(z0)| >= eps/4 fraction");
    }

    // Walk grid marginals.
    {
        const auto params = ForrelationParams::make(8, 2, 0.2);
        const uint64_t n = quick ? 20000 : 100000;
        Rng rng(g.seed, 1005);
        double sxx = 0, sxy = 0;
        bool off_zero = true;
        const std::vector<uint32_t> corner{3, 0};
        for (uint64_t i = 0; i < n; ++i) {
            const WalkGrid grid(params, 3, rng);
            const RealVec z = grid.prefix(corner);
            sxx += z[0] * z[0];
            sxy += z[0] * z[8];
            for (uint64_t c = 16; c < 32; ++c) off_zero = off_zero && z[c] == 0.0;
        }
        const double se = params.eps * std::sqrt(2.0 / double(n));
        const bool ok = off_zero && std::fabs(sxx / double(n) - params.eps) < 3.0 * se &&
                        std::fabs(sxy / double(n) - params.eps / std::sqrt(8.0)) < 3.0 * se;
        row("verify.walk-grid-marginals", params, sxx / double(n), se, n, ok,
            "prefix covariance at T*S matches eps [[I,H],[H,I]] on S, zero off S");
    }

    // Truncation gap probe: reported, not asserted.
    {
        const auto params = ForrelationParams::make(4, 1, 0.25);
        Rng rng(g.seed, 1006);
        std::vector<double> table(uint64_t(1) << 8);
        for (auto& v : table) v = rng.bits() & 1 ? 1.0 : -1.0;
        const auto H = FourierTable::from_truth_table(table);
        const double gap = probe_truncation_gap(params, H, quick ? 500 : 5000, rng);
        row("verify.truncation-gap-probe", params, gap, 0.0, quick ? 500 : 5000, true,
            "measured E|H(trnc(w)) - H(w)|; constant unpinned, reported only");
    }

    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forrelation experiment lab"};
    app.set_config("--config", "", "flat key=value config file; flags win");

    GlobalOptions g;
    app.add_option("--seed", g.seed, "master seed; every report row records it");
    app.add_option("--workers", g.workers, "worker threads (0 = hardware)");
    app.add_option("--format", g.format, "report format: json-lines or csv");
    app.add_option("--out", g.out, "write report rows to this file (FORRLAB_OUT_DIR resolves relative paths)");
    app.require_subcommand(1);

    // --- sample ---------------------------------------------------------
    auto* sample = app.add_subcommand("sample", "draw instances and persist them");
    sample->fallthrough();
    struct {
        std::string dist = "gt";
        uint64_t N = 64;
        uint32_t k = 1;
        double eps = 0.2;
        uint64_t count = 1;
        std::string prefix = "instance";
        uint64_t max_rejects = 10000;
    } sa;
    sample->add_option("--dist", sa.dist, "u, g~, mu0t, mu1t, sigma0, sigma1 (gt = g~)");
    sample->add_option("--N", sa.N);
    sample->add_option("--k", sa.k);
    sample->add_option("--eps", sa.eps, "0 selects the default 1/(60 k^2 ln N)");
    sample->add_option("--count", sa.count);
    sample->add_option("--prefix", sa.prefix, "output file prefix");
    sample->add_option("--max-rejects", sa.max_rejects);

    // --- label ----------------------------------------------------------
    auto* label_cmd = app.add_subcommand("label", "label stored instances");
    label_cmd->fallthrough();
    std::vector<std::string> label_files;
    label_cmd->add_option("files", label_files, "instance files")->required();

    // --- quantum-success ------------------------------------------------
    auto* quantum = app.add_subcommand("quantum-success", "amplified quantum solver success rate");
    quantum->fallthrough();
    struct {
        uint64_t N = 4096;
        uint32_t k = 2;
        double eps = 0.2;
        uint64_t trials = 1000;
        uint64_t max_rejects = 10000;
        double min_success = 0.85;
        double max_rejection = 0.05;
        double amp_constant = 128.0;
        double threshold_fraction = 0.375;
    } qs;
    quantum->add_option("--N", qs.N);
    quantum->add_option("--k", qs.k);
    quantum->add_option("--eps", qs.eps);
    quantum->add_option("--trials", qs.trials);
    quantum->add_option("--max-rejects", qs.max_rejects);
    quantum->add_option("--min-success", qs.min_success, "pass gate on the success rate");
    quantum->add_option("--max-rejection", qs.max_rejection, "pass gate on sigma rejection rate");
    quantum->add_option("--amp-constant", qs.amp_constant, "repetitions = ceil(c/eps^2 ln(10k))");
    quantum->add_option("--threshold-fraction", qs.threshold_fraction, "tau = (1 + f eps)/2");

    // --- tree-advantage -------------------------------------------------
    auto* tree = app.add_subcommand("tree-advantage", "decision tree distinguishing gap scan");
    tree->fallthrough();
    struct {
        uint64_t N = 4;
        uint32_t k = 1;
        double eps = 0.3;
        uint32_t depth = 2;
        std::string strategy = "exhaustive";
        uint64_t samples = 20000;
        uint64_t max_rejects = 10000;
    } ta;
    tree->add_option("--N", ta.N);
    tree->add_option("--k", ta.k);
    tree->add_option("--eps", ta.eps);
    tree->add_option("--depth", ta.depth);
    tree->add_option("--strategy", ta.strategy, "exhaustive (2kN <= 12, depth <= 3) or greedy");
    tree->add_option("--samples", ta.samples, "sigma samples per side");
    tree->add_option("--max-rejects", ta.max_rejects);

    // --- lift-eval ------------------------------------------------------
    auto* lift = app.add_subcommand("lift-eval", "evaluate the xor lift of a protocol");
    lift->fallthrough();
    struct {
        std::string protocol;
        int64_t z = -1;
        bool mass = false;
    } le;
    lift->add_option("--protocol", le.protocol, "protocol file")->required();
    lift->add_option("--z", le.z, "point index; omit for summary only");
    lift->add_flag("--mass", le.mass, "also emit per-level Fourier mass of the lift");

    // --- fourier-mass ---------------------------------------------------
    auto* mass = app.add_subcommand("fourier-mass", "per-level Fourier mass of a function");
    mass->fallthrough();
    struct {
        std::string table;
        std::string protocol;
    } fm;
    mass->add_option("--table", fm.table, "truth table file (2^M reals)");
    mass->add_option("--protocol", fm.protocol, "protocol file; uses its xor lift");

    // --- estimate-moments -------------------------------------------------
    auto* moments = app.add_subcommand("estimate-moments", "monte carlo moments vs exact oracles");
    moments->fallthrough();
    struct {
        std::string dist = "g";
        std::string index = "x0 y0";
        uint64_t N = 16;
        uint32_t k = 1;
        double eps = 0.1;
        uint64_t samples = 1000000;
    } em;
    moments->add_option("--dist", em.dist);
    moments->add_option("--index", em.index, "per-copy coordinates, e.g. \"x0 y1 | x2 y2\"");
    moments->add_option("--N", em.N);
    moments->add_option("--k", em.k);
    moments->add_option("--eps", em.eps);
    moments->add_option("--samples", em.samples);

    // --- verify -----------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run the structural identity suite");
    verify->fallthrough();
    bool verify_quick = false;
    verify->add_flag("--quick", verify_quick, "reduced budgets for smoke runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Sink sink = make_sink(g);

        if (*sample) {
            const auto params = ForrelationParams::make(sa.N, sa.k, sa.eps);
            const bool sigma = sa.dist == "sigma0" || sa.dist == "sigma1";
            for (uint64_t i = 0; i < sa.count; ++i) {
                Rng rng(g.seed, i);
                InstanceRecord rec;
                rec.params = params;
                if (sigma) {
                    SigmaSampler sampler(params,
                                         sa.dist == "sigma1" ? PromiseLabel::Yes : PromiseLabel::No,
                                         sa.max_rejects);
                    rec.z = sampler.sample(rng);
                } else {
                    const DistId id = parse_dist_id(sa.dist);
                    switch (id) {
                        case DistId::Uniform: rec.z = sample_uniform_signs(params.total_dim(), rng); break;
                        case DistId::GaussRounded: rec.z = sample_gaussian_forrelation_rounded(params, rng); break;
                        case DistId::Mu0Rounded: rec.z = sample_mu_rounded(params, Parity::Even, rng).z; break;
                        case DistId::Mu1Rounded: rec.z = sample_mu_rounded(params, Parity::Odd, rng).z; break;
                        default:
                            throw std::invalid_argument("sample: only sign-valued distributions persist");
                    }
                }
                rec.label = label_k(rec.z, params);
                const std::string path = resolve_out(sa.prefix + "_" + std::to_string(i) + ".frrl");
                save_instance(path, rec);
                ExperimentReport r = ExperimentReport::base("sample." + sa.dist, params, g.seed);
                r.estimate = forr(std::span<const double>(to_reals(rec.z)).subspan(0, params.copy_dim()));
                r.n_samples = 1;
                r.note = path + " label=" + std::to_string(int(label_to_byte(rec.label)));
                sink.row(r);
            }
            return 0;
        }

        if (*label_cmd) {
            for (const std::string& f : label_files) {
                const InstanceRecord rec = load_instance(f);
                const PromiseLabel l = label_k(rec.z, rec.params);
                ExperimentReport r = ExperimentReport::base("label", rec.params, g.seed);
                r.estimate = double(label_value(l));
                r.n_samples = 1;
                r.pass = l == rec.label;
                r.note = f;
                sink.row(r);
            }
            return 0;
        }

        if (*quantum) {
            const auto params = ForrelationParams::make(qs.N, qs.k, qs.eps);
            const AmplificationPlan plan =
                make_plan(params, AmplificationOptions{qs.amp_constant, qs.threshold_fraction});
            const auto rep = quantum_success_experiment(params, plan, qs.trials, g.seed,
                                                        effective_workers(g), qs.max_rejects);
            ExperimentReport r = ExperimentReport::base("quantum-success", params, g.seed);
            r.estimate = rep.success_rate;
            r.stderr_ = rep.stderr_;
            r.n_samples = rep.n_instances;
            r.pass = rep.success_rate >= qs.min_success;
            r.note = "r=" + std::to_string(plan.repetitions) +
                     " queries/instance=" + std::to_string(rep.queries_per_instance);
            sink.row(r);
            ExperimentReport rr = ExperimentReport::base("sigma-rejection-rate", params, g.seed);
            rr.estimate = rep.sigma_rejection_rate;
            rr.n_samples = rep.n_instances;
            rr.pass = rep.sigma_rejection_rate <= qs.max_rejection;
            sink.row(rr);
            return (*r.pass && *rr.pass) ? 0 : 1;
        }

        if (*tree) {
            const auto params = ForrelationParams::make(ta.N, ta.k, ta.eps);
            const ScanStrategy strategy =
                ta.strategy == "greedy" ? ScanStrategy::Greedy : ScanStrategy::Exhaustive;
            const auto rep = tree_advantage_scan(params, ta.depth, strategy, ta.samples, g.seed,
                                                 ta.max_rejects);
            ExperimentReport r = ExperimentReport::base("tree-advantage", params, g.seed);
            r.estimate = rep.max_gap;
            r.stderr_ = rep.stderr_;
            r.n_samples = rep.n_samples;
            r.note = ta.strategy + " depth=" + std::to_string(ta.depth) + "; " + rep.note;
            sink.row(r);
            return 0;
        }

        if (*lift) {
            const RectangleProtocol C = load_protocol(le.protocol);
            C.validate();
            const auto params = ForrelationParams::make(2, 1, 0.5);  // carrier only
            ExperimentReport head = ExperimentReport::base("lift-eval", params, g.seed);
            head.estimate = double(C.rects.size());
            head.note = "arity=" + std::to_string(C.arity) + " cost=" + std::to_string(C.cost) +
                        " mincost=" + std::to_string(C.measured_min_cost());
            sink.row(head);
            if (le.z >= 0) {
                ExperimentReport r = ExperimentReport::base("lift-eval.value", params, g.seed);
                r.estimate = xor_lift_value(C, uint64_t(le.z));
                r.note = "z=" + std::to_string(le.z);
                sink.row(r);
            }
            if (le.mass) {
                const auto table = FourierTable::from_truth_table(xor_lift_table(C));
                const auto masses = table.level_masses();
                for (uint32_t lvl = 0; lvl < masses.size(); ++lvl) {
                    ExperimentReport r = ExperimentReport::base("lift-eval.mass", params, g.seed);
                    r.estimate = masses[lvl];
                    r.note = "level=" + std::to_string(lvl);
                    sink.row(r);
                }
            }
            return 0;
        }

        if (*mass) {
            std::vector<double> table;
            if (!fm.table.empty()) table = load_table(fm.table);
            else if (!fm.protocol.empty()) {
                const RectangleProtocol C = load_protocol(fm.protocol);
                C.validate();
                table = xor_lift_table(C);
            } else {
                throw std::invalid_argument("fourier-mass: need --table or --protocol");
            }
            const auto spec = FourierTable::from_truth_table(table);
            const auto masses = spec.level_masses();
            const auto params = ForrelationParams::make(2, 1, 0.5);  // carrier only
            for (uint32_t lvl = 0; lvl < masses.size(); ++lvl) {
                ExperimentReport r = ExperimentReport::base("fourier-mass", params, g.seed);
                r.estimate = masses[lvl];
                r.n_samples = table.size();
                r.note = "level=" + std::to_string(lvl);
                sink.row(r);
            }
            return 0;
        }

        if (*moments) {
            const auto params = ForrelationParams::make(em.N, em.k, em.eps);
            const MomentIndex idx = parse_index(em.index, params);
            const DistId id = parse_dist_id(em.dist);
            Rng rng(g.seed, 0);
            const Estimate est = estimate_moment(id, idx, params, em.samples, rng);
            ExperimentReport r = ExperimentReport::base("estimate-moments." + dist_id_name(id),
                                                        params, g.seed);
            r.estimate = est.value;
            r.stderr_ = est.stderr_;
            r.n_samples = est.n_samples;
            if (id == DistId::Gauss && params.k == 1) {
                const double exact = gaussian_moment_exact_coords(idx.per_copy[0], params);
                r.pass = std::fabs(est.value - exact) <= 3.0 * est.stderr_;
                r.note = "exact=" + format_real(exact);
            } else if (id == DistId::Uniform) {
                r.pass = std::fabs(est.value) <= 3.0 * est.stderr_;
                r.note = "exact=0";
            }
            sink.row(r);
            return r.pass.value_or(true) ? 0 : 1;
        }

        if (*verify) return run_verify(g, verify_quick, sink);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
