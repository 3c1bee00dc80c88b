#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "forrlab/params.hpp"

namespace forrlab {

// One experiment result row. Wall time is kept for diagnostics but never
// serialized: emitted rows must be byte-identical across reruns with the same
// (config, seed, workers).
struct ExperimentReport {
    std::string id;
    uint64_t N = 0;
    uint32_t k = 0;
    double eps = 0.0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    uint64_t n_samples = 0;
    uint64_t seed = 0;
    std::optional<bool> pass;
    std::string note;
    double wall_ms = 0.0;  // diagnostics only

    static ExperimentReport base(std::string id, const ForrelationParams& p, uint64_t seed) {
        ExperimentReport r;
        r.id = std::move(id);
        r.N = p.N;
        r.k = p.k;
        r.eps = p.eps;
        r.seed = seed;
        return r;
    }
};

enum class EmitFormat { JsonLines, Csv };

EmitFormat parse_emit_format(const std::string& name);

// Serializes one row (no trailing newline). Field order is fixed and reals
// use 17 significant digits. Throws on non-finite estimates.
std::string emit(const ExperimentReport& report, EmitFormat format);

std::string csv_header();

// %.17g formatting shared by the emitters.
std::string format_real(double v);

}  // namespace forrlab
