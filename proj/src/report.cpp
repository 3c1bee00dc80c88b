#include "forrlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace forrlab {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

EmitFormat parse_emit_format(const std::string& name) {
    if (name == "json-lines" || name == "jsonl" || name == "json") return EmitFormat::JsonLines;
    if (name == "csv") return EmitFormat::Csv;
    throw std::invalid_argument("unknown emit format: " + name);
}

std::string csv_header() { return "id,N,k,eps,estimate,stderr,n_samples,seed,pass,note"; }

namespace {

void require_finite(const ExperimentReport& r) {
    if (!std::isfinite(r.estimate) || !std::isfinite(r.stderr_))
        throw std::invalid_argument("emit: non-finite estimate in report '" + r.id + "'");
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string emit(const ExperimentReport& r, EmitFormat format) {
    require_finite(r);
    std::string out;
    if (format == EmitFormat::JsonLines) {
        out += "{\"id\":\"" + json_escape(r.id) + "\"";
        out += ",\"N\":" + std::to_string(r.N);
        out += ",\"k\":" + std::to_string(r.k);
        out += ",\"eps\":" + format_real(r.eps);
        out += ",\"estimate\":" + format_real(r.estimate);
        out += ",\"stderr\":" + format_real(r.stderr_);
        out += ",\"n_samples\":" + std::to_string(r.n_samples);
        out += ",\"seed\":" + std::to_string(r.seed);
        if (r.pass.has_value()) out += std::string(",\"pass\":") + (*r.pass ? "true" : "false");
        if (!r.note.empty()) out += ",\"note\":\"" + json_escape(r.note) + "\"";
        out += "}";
        return out;
    }
    out += csv_escape(r.id);
    out += ',' + std::to_string(r.N);
    out += ',' + std::to_string(r.k);
    out += ',' + format_real(r.eps);
    out += ',' + format_real(r.estimate);
    out += ',' + format_real(r.stderr_);
    out += ',' + std::to_string(r.n_samples);
    out += ',' + std::to_string(r.seed);
    out += ',';
    if (r.pass.has_value()) out += *r.pass ? "true" : "false";
    out += ',' + csv_escape(r.note);
    return out;
}

}  // namespace forrlab
