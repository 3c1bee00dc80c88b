#include "forrlab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace forrlab {

RectangleProtocol RectangleProtocol::constant(uint32_t arity, int8_t label) {
    RectangleProtocol p;
    p.arity = arity;
    p.cost = 0;
    p.min_cost = 0;
    Rectangle full{PointSet(arity), PointSet(arity), label};
    for (uint64_t u = 0; u < (uint64_t(1) << arity); ++u) {
        full.alice.set(u);
        full.bob.set(u);
    }
    p.rects.push_back(std::move(full));
    return p;
}

int8_t RectangleProtocol::eval(uint64_t x, uint64_t y) const {
    for (const Rectangle& r : rects)
        if (r.alice.test(x) && r.bob.test(y)) return r.label;
    throw std::logic_error("protocol: point not covered by any rectangle");
}

uint32_t RectangleProtocol::measured_min_cost() const {
    uint64_t largest_side = 0;
    for (const Rectangle& r : rects)
        largest_side = std::max({largest_side, r.alice.count(), r.bob.count()});
    if (largest_side == 0) return arity;
    // Largest l with side <= 2^{M-l}.
    uint32_t l = 0;
    while (l < arity && largest_side <= (uint64_t(1) << (arity - l - 1))) ++l;
    return l;
}

void RectangleProtocol::validate() const {
    if (arity > 16) throw std::invalid_argument("protocol: exhaustive validation guarded at M <= 16");
    if (rects.empty()) throw std::invalid_argument("protocol: no rectangles");
    if (rects.size() > (uint64_t(1) << cost))
        throw std::invalid_argument("protocol: more than 2^cost rectangles");

    const uint64_t full = uint64_t(1) << (2 * arity);
    uint64_t covered = 0;
    for (const Rectangle& r : rects) {
        if (r.alice.arity() != arity || r.bob.arity() != arity)
            throw std::invalid_argument("protocol: rectangle arity mismatch");
        covered += r.alice.count() * r.bob.count();
    }
    if (covered != full) throw std::invalid_argument("protocol: rectangles do not cover the square");
    for (size_t a = 0; a < rects.size(); ++a)
        for (size_t b = a + 1; b < rects.size(); ++b)
            if (rects[a].alice.intersects(rects[b].alice) && rects[a].bob.intersects(rects[b].bob))
                throw std::invalid_argument("protocol: overlapping rectangles");

    if (measured_min_cost() < min_cost)
        throw std::invalid_argument("protocol: declared min-cost not achieved");
}

double xor_lift_value(const RectangleProtocol& C, uint64_t z_mask) {
    if (C.arity > 22) throw std::invalid_argument("xor_lift_value: exhaustive average guarded at M <= 22");
    const uint64_t size = uint64_t(1) << C.arity;
    if (z_mask >= size) throw std::invalid_argument("xor_lift_value: point out of range");
    int64_t acc = 0;
    for (uint64_t x = 0; x < size; ++x) acc += C.eval(x, x ^ z_mask);
    return double(acc) / double(size);
}

std::vector<double> xor_lift_table(const RectangleProtocol& C) {
    if (C.arity > 13) throw std::invalid_argument("xor_lift_table: full table guarded at M <= 13");
    const uint64_t size = uint64_t(1) << C.arity;
    std::vector<double> out(size);
    for (uint64_t z = 0; z < size; ++z) out[z] = xor_lift_value(C, z);
    return out;
}

std::vector<double> lift_spectrum_from_rectangles(const RectangleProtocol& C) {
    const uint64_t size = uint64_t(1) << C.arity;
    std::vector<double> spectrum(size, 0.0);
    std::vector<double> indicator(size);
    for (const Rectangle& r : C.rects) {
        for (uint64_t u = 0; u < size; ++u) indicator[u] = r.alice.test(u) ? 1.0 : 0.0;
        const FourierTable a = FourierTable::from_truth_table(indicator);
        for (uint64_t u = 0; u < size; ++u) indicator[u] = r.bob.test(u) ? 1.0 : 0.0;
        const FourierTable b = FourierTable::from_truth_table(indicator);
        for (uint64_t s = 0; s < size; ++s)
            spectrum[s] += double(r.label) * a.coefficient(s) * b.coefficient(s);
    }
    return spectrum;
}

RectangleProtocol extend_protocol(const RectangleProtocol& C, uint32_t l) {
    if (l < 1) throw std::invalid_argument("extend_protocol: l must be >= 1");
    const uint32_t arity = C.arity + l;
    if (arity > 22) throw std::invalid_argument("extend_protocol: extended arity above 22");
    RectangleProtocol out;
    out.arity = arity;
    out.cost = C.cost + 2 * l;
    out.min_cost = std::max(C.min_cost, l);
    const uint64_t base = uint64_t(1) << C.arity;
    const uint64_t junk = uint64_t(1) << l;
    out.rects.reserve(C.rects.size() * junk * junk);
    for (const Rectangle& r : C.rects) {
        for (uint64_t ja = 0; ja < junk; ++ja) {
            for (uint64_t jb = 0; jb < junk; ++jb) {
                Rectangle nr{PointSet(arity), PointSet(arity), r.label};
                for (uint64_t u = 0; u < base; ++u) {
                    if (r.alice.test(u)) nr.alice.set(u | (ja << C.arity));
                    if (r.bob.test(u)) nr.bob.set(u | (jb << C.arity));
                }
                out.rects.push_back(std::move(nr));
            }
        }
    }
    return out;
}

double ProtocolDistribution::lift_value(uint64_t z_mask) const {
    double acc = 0.0;
    for (const RectangleProtocol& p : protocols) acc += xor_lift_value(p, z_mask);
    return acc / double(protocols.size());
}

ProtocolDistribution restrict_xor_protocol(const RectangleProtocol& C, const Restriction& v) {
    if (v.size() != C.arity) throw std::invalid_argument("restrict: restriction arity mismatch");
    std::vector<uint32_t> fixed;
    for (uint32_t j = 0; j < C.arity; ++j)
        if (v[j] != 0) fixed.push_back(j);
    if (fixed.size() > 20) throw std::invalid_argument("restrict: too many fixed coordinates");

    const uint64_t size = uint64_t(1) << C.arity;
    uint64_t fixed_mask = 0;
    for (uint32_t j : fixed) fixed_mask |= uint64_t(1) << j;

    ProtocolDistribution dist;
    const uint64_t assignments = uint64_t(1) << fixed.size();
    dist.protocols.reserve(assignments);
    for (uint64_t a = 0; a < assignments; ++a) {
        // Alice overwrites coordinate j with a_j; Bob with a_j * v_j.
        uint64_t alice_bits = 0, bob_bits = 0;
        for (size_t t = 0; t < fixed.size(); ++t) {
            const uint32_t j = fixed[t];
            const int8_t aj = (a >> t) & 1 ? int8_t(-1) : int8_t(1);
            const int8_t bj = int8_t(aj * v[j]);
            if (aj < 0) alice_bits |= uint64_t(1) << j;
            if (bj < 0) bob_bits |= uint64_t(1) << j;
        }
        RectangleProtocol p;
        p.arity = C.arity;
        p.cost = C.cost;
        p.min_cost = 0;  // pullbacks can inflate rectangle sides
        p.rects.reserve(C.rects.size());
        for (const Rectangle& r : C.rects) {
            Rectangle nr{PointSet(C.arity), PointSet(C.arity), r.label};
            for (uint64_t u = 0; u < size; ++u) {
                const uint64_t ua = (u & ~fixed_mask) | alice_bits;
                const uint64_t ub = (u & ~fixed_mask) | bob_bits;
                if (r.alice.test(ua)) nr.alice.set(u);
                if (r.bob.test(ub)) nr.bob.set(u);
            }
            p.rects.push_back(std::move(nr));
        }
        dist.protocols.push_back(std::move(p));
    }
    return dist;
}

RectangleProtocol random_protocol(uint32_t arity, uint32_t cost_budget, Rng& rng) {
    if (arity > 16) throw std::invalid_argument("random_protocol: guarded at M <= 16");
    const uint64_t size = uint64_t(1) << arity;

    struct Cell {
        std::vector<uint64_t> alice, bob;
        uint32_t bits_used;
    };
    std::vector<Cell> work, leaves;
    Cell root;
    root.alice.resize(size);
    root.bob.resize(size);
    for (uint64_t u = 0; u < size; ++u) root.alice[u] = root.bob[u] = u;
    root.bits_used = 0;
    work.push_back(std::move(root));

    while (!work.empty()) {
        Cell cell = std::move(work.back());
        work.pop_back();
        const bool can_split = cell.bits_used < cost_budget &&
                               (cell.alice.size() > 1 || cell.bob.size() > 1);
        // Stop early at random so rectangle shapes vary.
        if (!can_split || rng.uniform() < 0.25) {
            leaves.push_back(std::move(cell));
            continue;
        }
        const bool alice_speaks = cell.bob.size() <= 1 ||
                                  (cell.alice.size() > 1 && (rng.bits() & 1));
        std::vector<uint64_t>& side = alice_speaks ? cell.alice : cell.bob;
        std::shuffle(side.begin(), side.end(), rng.engine());
        const size_t half = side.size() / 2;
        Cell left = cell, right = cell;
        std::vector<uint64_t>& lside = alice_speaks ? left.alice : left.bob;
        std::vector<uint64_t>& rside = alice_speaks ? right.alice : right.bob;
        lside.assign(side.begin(), side.begin() + half);
        rside.assign(side.begin() + half, side.end());
        left.bits_used = right.bits_used = cell.bits_used + 1;
        work.push_back(std::move(left));
        work.push_back(std::move(right));
    }

    RectangleProtocol out;
    out.arity = arity;
    out.cost = cost_budget;
    out.min_cost = 0;
    out.rects.reserve(leaves.size());
    for (const Cell& cell : leaves) {
        Rectangle r{PointSet(arity), PointSet(arity), rng.sign()};
        for (uint64_t u : cell.alice) r.alice.set(u);
        for (uint64_t u : cell.bob) r.bob.set(u);
        out.rects.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

void write_protocol(std::ostream& os, const RectangleProtocol& C) {
    os << "protocol arity " << C.arity << " cost " << C.cost << " mincost " << C.min_cost
       << " rects " << C.rects.size() << "\n";
    const uint64_t size = uint64_t(1) << C.arity;
    for (const Rectangle& r : C.rects) {
        os << "rect " << int(r.label) << "\n";
        os << "a:";
        for (uint64_t u = 0; u < size; ++u)
            if (r.alice.test(u)) os << ' ' << u;
        os << "\nb:";
        for (uint64_t u = 0; u < size; ++u)
            if (r.bob.test(u)) os << ' ' << u;
        os << "\n";
    }
}

RectangleProtocol read_protocol(std::istream& is) {
    std::string tok;
    RectangleProtocol p;
    uint64_t n_rects = 0;
    is >> tok;
    if (tok != "protocol") throw std::invalid_argument("protocol file: bad header");
    while (is >> tok) {
        if (tok == "arity") is >> p.arity;
        else if (tok == "cost") is >> p.cost;
        else if (tok == "mincost") is >> p.min_cost;
        else if (tok == "rects") { is >> n_rects; break; }
        else throw std::invalid_argument("protocol file: unexpected token " + tok);
    }
    if (p.arity > 16) throw std::invalid_argument("protocol file: arity above 16");
    for (uint64_t i = 0; i < n_rects; ++i) {
        is >> tok;
        if (tok != "rect") throw std::invalid_argument("protocol file: expected rect");
        int label = 0;
        is >> label;
        if (label != 1 && label != -1) throw std::invalid_argument("protocol file: label must be +-1");
        Rectangle r{PointSet(p.arity), PointSet(p.arity), int8_t(label)};
        for (int side = 0; side < 2; ++side) {
            is >> tok;
            const std::string want = side == 0 ? "a:" : "b:";
            if (tok != want) throw std::invalid_argument("protocol file: expected " + want);
            std::string line;
            std::getline(is, line);
            std::istringstream ls(line);
            uint64_t u;
            while (ls >> u) {
                if (u >= (uint64_t(1) << p.arity))
                    throw std::invalid_argument("protocol file: point out of range");
                (side == 0 ? r.alice : r.bob).set(u);
            }
        }
        p.rects.push_back(std::move(r));
    }
    return p;
}

void save_protocol(const std::string& path, const RectangleProtocol& C) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_protocol(os, C);
    if (!os) throw std::runtime_error("write failed: " + path);
}

RectangleProtocol load_protocol(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_protocol(is);
}

}  // namespace forrlab
