#include "forrlab/instance_io.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace forrlab {

namespace {

constexpr char kMagic[4] = {'F', 'R', 'R', 'L'};

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("instance: truncated file");
    return v;
}

}  // namespace

uint8_t label_to_byte(PromiseLabel l) {
    switch (l) {
        case PromiseLabel::No: return 0;
        case PromiseLabel::Yes: return 1;
        case PromiseLabel::Outside: return 2;
    }
    return 2;
}

PromiseLabel label_from_byte(uint8_t b) {
    switch (b) {
        case 0: return PromiseLabel::No;
        case 1: return PromiseLabel::Yes;
        case 2: return PromiseLabel::Outside;
    }
    throw std::runtime_error("instance: bad label byte");
}

void write_instance(std::ostream& os, const InstanceRecord& rec) {
    if (rec.z.size() != rec.params.total_dim())
        throw std::invalid_argument("instance: payload must have 2kN signs");
    os.write(kMagic, 4);
    write_pod(os, kInstanceFormatVersion);
    write_pod(os, rec.params.N);
    write_pod(os, rec.params.k);
    write_pod(os, rec.params.eps);
    write_pod(os, label_to_byte(rec.label));
    // Sign bits packed LSB first; bit set <-> coordinate -1.
    uint8_t byte = 0;
    int fill = 0;
    for (size_t i = 0; i < rec.z.size(); ++i) {
        if (rec.z[i] < 0) byte |= uint8_t(1) << fill;
        if (++fill == 8) {
            write_pod(os, byte);
            byte = 0;
            fill = 0;
        }
    }
    if (fill > 0) write_pod(os, byte);
    if (!os) throw std::runtime_error("instance: write failed");
}

InstanceRecord read_instance(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("instance: bad magic");
    const uint32_t version = read_pod<uint32_t>(is);
    if (version != kInstanceFormatVersion) throw std::runtime_error("instance: unsupported version");
    const uint64_t N = read_pod<uint64_t>(is);
    const uint32_t k = read_pod<uint32_t>(is);
    const double eps = read_pod<double>(is);
    InstanceRecord rec;
    rec.params = ForrelationParams::make(N, k, eps);
    rec.label = label_from_byte(read_pod<uint8_t>(is));
    const uint64_t dim = rec.params.total_dim();
    rec.z.resize(dim);
    uint8_t byte = 0;
    for (uint64_t i = 0; i < dim; ++i) {
        if (i % 8 == 0) byte = read_pod<uint8_t>(is);
        rec.z[i] = (byte >> (i % 8)) & 1 ? int8_t(-1) : int8_t(1);
    }
    return rec;
}

void save_instance(const std::string& path, const InstanceRecord& rec) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_instance(os, rec);
}

InstanceRecord load_instance(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_instance(is);
}

}  // namespace forrlab
