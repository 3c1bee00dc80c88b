#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "forrlab/params.hpp"
#include "forrlab/problem.hpp"

namespace forrlab {

// Binary instance format (little endian):
//   magic "FRRL" | u32 version | u64 N | u32 k | f64 eps | u8 label |
//   2kN sign bits packed 8 per byte, LSB first, bit set <-> coordinate -1.
// Label byte: 0 = No, 1 = Yes, 2 = outside promise / unlabeled.
struct InstanceRecord {
    ForrelationParams params;
    PromiseLabel label = PromiseLabel::Outside;
    SignVec z;
};

constexpr uint32_t kInstanceFormatVersion = 1;

void write_instance(std::ostream& os, const InstanceRecord& rec);
InstanceRecord read_instance(std::istream& is);

void save_instance(const std::string& path, const InstanceRecord& rec);
InstanceRecord load_instance(const std::string& path);

uint8_t label_to_byte(PromiseLabel l);
PromiseLabel label_from_byte(uint8_t b);

}  // namespace forrlab
