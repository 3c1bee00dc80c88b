#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace forrlab {

// Subset of the Boolean hypercube {-1,1}^M, stored as a bitset over point
// indices. Point u encodes the vector with z_i = -1 iff bit i of u is set.
class PointSet {
  public:
    PointSet() = default;

    explicit PointSet(uint32_t arity) : arity_(arity), size_(uint64_t(1) << arity) {
        if (arity > 22) throw std::invalid_argument("PointSet: arity above 22");
        bits_.assign((size_ + 63) / 64, 0);
    }

    uint32_t arity() const { return arity_; }
    uint64_t domain_size() const { return size_; }

    bool test(uint64_t u) const { return (bits_[u >> 6] >> (u & 63)) & 1; }
    void set(uint64_t u) { bits_[u >> 6] |= uint64_t(1) << (u & 63); }
    void reset(uint64_t u) { bits_[u >> 6] &= ~(uint64_t(1) << (u & 63)); }

    uint64_t count() const {
        uint64_t c = 0;
        for (uint64_t w : bits_) c += std::popcount(w);
        return c;
    }

    bool intersects(const PointSet& o) const {
        for (size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] & o.bits_[i]) return true;
        return false;
    }

    bool empty() const {
        for (uint64_t w : bits_)
            if (w) return false;
        return true;
    }

    double measure() const { return double(count()) / double(size_); }

  private:
    uint32_t arity_ = 0;
    uint64_t size_ = 0;
    std::vector<uint64_t> bits_;
};

}  // namespace forrlab
