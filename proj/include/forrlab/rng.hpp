#pragma once

#include <cstdint>
#include <random>

namespace forrlab {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One random stream, addressed by (master seed, stream id). A logical task
// always owns the same stream no matter how work is split over threads, so
// results are reproducible for a fixed seed regardless of worker count.
class Rng {
  public:
    Rng(uint64_t master_seed, uint64_t stream_id) {
        const uint64_t a = splitmix64(master_seed);
        const uint64_t b = splitmix64(a ^ splitmix64(stream_id + 0x1d8af066u));
        std::seed_seq seq{uint32_t(a), uint32_t(a >> 32), uint32_t(b), uint32_t(b >> 32)};
        engine_.seed(seq);
    }

    explicit Rng(uint64_t seed) : Rng(seed, 0) {}

    uint64_t bits() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    int8_t sign() { return (engine_() & 1) ? int8_t(-1) : int8_t(1); }

    double gaussian() { return normal_(engine_); }
    double gaussian(double stddev) { return stddev * normal_(engine_); }

    uint64_t below(uint64_t n) {
        std::uniform_int_distribution<uint64_t> d(0, n - 1);
        return d(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace forrlab
