#pragma once

#include <cstdint>

namespace spd {

//! xorshift64* generator. A fixed algorithm (rather than std::mt19937 or
//! platform rand) so that seeded instance sweeps reproduce bit-identically
//! everywhere. Not suitable for cryptography.
class Xorshift64Star {
  public:
    explicit Xorshift64Star(uint64_t seed)
        : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ULL) {}

    uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 2685821657736338717ULL;
    }

    //! Uniform-ish draw in [0, bound). Plain modulo; the slight bias is
    //! irrelevant for test-instance generation and keeps the mapping fixed.
    uint64_t next_below(uint64_t bound) {
        return next() % bound;
    }

    //! True with probability percent/100.
    bool next_percent(unsigned percent) {
        return next_below(100) < percent;
    }

  private:
    uint64_t state_;
};

} // namespace spd
